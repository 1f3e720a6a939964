#include "cubecover/sobol.hpp"

#include <bit>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "cubecover/errors.hpp"

namespace cubecover {
namespace detail {
extern const std::string_view kDefaultDirectionNumbers;
}  // namespace detail

namespace {

constexpr int kBits = 32;

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

std::uint64_t parse_field(std::istringstream& row, std::size_t line_no, const char* what) {
  std::string token;
  if (!(row >> token)) throw ParseError(line_no, std::string("missing field '") + what + "'");
  std::uint64_t value = 0;
  std::size_t used = 0;
  try {
    if (token.empty() || token[0] == '-') throw std::invalid_argument("negative");
    value = std::stoull(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != token.size()) {
    throw ParseError(line_no, std::string("field '") + what + "' is not a nonnegative integer: '" +
                                  token + "'");
  }
  return value;
}

}  // namespace

DirectionTable::DirectionTable(std::vector<DirectionRecord> records)
    : records_(std::move(records)) {
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (records_[i].dim != static_cast<int>(i) + 2) {
      throw DomainError("direction records must cover dimensions 2, 3, ... in order");
    }
  }
}

const DirectionRecord& DirectionTable::record(int dim) const {
  if (dim < 2 || dim > max_dim()) {
    throw DomainError("no direction numbers for dimension " + std::to_string(dim));
  }
  return records_[static_cast<std::size_t>(dim - 2)];
}

DirectionTable parse_direction_numbers(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  std::vector<DirectionRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    if (!header) {
      header = true;
      continue;
    }
    std::istringstream row(line);
    DirectionRecord rec;
    const auto dim = parse_field(row, line_no, "d");
    const auto degree = parse_field(row, line_no, "s");
    const auto poly = parse_field(row, line_no, "a");
    const int expected = static_cast<int>(records.size()) + 2;
    if (dim != static_cast<std::uint64_t>(expected)) {
      throw ParseError(line_no, "expected dimension " + std::to_string(expected) + ", found " +
                                    std::to_string(dim));
    }
    if (degree < 1 || degree >= kBits) {
      throw ParseError(line_no, "degree " + std::to_string(degree) + " outside [1, 31]");
    }
    if (poly >= (std::uint64_t{1} << (degree - 1))) {
      throw ParseError(line_no, "polynomial coefficients " + std::to_string(poly) +
                                    " do not fit degree " + std::to_string(degree));
    }
    rec.dim = expected;
    rec.degree = static_cast<int>(degree);
    rec.poly = static_cast<std::uint32_t>(poly);
    for (std::uint64_t i = 1; i <= degree; ++i) {
      const auto m = parse_field(row, line_no, "m");
      if (m % 2 == 0 || m >= (std::uint64_t{1} << i)) {
        throw ParseError(line_no, "m_" + std::to_string(i) + " = " + std::to_string(m) +
                                      " must be odd and below 2^" + std::to_string(i));
      }
      rec.m.push_back(static_cast<std::uint32_t>(m));
    }
    std::string extra;
    if (row >> extra) throw ParseError(line_no, "unexpected trailing field '" + extra + "'");
    records.push_back(std::move(rec));
  }
  if (!header) throw ParseError(line_no, "direction-number file is empty");
  return DirectionTable(std::move(records));
}

DirectionTable load_direction_numbers(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open direction numbers '" + path.string() + "'");
  return parse_direction_numbers(in);
}

const DirectionTable& default_direction_table() {
  static const DirectionTable table = [] {
    std::istringstream in{std::string(detail::kDefaultDirectionNumbers)};
    return parse_direction_numbers(in);
  }();
  return table;
}

SobolGenerator::SobolGenerator(int d, const DirectionTable& table)
    : dim_(d), state_(static_cast<std::size_t>(d > 0 ? d : 0), 0) {
  if (d < 1 || d > table.max_dim()) {
    throw DomainError("Sobol dimension " + std::to_string(d) + " outside [1, " +
                      std::to_string(table.max_dim()) + "]");
  }
  directions_.resize(static_cast<std::size_t>(d) * kBits);
  for (int k = 0; k < kBits; ++k) directions_[static_cast<std::size_t>(k)] = 1U << (kBits - 1 - k);
  for (int j = 1; j < d; ++j) {
    const DirectionRecord& rec = table.record(j + 1);
    std::uint32_t* v = directions_.data() + static_cast<std::size_t>(j) * kBits;
    const int s = rec.degree;
    for (int k = 0; k < s && k < kBits; ++k) v[k] = rec.m[static_cast<std::size_t>(k)] << (kBits - 1 - k);
    for (int k = s; k < kBits; ++k) {
      std::uint32_t value = v[k - s] ^ (v[k - s] >> s);
      for (int i = 1; i < s; ++i) {
        if ((rec.poly >> (s - 1 - i)) & 1U) value ^= v[k - i];
      }
      v[k] = value;
    }
  }
}

void SobolGenerator::next(std::span<double> out) {
  if (out.size() != static_cast<std::size_t>(dim_)) {
    throw DimensionError("output span has size " + std::to_string(out.size()) +
                         ", generator dimension is " + std::to_string(dim_));
  }
  if (index_ >= (std::uint64_t{1} << kBits)) throw CapacityError("Sobol sequence exhausted");
  constexpr double kScale = 1.0 / 4294967296.0;
  for (int j = 0; j < dim_; ++j) out[static_cast<std::size_t>(j)] = state_[static_cast<std::size_t>(j)] * kScale;
  const int c = std::countr_one(index_);
  if (c < kBits) {
    for (int j = 0; j < dim_; ++j) {
      state_[static_cast<std::size_t>(j)] ^=
          directions_[static_cast<std::size_t>(j) * kBits + static_cast<std::size_t>(c)];
    }
  }
  ++index_;
}

std::vector<double> sobol_points(int d, std::size_t n, const DirectionTable& table) {
  SobolGenerator gen(d, table);
  const auto dim = static_cast<std::size_t>(d);
  std::vector<double> coords(n * dim);
  std::vector<double> origin(dim);
  gen.next(origin);
  for (std::size_t i = 0; i < n; ++i) gen.next(std::span<double>(coords).subspan(i * dim, dim));
  return coords;
}

Design sobol_design(int d, std::size_t n, const DirectionTable& table) {
  if (n == 0) throw DomainError("a Sobol design needs at least one point");
  std::vector<double> coords = sobol_points(d, n, table);
  for (double& v : coords) v = 2.0 * v - 1.0;
  return Design::from_points(DesignKind::Sobol, d, std::move(coords));
}

}  // namespace cubecover
