#include "cubecover/design.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "cubecover/errors.hpp"
#include "cubecover/format.hpp"

namespace cubecover {
namespace {

void require_dim(int d) {
  if (d < 1) throw DomainError("dimension must be >= 1, got " + std::to_string(d));
}

void require_delta(double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw DomainError("delta must lie in [0, 1], got " + format_number(delta));
  }
}

void require_cap(int d, EnumerationCap cap, int exponent) {
  if (d > cap.max_dim) {
    throw CapacityError("enumerating 2^" + std::to_string(exponent) + " points for d = " +
                        std::to_string(d) + " exceeds the cap d <= " +
                        std::to_string(cap.max_dim));
  }
}

void require_match(std::span<const double> x, int d) {
  if (static_cast<int>(x.size()) != d) {
    throw DimensionError("point has dimension " + std::to_string(x.size()) +
                         ", design has dimension " + std::to_string(d));
  }
}

}  // namespace

std::string_view to_string(DesignKind kind) noexcept {
  switch (kind) {
    case DesignKind::DnDelta: return "dn-delta";
    case DesignKind::Dn0: return "dn0";
    case DesignKind::Sobol: return "sobol";
    case DesignKind::Custom: return "custom";
  }
  return "unknown";
}

Design::Design(DesignKind kind, int dim, double count, std::optional<double> delta,
               std::vector<double> coords)
    : kind_(kind), dim_(dim), count_(count), delta_(delta), coords_(std::move(coords)) {}

Design Design::from_points(DesignKind kind, int dim, std::vector<double> coords) {
  if (kind != DesignKind::Sobol && kind != DesignKind::Custom) {
    throw DomainError("from_points only builds sobol or custom designs");
  }
  require_dim(dim);
  if (coords.empty() || coords.size() % static_cast<std::size_t>(dim) != 0) {
    throw DomainError("coordinate count " + std::to_string(coords.size()) +
                      " is not a positive multiple of the dimension " + std::to_string(dim));
  }
  for (double v : coords) {
    if (!(v >= -1.0 && v <= 1.0)) {
      throw DomainError("design point coordinate " + format_number(v) + " outside [-1, 1]");
    }
  }
  const auto n = coords.size() / static_cast<std::size_t>(dim);
  return Design(kind, dim, static_cast<double>(n), std::nullopt, std::move(coords));
}

Design Design::implicit_dn_delta(int d, double delta) {
  require_dim(d);
  require_delta(delta);
  return Design(DesignKind::DnDelta, d, std::ldexp(1.0, d - 1), delta, {});
}

Design Design::implicit_dn0(int d) {
  require_dim(d);
  return Design(DesignKind::Dn0, d, std::ldexp(1.0, d), 0.5, {});
}

std::size_t Design::stored_points() const noexcept {
  return coords_.size() / static_cast<std::size_t>(dim_);
}

std::span<const double> Design::point(std::size_t i) const {
  if (i >= stored_points()) throw std::out_of_range("design point index out of range");
  return std::span<const double>(coords_).subspan(i * static_cast<std::size_t>(dim_),
                                                  static_cast<std::size_t>(dim_));
}

double Design::nearest_sq_distance(std::span<const double> x) const {
  require_match(x, dim_);
  switch (kind_) {
    case DesignKind::DnDelta: return dn_delta_nearest_sq(x, *delta_);
    case DesignKind::Dn0: return dn0_nearest_sq(x);
    case DesignKind::Sobol:
    case DesignKind::Custom: break;
  }
  return linear_scan_sq_distance(x, *this);
}

Design build_dn_delta(int d, double delta, EnumerationCap cap) {
  require_dim(d);
  require_delta(delta);
  require_cap(d, cap, d - 1);
  const std::size_t n = std::size_t{1} << (d - 1);
  std::vector<double> coords;
  coords.reserve(n * static_cast<std::size_t>(d));
  // Mask bit i of the first d-1 coordinates marks a negative sign; the last
  // coordinate takes whatever sign restores even parity. Mask 0 is (delta, ..., delta).
  for (std::size_t mask = 0; mask < n; ++mask) {
    int negatives = 0;
    for (int i = 0; i < d - 1; ++i) {
      const bool neg = (mask >> i) & 1U;
      negatives += neg;
      coords.push_back(neg ? -delta : delta);
    }
    coords.push_back(negatives % 2 == 1 ? -delta : delta);
  }
  return Design(DesignKind::DnDelta, d, static_cast<double>(n), delta, std::move(coords));
}

Design build_dn0(int d, EnumerationCap cap) {
  require_dim(d);
  require_cap(d, cap, d);
  const std::size_t n = std::size_t{1} << d;
  std::vector<double> coords;
  coords.reserve(n * static_cast<std::size_t>(d));
  for (std::size_t mask = 0; mask < n; ++mask) {
    for (int i = 0; i < d; ++i) coords.push_back((mask >> i) & 1U ? -0.5 : 0.5);
  }
  return Design(DesignKind::Dn0, d, static_cast<double>(n), 0.5, std::move(coords));
}

double dn_delta_nearest_sq(std::span<const double> x, double delta) noexcept {
  bool odd = false;
  std::size_t weakest = 0;
  double weakest_abs = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < 0.0) odd = !odd;
    const double a = std::abs(x[i]);
    if (a < weakest_abs) {
      weakest_abs = a;
      weakest = i;
    }
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    bool negative = x[i] < 0.0;
    if (odd && i == weakest) negative = !negative;
    const double diff = x[i] - (negative ? -delta : delta);
    acc += diff * diff;
  }
  return acc;
}

double dn0_nearest_sq(std::span<const double> x) noexcept {
  double acc = 0.0;
  for (double v : x) {
    const double diff = v - (v < 0.0 ? -0.5 : 0.5);
    acc += diff * diff;
  }
  return acc;
}

double linear_scan_sq_distance(std::span<const double> x, const Design& design) {
  if (!design.materialized()) {
    throw DomainError("linear scan needs an explicitly enumerated design");
  }
  require_match(x, design.dim());
  const auto coords = design.coords();
  const auto d = static_cast<std::size_t>(design.dim());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t offset = 0; offset < coords.size(); offset += d) {
    double acc = 0.0;
    std::size_t i = 0;
    for (; i < d && acc < best; ++i) {
      const double diff = x[i] - coords[offset + i];
      acc += diff * diff;
    }
    if (i == d && acc < best) best = acc;
  }
  return best;
}

VoronoiMembership voronoi_membership(std::span<const double> x, int d) {
  require_dim(d);
  require_match(x, d);
  for (double v : x) {
    if (!(v >= -1.0 && v <= 1.0)) {
      throw DomainError("membership query " + format_number(v) + " outside [-1, 1]");
    }
  }
  VoronoiMembership result;
  result.point.assign(x.begin(), x.end());

  bool in_c0 = true;
  for (double v : x) in_c0 = in_c0 && v >= 0.0;
  if (in_c0) {
    result.region = VoronoiRegion::C0;
    return result;
  }
  for (int j = 0; j < d; ++j) {
    const double xj = x[static_cast<std::size_t>(j)];
    if (xj > 0.0) continue;
    bool ok = true;
    for (int k = 0; k < d && ok; ++k) {
      if (k != j) ok = x[static_cast<std::size_t>(k)] >= -xj;
    }
    if (ok) {
      result.region = VoronoiRegion::U;
      result.index = j + 1;
      return result;
    }
  }
  return result;
}

void write_design_csv(std::ostream& out, const Design& design) {
  if (!design.materialized()) {
    throw DomainError("cannot write an implicit design; enumerate it first");
  }
  for (int i = 0; i < design.dim(); ++i) out << (i ? "," : "") << 'x' << i + 1;
  out << '\n';
  for (std::size_t p = 0; p < design.stored_points(); ++p) {
    const auto pt = design.point(p);
    for (std::size_t i = 0; i < pt.size(); ++i) out << (i ? "," : "") << format_number(pt[i]);
    out << '\n';
  }
}

Design read_design_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  int dim = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) {
      if (cell != "x" + std::to_string(dim + 1)) {
        throw ParseError(line_no, "expected header cell x" + std::to_string(dim + 1) +
                                      ", found '" + cell + "'");
      }
      ++dim;
    }
    break;
  }
  if (dim == 0) throw ParseError(line_no, "missing design CSV header");

  std::vector<double> coords;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    int count = 0;
    while (std::getline(row, cell, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != cell.size()) {
        throw ParseError(line_no, "not a number: '" + cell + "'");
      }
      coords.push_back(v);
      ++count;
    }
    if (count != dim) {
      throw ParseError(line_no, "expected " + std::to_string(dim) + " values, found " +
                                    std::to_string(count));
    }
  }
  if (coords.empty()) throw ParseError(line_no, "design CSV has no points");
  try {
    return Design::from_points(DesignKind::Custom, dim, std::move(coords));
  } catch (const DomainError& e) {
    throw ParseError(line_no, e.what());
  }
}

}  // namespace cubecover
