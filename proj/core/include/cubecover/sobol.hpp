#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "cubecover/design.hpp"

namespace cubecover {

/// Primitive polynomial and initial direction integers for one dimension.
struct DirectionRecord {
  int dim = 0;
  int degree = 0;
  std::uint32_t poly = 0;  ///< interior coefficients a, without the leading and trailing 1
  std::vector<std::uint32_t> m;
};

/// Direction numbers for dimensions 2..max_dim; dimension 1 is the van der
/// Corput sequence and has no record.
class DirectionTable {
 public:
  DirectionTable() = default;
  explicit DirectionTable(std::vector<DirectionRecord> records);

  int max_dim() const noexcept { return static_cast<int>(records_.size()) + 1; }
  /// Record for dimension `dim` in [2, max_dim()].
  const DirectionRecord& record(int dim) const;

 private:
  std::vector<DirectionRecord> records_;
};

/// Parses the whitespace-delimited format: one header line, then rows
/// `d s a m_1 ... m_s`. Dimensions must start at 2 and increase by one; every
/// m_i must be odd and below 2^i. Throws ParseError with the offending line.
DirectionTable parse_direction_numbers(std::istream& in);

/// Throws IoError if the file cannot be opened.
DirectionTable load_direction_numbers(const std::filesystem::path& path);

/// Joe-Kuo direction numbers (new-joe-kuo-6) for dimensions 1..1024.
const DirectionTable& default_direction_table();

/// Gray-code Sobol generator with 32-bit resolution.
class SobolGenerator {
 public:
  /// Throws DomainError when d is outside [1, table.max_dim()].
  SobolGenerator(int d, const DirectionTable& table);

  int dim() const noexcept { return dim_; }
  /// Index of the point the next call to next() returns.
  std::uint64_t index() const noexcept { return index_; }

  /// Writes point index() to `out` (size dim()) and advances. The first point
  /// (index 0) is the origin.
  void next(std::span<double> out);

 private:
  int dim_;
  std::uint64_t index_ = 0;
  std::vector<std::uint32_t> state_;
  std::vector<std::uint32_t> directions_;  // dim_ x 32, row per dimension
};

/// Points 1..n of the sequence in [0,1)^d, row-major. The origin is skipped.
std::vector<double> sobol_points(int d, std::size_t n, const DirectionTable& table);

/// sobol_points mapped by x -> 2x - 1, as a Sobol design.
Design sobol_design(int d, std::size_t n, const DirectionTable& table);

}  // namespace cubecover
