#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace cubecover {

enum class DesignKind { DnDelta, Dn0, Sobol, Custom };

std::string_view to_string(DesignKind kind) noexcept;

/// Largest dimension for which the vertex designs are enumerated point by point.
struct EnumerationCap {
  int max_dim = 25;
};

/// A finite point set in [-1, 1]^d.
///
/// The two vertex families (DnDelta, Dn0) may be held implicitly, without their
/// 2^(d-1) or 2^d points in memory; nearest-point queries on them always use
/// the closed-form vertex rule. Sobol and Custom designs are always explicit.
/// Instances are immutable and safe to share between threads.
class Design {
 public:
  /// Explicit Sobol or Custom design from row-major coordinates.
  /// Throws DomainError for other kinds, points outside [-1,1]^d, or a
  /// coordinate count that is not a multiple of `dim`.
  static Design from_points(DesignKind kind, int dim, std::vector<double> coords);

  /// Closed-form-only vertex designs; no enumeration cap applies.
  static Design implicit_dn_delta(int d, double delta);
  static Design implicit_dn0(int d);

  DesignKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  /// Number of design points (2^(d-1) for DnDelta may exceed any integer type).
  double count() const noexcept { return count_; }
  std::optional<double> delta() const noexcept { return delta_; }

  bool materialized() const noexcept { return !coords_.empty(); }
  std::size_t stored_points() const noexcept;
  std::span<const double> coords() const noexcept { return coords_; }
  /// Throws std::out_of_range for an index past stored_points().
  std::span<const double> point(std::size_t i) const;

  /// min_i ||x - Z_i||^2. Throws DimensionError if x.size() != dim().
  double nearest_sq_distance(std::span<const double> x) const;

 private:
  Design(DesignKind kind, int dim, double count, std::optional<double> delta,
         std::vector<double> coords);

  friend Design build_dn_delta(int d, double delta, EnumerationCap cap);
  friend Design build_dn0(int d, EnumerationCap cap);

  DesignKind kind_;
  int dim_;
  double count_;
  std::optional<double> delta_;
  std::vector<double> coords_;
};

/// The 2^(d-1) vertices of [-delta, delta]^d with an even number of negative
/// coordinates, (delta, ..., delta) first. Throws CapacityError for d > cap.
Design build_dn_delta(int d, double delta, EnumerationCap cap = {});

/// The 2^d vertices (+-1/2, ..., +-1/2). Throws CapacityError for d > cap.
Design build_dn0(int d, EnumerationCap cap = {});

/// Nearest squared distance to the even-parity vertex set of [-delta, delta]^d:
/// match signs, then if the parity is odd flip the coordinate of least |x_i|.
double dn_delta_nearest_sq(std::span<const double> x, double delta) noexcept;

/// Nearest squared distance to the vertices of [-1/2, 1/2]^d.
double dn0_nearest_sq(std::span<const double> x) noexcept;

/// Brute-force minimum over the stored points. Requires a materialized design.
double linear_scan_sq_distance(std::span<const double> x, const Design& design);

enum class VoronoiRegion { C0, U, OutsideV1 };

/// Position of x relative to the Voronoi cell of (delta, ..., delta) in a DnDelta
/// design. `index` is the 1-based j of U_j, 0 otherwise.
struct VoronoiMembership {
  VoronoiRegion region = VoronoiRegion::OutsideV1;
  int index = 0;
  std::vector<double> point;

  bool inside() const noexcept { return region != VoronoiRegion::OutsideV1; }
};

/// Classifies x in [-1,1]^d against the cell C0 U (U_1 ... U_d). The cell does
/// not depend on delta. Boundaries are closed; C0 wins ties, then the lowest j.
/// Throws DomainError when x leaves the cube and DimensionError if x.size() != d.
VoronoiMembership voronoi_membership(std::span<const double> x, int d);

/// CSV with header `x1,...,xd` and one 17-significant-digit row per point.
void write_design_csv(std::ostream& out, const Design& design);

/// Reads the CSV layout above as a Custom design. Throws ParseError.
Design read_design_csv(std::istream& in);

}  // namespace cubecover
