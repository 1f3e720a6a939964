#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cubecover/design.hpp"
#include "cubecover/monte_carlo.hpp"

namespace cubecover {

// ---------------------------------------------------------------------------
// Ball-cube fractions C_{d,Z,r}: the share of [-1,1]^d inside the ball B(Z, r).
// ---------------------------------------------------------------------------

/// Mean, variance and third central moment of ||U - Z||^2 for U uniform on
/// [-1,1]^d. They depend on Z only through ||Z||^2.
struct ApproxMoments {
  double mu = 0.0;
  double sigma_sq = 0.0;
  double mu3 = 0.0;
};

ApproxMoments ball_cube_moments(int d, double z_norm_sq);

enum class FractionMethod { EdgeworthApprox, MonteCarlo, ExactSpecial };

std::string_view to_string(FractionMethod method) noexcept;

struct BallCubeFraction {
  double value = 0.0;
  FractionMethod method = FractionMethod::EdgeworthApprox;
  double std_error = 0.0;
  double z_norm_sq = 0.0;
  double r = 0.0;
  int d = 0;
};

/// Summary of a ball centre sufficient to detect the geometrically exact cases.
struct BallCenter {
  double norm_sq = 0.0;     ///< ||Z||^2
  double l1 = 0.0;          ///< sum |z_i|
  double max_abs = 0.0;     ///< max |z_i|
  double outside_sq = 0.0;  ///< squared distance from Z to the cube

  /// The constant vector (b, ..., b) in R^d.
  static BallCenter uniform(int d, double b);
  static BallCenter from_point(std::span<const double> z);
};

/// First-order Edgeworth approximation of C_{d,Z,r}, clamped to [0, 1]:
///
///   t = sqrt(3) (r^2 - ||Z||^2 - d/3) / (2 sqrt(||Z||^2 + d/15))
///   C ~ Phi(t) + (||Z||^2 + d/63) / (5 sqrt(3) (||Z||^2 + d/15)^(3/2)) (1 - t^2) phi(t)
///
/// r == 0 and r >= ||Z|| + sqrt(d) are answered exactly (0 and 1).
BallCubeFraction approx_ball_cube_fraction(int d, double z_norm_sq, double r);

/// As above, with the additional exact cases the centre summary exposes: a ball
/// missing the cube (0), a ball inside the cube (its volume over 2^d), a ball
/// containing the cube (1), and d == 1 (interval overlap).
BallCubeFraction approx_ball_cube_fraction(int d, const BallCenter& center, double r);

/// Just the Edgeworth formula, without clamping or exact shortcuts.
double edgeworth_ball_cube_fraction(int d, double z_norm_sq, double r) noexcept;

/// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

/// Monte Carlo share of uniform X in [-1,1]^d with ||X - Z|| <= r.
BallCubeFraction mc_ball_cube_fraction(std::span<const double> center, double r,
                                       const McConfig& config);

// ---------------------------------------------------------------------------
// Coverage of the cube by the balls around a design.
// ---------------------------------------------------------------------------

enum class Regime { RLeDelta, Mid, RGe1PlusDelta };
enum class CoverageMethod { Approximation, MonteCarlo, LowerBound, UpperBound };

std::string_view to_string(Regime regime) noexcept;
std::string_view to_string(CoverageMethod method) noexcept;

/// Regime of r relative to delta: r <= delta, delta < r < 1 + delta, r >= 1 + delta.
Regime coverage_regime(double delta, double r) noexcept;

struct CoverageResult {
  double value = 0.0;
  std::optional<Regime> regime;  ///< only for D_{n,delta}
  CoverageMethod method = CoverageMethod::Approximation;
  double std_error = 0.0;
  int d = 0;
  std::optional<double> delta;
  double r = 0.0;
  double R = 0.0;  ///< normalized radius
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

/// C_d(D_{n,delta}, r) via the Voronoi-cell decomposition of the design, every
/// ball-cube fraction replaced by the ||Z||^2 form of approx_ball_cube_fraction:
///
///   r <= delta:          C(d, 2delta-1, 2r) / 2
///   otherwise:           [C(d, 2delta-1, 2r) + d * I] / 2,
///   I = int_0^T C(d-1, (2delta-1-t)/(1-t), 2 sqrt(r^2-(t+delta)^2)/(1-t)) (1-t)^(d-1) dt
///
/// with T = r - delta below 1 + delta and T = 1 above.
CoverageResult coverage_dn_delta(int d, double delta, double r);

/// Monte Carlo share of uniform X with nearest_sq_distance(X) <= r^2.
CoverageResult mc_coverage(const Design& design, double r, const McConfig& config);

struct CoverageBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// lower = [C(d, 2delta-1, 2r) + C(d, A, 2r)] / 2 with A = (2delta+1, 2delta-1, ...),
/// upper = C(d, 2delta-1, 2r); same evaluator as coverage_dn_delta.
CoverageBounds coverage_bounds(int d, double delta, double r);

// ---------------------------------------------------------------------------
// Radii and normalized statistics.
// ---------------------------------------------------------------------------

/// n^(1/d) r / (2 sqrt(d)).
double normalized_radius(double n, int d, double r);

/// (sqrt(d) R)^d; may overflow to +inf for large d, see log_thickness.
double thickness(int d, double R);

/// d * log(sqrt(d) R).
double log_thickness(int d, double R);

struct RadiusSolution {
  int d = 0;
  std::optional<double> delta;
  double gamma = 0.0;
  double r = 0.0;
  double R = 0.0;
  double thickness = 0.0;
  double solver_tol = 0.0;
  /// Non-fatal solver diagnostics, e.g. a non-monotone evaluator.
  std::vector<std::string> warnings;
};

enum class RadiusMethod { Approximation, MonteCarlo };

/// Smallest r with C_d(D_{n,delta}, r) = 1 - gamma, by bisection on [0, 2 sqrt(d)].
/// Stops at |C - (1 - gamma)| <= 1e-6 or a bracket narrower than 1e-9.
/// The MonteCarlo method bisects the empirical coverage of one sample set drawn
/// with `mc`. Requires 0 < gamma < 1.
RadiusSolution radius_for_coverage(int d, double delta, double gamma, RadiusMethod method,
                                   const McConfig& mc = {});

/// Monte Carlo radius for an arbitrary design.
RadiusSolution radius_for_coverage(const Design& design, double gamma, const McConfig& mc);

/// r_1, the radius at which the design covers the whole cube.
/// DnDelta: sqrt(max(d delta^2, (1 + delta)^2 + (d - 1)(1 - delta)^2)); Dn0: sqrt(d)/2.
RadiusSolution full_cover_radius(DesignKind kind, int d, double delta = 0.5);

/// Sorted nearest squared distances from one Monte Carlo pass.
class DistanceSample {
 public:
  static DistanceSample draw(const Design& design, const McConfig& config);

  std::uint64_t samples() const noexcept { return sorted_sq_.size(); }
  std::uint64_t seed() const noexcept { return seed_; }
  std::span<const double> sorted_sq() const noexcept { return sorted_sq_; }

  /// Mean of rho^2 summed in sample order (the quantization estimate).
  double mean_sq() const noexcept { return mean_sq_; }
  double mean_sq_std_error() const noexcept { return mean_sq_std_error_; }

  /// Empirical share of samples with rho <= r.
  double ecdf(double r) const noexcept;

  /// int r^2 dF(r) against the empirical distribution: the sum of jump sizes
  /// times squared jump locations.
  double stieltjes_second_moment() const noexcept;

 private:
  std::vector<double> sorted_sq_;
  std::uint64_t seed_ = 0;
  double mean_sq_ = 0.0;
  double mean_sq_std_error_ = 0.0;
};

struct CdfPoint {
  double r = 0.0;
  double R = 0.0;
  double cdf = 0.0;
  double std_error = 0.0;
};

/// Empirical distribution of the nearest distance at each grid radius, from a
/// single Monte Carlo pass. Requires `r_grid` sorted ascending.
std::vector<CdfPoint> distance_cdf_curve(const Design& design, std::span<const double> r_grid,
                                         const McConfig& config);

/// `d,delta,r,R,gamma,value,method,regime,stderr,samples,seed`; gamma is 1 - value.
void write_coverage_csv_header(std::ostream& out);
void write_coverage_csv_row(std::ostream& out, const CoverageResult& result);

/// `d,delta,gamma,r,R,thickness,solver_tol`
void write_radius_csv_header(std::ostream& out);
void write_radius_csv_row(std::ostream& out, const RadiusSolution& solution);

}  // namespace cubecover
