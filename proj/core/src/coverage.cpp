#include "cubecover/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "cubecover/errors.hpp"
#include "cubecover/format.hpp"
#include "cubecover/normal.hpp"
#include "cubecover/quadrature.hpp"

namespace cubecover {
namespace {

constexpr double kCoverageTolerance = 1e-6;
constexpr double kRadiusTolerance = 1e-9;
constexpr double kQuadratureTolerance = 1e-8;
constexpr int kScanPoints = 64;
// Above this dimension (1 - t)^(d - 1) is evaluated as exp((d - 1) log1p(-t)).
constexpr int kLogWeightDim = 50;

void require_dim(int d) {
  if (d < 1) throw DomainError("dimension must be >= 1, got " + std::to_string(d));
}

void require_delta(double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw DomainError("delta must lie in [0, 1], got " + format_number(delta));
  }
}

void require_radius(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw DomainError("radius must be finite and nonnegative, got " + format_number(r));
  }
}

void require_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw DomainError("gamma must lie in (0, 1), got " + format_number(gamma));
  }
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

double dn_delta_count(int d) { return std::ldexp(1.0, d - 1); }

BallCubeFraction make_fraction(int d, double z_norm_sq, double r, double value,
                               FractionMethod method) {
  BallCubeFraction f;
  f.value = value;
  f.method = method;
  f.z_norm_sq = z_norm_sq;
  f.r = r;
  f.d = d;
  return f;
}

// rho^2 for every sample, in sample order.
std::vector<double> sample_nearest_sq(const Design& design, const McConfig& config) {
  require_mc_samples(config);
  std::vector<double> sq(config.samples);
  const auto d = static_cast<std::size_t>(design.dim());
  for_each_uniform_block(config, design.dim(),
                         [&](std::uint64_t first, std::size_t count, std::span<const double> pts) {
                           for (std::size_t s = 0; s < count; ++s) {
                             sq[first + s] = design.nearest_sq_distance(pts.subspan(s * d, d));
                           }
                         });
  return sq;
}

// Weight (1 - t)^(d - 1) of the slice integrand.
double slice_weight(int d, double t) {
  if (d == 1) return 1.0;
  if (d > kLogWeightDim) return std::exp((d - 1) * std::log1p(-t));
  return std::pow(1.0 - t, d - 1);
}

// Share of the slice {x_1 = -t} of U_1 covered by B(delta, r), already scaled
// by the slice volume (1 - t)^(d - 1).
double slice_integrand(int d, double delta, double r, double t) {
  if (t >= 1.0) return 0.0;
  const double weight = slice_weight(d, t);
  if (weight == 0.0) return 0.0;
  const double radicand = r * r - (t + delta) * (t + delta);
  if (radicand < 0.0) return 0.0;
  if (d == 1) return weight;  // the slice is a single point inside the ball
  const double center = (2.0 * delta - 1.0 - t) / (1.0 - t);
  const double radius = 2.0 * std::sqrt(radicand) / (1.0 - t);
  return approx_ball_cube_fraction(d - 1, (d - 1) * center * center, radius).value * weight;
}

RadiusSolution finish_solution(int d, std::optional<double> delta, double n, double gamma,
                               double r, double tol) {
  RadiusSolution s;
  s.d = d;
  s.delta = delta;
  s.gamma = gamma;
  s.r = r;
  s.R = normalized_radius(n, d, r);
  s.thickness = thickness(d, s.R);
  s.solver_tol = tol;
  return s;
}

RadiusSolution radius_from_sample(const DistanceSample& sample, const Design& design,
                                  double gamma) {
  const auto n = sample.samples();
  const double target = 1.0 - gamma;
  // Smallest order statistic whose empirical coverage reaches the target: the
  // exact limit of bisecting the empirical step function.
  auto k = static_cast<std::uint64_t>(std::ceil(target * static_cast<double>(n)));
  k = std::clamp<std::uint64_t>(k, 1, n);
  const double r = std::sqrt(sample.sorted_sq()[k - 1]);
  return finish_solution(design.dim(), design.delta(), design.count(), gamma, r, 0.0);
}

}  // namespace

// ---------------------------------------------------------------------------

ApproxMoments ball_cube_moments(int d, double z_norm_sq) {
  require_dim(d);
  if (!(z_norm_sq >= 0.0)) throw DomainError("||Z||^2 must be nonnegative");
  const double dd = d;
  return {z_norm_sq + dd / 3.0, 4.0 / 3.0 * (z_norm_sq + dd / 15.0),
          16.0 / 15.0 * (z_norm_sq + dd / 63.0)};
}

std::string_view to_string(FractionMethod method) noexcept {
  switch (method) {
    case FractionMethod::EdgeworthApprox: return "edgeworth";
    case FractionMethod::MonteCarlo: return "monte-carlo";
    case FractionMethod::ExactSpecial: return "exact";
  }
  return "unknown";
}

BallCenter BallCenter::uniform(int d, double b) {
  const double a = std::abs(b);
  const double out = std::max(a - 1.0, 0.0);
  return {d * b * b, d * a, a, d * out * out};
}

BallCenter BallCenter::from_point(std::span<const double> z) {
  BallCenter c;
  for (double v : z) {
    const double a = std::abs(v);
    const double out = std::max(a - 1.0, 0.0);
    c.norm_sq += v * v;
    c.l1 += a;
    c.max_abs = std::max(c.max_abs, a);
    c.outside_sq += out * out;
  }
  return c;
}

double edgeworth_ball_cube_fraction(int d, double z_norm_sq, double r) noexcept {
  const double spread = z_norm_sq + d / 15.0;
  const double t =
      std::numbers::sqrt3 * (r * r - z_norm_sq - d / 3.0) / (2.0 * std::sqrt(spread));
  const double skew =
      (z_norm_sq + d / 63.0) / (5.0 * std::numbers::sqrt3 * spread * std::sqrt(spread));
  return normal_cdf(t) + skew * (1.0 - t * t) * normal_pdf(t);
}

double unit_ball_volume(int d) {
  require_dim(d);
  const double half = 0.5 * d;
  return std::exp(half * std::log(std::numbers::pi) - std::lgamma(half + 1.0));
}

BallCubeFraction approx_ball_cube_fraction(int d, double z_norm_sq, double r) {
  require_dim(d);
  require_radius(r);
  if (!(z_norm_sq >= 0.0)) throw DomainError("||Z||^2 must be nonnegative");
  if (r == 0.0) return make_fraction(d, z_norm_sq, r, 0.0, FractionMethod::ExactSpecial);
  if (r >= std::sqrt(z_norm_sq) + std::sqrt(static_cast<double>(d))) {
    return make_fraction(d, z_norm_sq, r, 1.0, FractionMethod::ExactSpecial);
  }
  return make_fraction(d, z_norm_sq, r, clamp01(edgeworth_ball_cube_fraction(d, z_norm_sq, r)),
                       FractionMethod::EdgeworthApprox);
}

BallCubeFraction approx_ball_cube_fraction(int d, const BallCenter& center, double r) {
  require_dim(d);
  require_radius(r);
  const double r2 = r * r;
  const auto exact = [&](double v) {
    return make_fraction(d, center.norm_sq, r, v, FractionMethod::ExactSpecial);
  };
  if (r2 <= center.outside_sq) return exact(0.0);
  // Farthest cube vertex from Z sits at squared distance sum (|z_i| + 1)^2.
  if (r2 >= center.norm_sq + 2.0 * center.l1 + d) return exact(1.0);
  if (d == 1) {
    const double z = center.max_abs;
    const double lo = std::max(z - r, -1.0);
    const double hi = std::min(z + r, 1.0);
    return exact(clamp01(std::max(hi - lo, 0.0) / 2.0));
  }
  if (center.max_abs + r <= 1.0) {
    return exact(std::exp(std::log(unit_ball_volume(d)) + d * std::log(r / 2.0)));
  }
  return make_fraction(d, center.norm_sq, r,
                       clamp01(edgeworth_ball_cube_fraction(d, center.norm_sq, r)),
                       FractionMethod::EdgeworthApprox);
}

BallCubeFraction mc_ball_cube_fraction(std::span<const double> center, double r,
                                       const McConfig& config) {
  const int d = static_cast<int>(center.size());
  require_dim(d);
  require_radius(r);
  require_mc_samples(config);
  const std::uint64_t blocks = (config.samples + kMcBlockSize - 1) / kMcBlockSize;
  std::vector<std::uint64_t> hits(blocks, 0);
  const double r2 = r * r;
  for_each_uniform_block(config, d, [&](std::uint64_t first, std::size_t count,
                                        std::span<const double> pts) {
    std::uint64_t inside = 0;
    for (std::size_t s = 0; s < count; ++s) {
      double acc = 0.0;
      for (int i = 0; i < d; ++i) {
        const double diff = pts[s * static_cast<std::size_t>(d) + static_cast<std::size_t>(i)] -
                            center[static_cast<std::size_t>(i)];
        acc += diff * diff;
      }
      inside += acc <= r2;
    }
    hits[first / kMcBlockSize] = inside;
  });
  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  const double p = static_cast<double>(total) / static_cast<double>(config.samples);
  double norm_sq = 0.0;
  for (double v : center) norm_sq += v * v;
  BallCubeFraction f = make_fraction(d, norm_sq, r, p, FractionMethod::MonteCarlo);
  f.std_error = binomial_std_error(p, config.samples);
  return f;
}

// ---------------------------------------------------------------------------

std::string_view to_string(Regime regime) noexcept {
  switch (regime) {
    case Regime::RLeDelta: return "r<=delta";
    case Regime::Mid: return "mid";
    case Regime::RGe1PlusDelta: return "r>=1+delta";
  }
  return "unknown";
}

std::string_view to_string(CoverageMethod method) noexcept {
  switch (method) {
    case CoverageMethod::Approximation: return "approx";
    case CoverageMethod::MonteCarlo: return "monte-carlo";
    case CoverageMethod::LowerBound: return "lower-bound";
    case CoverageMethod::UpperBound: return "upper-bound";
  }
  return "unknown";
}

Regime coverage_regime(double delta, double r) noexcept {
  if (r <= delta) return Regime::RLeDelta;
  if (r >= 1.0 + delta) return Regime::RGe1PlusDelta;
  return Regime::Mid;
}

CoverageResult coverage_dn_delta(int d, double delta, double r) {
  require_dim(d);
  require_delta(delta);
  require_radius(r);

  CoverageResult result;
  result.regime = coverage_regime(delta, r);
  result.method = CoverageMethod::Approximation;
  result.d = d;
  result.delta = delta;
  result.r = r;
  result.R = normalized_radius(dn_delta_count(d), d, r);
  if (r == 0.0) return result;

  // C0 = [0,1]^d maps onto [-1,1]^d under x -> 2x - 1, taking B(delta, r) to
  // B(2delta - 1, 2r).
  // Only the ||Z||-based evaluator here: the geometric shortcuts of the
  // BallCenter overload switch on exactly at r = delta and would make the
  // coverage jump (and dip) across the regime boundary.
  const double b = 2.0 * delta - 1.0;
  const double cube_part = approx_ball_cube_fraction(d, d * b * b, 2.0 * r).value;
  if (*result.regime == Regime::RLeDelta) {
    result.value = clamp01(0.5 * cube_part);
    return result;
  }

  const double upper = std::min(r - delta, 1.0);
  const QuadratureResult slices = integrate_adaptive(
      [&](double t) { return slice_integrand(d, delta, r, t); }, 0.0, upper,
      {.abs_tol = kQuadratureTolerance});
  result.value = clamp01(0.5 * (cube_part + d * slices.value));
  return result;
}

CoverageResult mc_coverage(const Design& design, double r, const McConfig& config) {
  require_radius(r);
  const std::vector<double> sq = sample_nearest_sq(design, config);
  const double r2 = r * r;
  std::uint64_t inside = 0;
  for (double v : sq) inside += v <= r2;
  const double p = static_cast<double>(inside) / static_cast<double>(sq.size());

  CoverageResult result;
  result.value = p;
  result.method = CoverageMethod::MonteCarlo;
  result.std_error = binomial_std_error(p, sq.size());
  result.d = design.dim();
  result.delta = design.delta();
  if (design.kind() == DesignKind::DnDelta) result.regime = coverage_regime(*design.delta(), r);
  result.r = r;
  result.R = normalized_radius(design.count(), design.dim(), r);
  result.samples = config.samples;
  result.seed = config.seed;
  return result;
}

CoverageBounds coverage_bounds(int d, double delta, double r) {
  require_dim(d);
  require_delta(delta);
  require_radius(r);
  const double b = 2.0 * delta - 1.0;
  const double upper = approx_ball_cube_fraction(d, d * b * b, 2.0 * r).value;

  // A = (2delta + 1, 2delta - 1, ..., 2delta - 1): the image of B(delta, r) when the
  // neighbouring cube C_1 is mapped onto [-1,1]^d.
  const double a1 = 2.0 * delta + 1.0;
  const double side = approx_ball_cube_fraction(d, a1 * a1 + (d - 1) * b * b, 2.0 * r).value;
  return {0.5 * (upper + side), upper};
}

// ---------------------------------------------------------------------------

double normalized_radius(double n, int d, double r) {
  require_dim(d);
  if (!(n > 0.0)) throw DomainError("point count must be positive");
  return std::exp(std::log(n) / d) * r / (2.0 * std::sqrt(static_cast<double>(d)));
}

double thickness(int d, double R) {
  require_dim(d);
  return std::pow(std::sqrt(static_cast<double>(d)) * R, d);
}

double log_thickness(int d, double R) {
  require_dim(d);
  return d * std::log(std::sqrt(static_cast<double>(d)) * R);
}

RadiusSolution radius_for_coverage(int d, double delta, double gamma, RadiusMethod method,
                                   const McConfig& mc) {
  require_dim(d);
  require_delta(delta);
  require_gamma(gamma);
  if (method == RadiusMethod::MonteCarlo) {
    const Design design = Design::implicit_dn_delta(d, delta);
    return radius_from_sample(DistanceSample::draw(design, mc), design, gamma);
  }

  const double target = 1.0 - gamma;
  const auto coverage = [&](double r) { return coverage_dn_delta(d, delta, r).value; };
  const double top = 2.0 * std::sqrt(static_cast<double>(d));

  // Coarse scan for every upward crossing of the target; the approximation may
  // jitter, so bisect the last one and report what was seen.
  std::vector<double> grid(kScanPoints + 1), values(kScanPoints + 1);
  for (int k = 0; k <= kScanPoints; ++k) {
    grid[k] = top * k / kScanPoints;
    values[k] = coverage(grid[k]);
  }
  std::vector<int> crossings;
  bool dips = false;
  for (int k = 0; k < kScanPoints; ++k) {
    if (values[k] < target && values[k + 1] >= target) crossings.push_back(k);
    if (values[k + 1] < values[k] - kCoverageTolerance) dips = true;
  }

  std::vector<std::string> warnings;
  if (dips) warnings.emplace_back("coverage evaluator is not monotone in r beyond 1e-6");
  if (crossings.empty()) {
    throw Error("coverage never reaches " + format_number(target) + " on [0, 2 sqrt(d)]");
  }
  if (crossings.size() > 1) {
    warnings.emplace_back(std::to_string(crossings.size()) +
                          " crossings of the target; bisected the last");
  }

  double lo = grid[crossings.back()];
  double hi = grid[crossings.back() + 1];
  double r = hi;
  while (hi - lo > kRadiusTolerance) {
    const double mid = 0.5 * (lo + hi);
    const double value = coverage(mid);
    if (std::abs(value - target) <= kCoverageTolerance) {
      r = mid;
      break;
    }
    if (value < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    r = hi;
  }
  RadiusSolution s = finish_solution(d, delta, dn_delta_count(d), gamma, r, kRadiusTolerance);
  s.warnings = std::move(warnings);
  return s;
}

RadiusSolution radius_for_coverage(const Design& design, double gamma, const McConfig& mc) {
  require_gamma(gamma);
  return radius_from_sample(DistanceSample::draw(design, mc), design, gamma);
}

RadiusSolution full_cover_radius(DesignKind kind, int d, double delta) {
  require_dim(d);
  switch (kind) {
    case DesignKind::DnDelta: {
      require_delta(delta);
      // Farthest vertex of the Voronoi cell of (delta, ..., delta): either the
      // origin or (-1, 1, ..., 1).
      const double far = std::max(d * delta * delta, (1.0 + delta) * (1.0 + delta) +
                                                         (d - 1) * (1.0 - delta) * (1.0 - delta));
      return finish_solution(d, delta, dn_delta_count(d), 0.0, std::sqrt(far), 0.0);
    }
    case DesignKind::Dn0:
      return finish_solution(d, 0.5, std::ldexp(1.0, d), 0.0,
                             std::sqrt(static_cast<double>(d)) / 2.0, 0.0);
    case DesignKind::Sobol:
    case DesignKind::Custom: break;
  }
  throw DomainError("full-cover radius is only known in closed form for dn-delta and dn0");
}

// ---------------------------------------------------------------------------

DistanceSample DistanceSample::draw(const Design& design, const McConfig& config) {
  DistanceSample sample;
  sample.sorted_sq_ = sample_nearest_sq(design, config);
  const MeanEstimate estimate = mean_with_std_error(sample.sorted_sq_);
  sample.mean_sq_ = estimate.mean;
  sample.mean_sq_std_error_ = estimate.std_error;
  sample.seed_ = config.seed;
  std::sort(sample.sorted_sq_.begin(), sample.sorted_sq_.end());
  return sample;
}

double DistanceSample::ecdf(double r) const noexcept {
  if (sorted_sq_.empty()) return 0.0;
  const auto it = std::upper_bound(sorted_sq_.begin(), sorted_sq_.end(), r * r);
  return static_cast<double>(it - sorted_sq_.begin()) / static_cast<double>(sorted_sq_.size());
}

double DistanceSample::stieltjes_second_moment() const noexcept {
  const auto n = static_cast<double>(sorted_sq_.size());
  double total = 0.0;
  for (std::size_t i = 0; i < sorted_sq_.size();) {
    std::size_t j = i;
    while (j < sorted_sq_.size() && sorted_sq_[j] == sorted_sq_[i]) ++j;
    total += sorted_sq_[i] * (static_cast<double>(j - i) / n);
    i = j;
  }
  return total;
}

std::vector<CdfPoint> distance_cdf_curve(const Design& design, std::span<const double> r_grid,
                                         const McConfig& config) {
  if (!std::is_sorted(r_grid.begin(), r_grid.end())) {
    throw DomainError("radius grid must be sorted ascending");
  }
  for (double r : r_grid) require_radius(r);
  const DistanceSample sample = DistanceSample::draw(design, config);
  std::vector<CdfPoint> curve;
  curve.reserve(r_grid.size());
  for (double r : r_grid) {
    const double p = sample.ecdf(r);
    curve.push_back({r, normalized_radius(design.count(), design.dim(), r), p,
                     binomial_std_error(p, sample.samples())});
  }
  return curve;
}

void write_coverage_csv_header(std::ostream& out) {
  out << "d,delta,r,R,gamma,value,method,regime,stderr,samples,seed\n";
}

void write_coverage_csv_row(std::ostream& out, const CoverageResult& result) {
  out << result.d << ',' << (result.delta ? format_number(*result.delta) : std::string("na"))
      << ',' << format_number(result.r) << ',' << format_number(result.R) << ','
      << format_number(1.0 - result.value) << ',' << format_number(result.value) << ','
      << to_string(result.method) << ','
      << (result.regime ? to_string(*result.regime) : std::string_view("na")) << ','
      << format_number(result.std_error) << ',' << result.samples << ',' << result.seed << '\n';
}

void write_radius_csv_header(std::ostream& out) {
  out << "d,delta,gamma,r,R,thickness,solver_tol\n";
}

void write_radius_csv_row(std::ostream& out, const RadiusSolution& s) {
  out << s.d << ',' << (s.delta ? format_number(*s.delta) : std::string("na")) << ','
      << format_number(s.gamma) << ',' << format_number(s.r) << ',' << format_number(s.R) << ','
      << format_number(s.thickness) << ',' << format_number(s.solver_tol) << '\n';
}

}  // namespace cubecover
