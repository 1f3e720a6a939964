#include "cubecover/quantization.hpp"

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

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

}  // namespace

std::string_view to_string(EstimateMethod method) noexcept {
  return method == EstimateMethod::ClosedForm ? "closed-form" : "monte-carlo";
}

double theta_dn_delta(int d, double delta) {
  require_dim(d);
  require_delta(delta);
  const double dd = d;
  return dd * (delta * delta - delta + 1.0 / 3.0) + 2.0 * delta / (dd + 1.0);
}

double qd_dn_delta(int d, double delta) {
  require_dim(d);
  require_delta(delta);
  const double dd = d;
  return std::exp2(-2.0 / dd) *
         (delta * delta - delta + 1.0 / 3.0 + 2.0 * delta / (dd * (dd + 1.0)));
}

double optimal_delta(int d) {
  require_dim(d);
  const double dd = d;
  return 0.5 - 1.0 / (dd * (dd + 1.0));
}

double qd_optimal(int d) {
  require_dim(d);
  const double dd = d;
  return std::exp2(-2.0 / dd) *
         (1.0 / 12.0 + (dd * dd + dd - 1.0) / ((dd + 1.0) * (dd + 1.0) * dd * dd));
}

double qd_normalize(int d, double n, double theta) {
  require_dim(d);
  if (!(n > 0.0)) throw DomainError("point count must be positive");
  if (!(theta >= 0.0)) throw DomainError("theta must be nonnegative");
  // n^(2/d) through exp/log keeps 2^(d-1)-sized counts finite for large d.
  return std::exp(2.0 * std::log(n) / d) * theta / (4.0 * d);
}

QuantizationReport closed_form_quantization(int d, double delta) {
  QuantizationReport report;
  report.theta = theta_dn_delta(d, delta);
  report.qd = qd_dn_delta(d, delta);
  report.method = EstimateMethod::ClosedForm;
  return report;
}

QuantizationReport mc_quantization(const Design& design, const McConfig& config) {
  require_mc_samples(config);
  std::vector<double> sq(config.samples);
  const int d = design.dim();
  for_each_uniform_block(config, d, [&](std::uint64_t first, std::size_t count,
                                        std::span<const double> points) {
    for (std::size_t s = 0; s < count; ++s) {
      sq[first + s] = design.nearest_sq_distance(
          points.subspan(s * static_cast<std::size_t>(d), static_cast<std::size_t>(d)));
    }
  });
  const MeanEstimate estimate = mean_with_std_error(sq);
  QuantizationReport report;
  report.theta = estimate.mean;
  report.qd = qd_normalize(d, design.count(), estimate.mean);
  report.method = EstimateMethod::MonteCarlo;
  report.std_error = estimate.std_error;
  report.samples = config.samples;
  report.seed = config.seed;
  return report;
}

void write_quantization_csv_header(std::ostream& out) {
  out << "design,d,n,delta,method,theta,qd,stderr,samples,seed\n";
}

void write_quantization_csv_row(std::ostream& out, const Design& design,
                                const QuantizationReport& report) {
  out << to_string(design.kind()) << ',' << design.dim() << ',' << format_number(design.count())
      << ',' << (design.delta() ? format_number(*design.delta()) : std::string("na")) << ','
      << to_string(report.method) << ',' << format_number(report.theta) << ','
      << format_number(report.qd) << ',' << format_number(report.std_error) << ','
      << report.samples << ',' << report.seed << '\n';
}

}  // namespace cubecover
