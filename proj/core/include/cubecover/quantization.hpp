#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>

#include "cubecover/design.hpp"
#include "cubecover/monte_carlo.hpp"

namespace cubecover {

/// Mean squared quantization error of D_{n,delta}:
/// d (delta^2 - delta + 1/3) + 2 delta / (d + 1). Requires d >= 1, delta in [0, 1].
double theta_dn_delta(int d, double delta);

/// Normalized error 2^(-2/d) (delta^2 - delta + 1/3 + 2 delta / (d (d + 1))).
double qd_dn_delta(int d, double delta);

/// The delta minimizing qd_dn_delta: 1/2 - 1/(d (d + 1)).
double optimal_delta(int d);

/// qd_dn_delta at optimal_delta(d), in the simplified form
/// 2^(-2/d) [1/12 + (d^2 + d - 1) / ((d + 1)^2 d^2)].
double qd_optimal(int d);

/// n^(2/d) theta / (4 d).
double qd_normalize(int d, double n, double theta);

enum class EstimateMethod { ClosedForm, MonteCarlo };

std::string_view to_string(EstimateMethod method) noexcept;

struct QuantizationReport {
  double theta = 0.0;
  double qd = 0.0;
  EstimateMethod method = EstimateMethod::ClosedForm;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Closed-form report for D_{n,delta}.
QuantizationReport closed_form_quantization(int d, double delta);

/// Uniform Monte Carlo estimate of E min_i ||X - Z_i||^2 over [-1, 1]^d.
QuantizationReport mc_quantization(const Design& design, const McConfig& config);

/// `design,d,n,delta,method,theta,qd,stderr,samples,seed`
void write_quantization_csv_header(std::ostream& out);
void write_quantization_csv_row(std::ostream& out, const Design& design,
                                const QuantizationReport& report);

}  // namespace cubecover
