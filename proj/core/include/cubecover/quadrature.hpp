#pragma once

#include <functional>

namespace cubecover {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
  bool converged = false;
};

struct QuadratureOptions {
  double abs_tol = 1e-8;
  int max_subintervals = 4000;
};

/// Globally adaptive Gauss-Kronrod (7/15) integration of `f` over [a, b].
///
/// The subinterval with the largest error estimate is bisected until the summed
/// estimate falls below `abs_tol` or the subinterval budget is exhausted, in
/// which case `converged` is false and the best value is still returned.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a,
                                    double b, const QuadratureOptions& options = {});

}  // namespace cubecover
