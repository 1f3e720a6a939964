#pragma once

namespace cubecover {

/// Standard normal density.
double normal_pdf(double t) noexcept;

/// Standard normal distribution function, evaluated through erfc so that the
/// lower tail keeps full relative precision.
double normal_cdf(double t) noexcept;

}  // namespace cubecover
