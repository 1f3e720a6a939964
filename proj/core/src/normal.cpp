#include "cubecover/normal.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "cubecover/format.hpp"

namespace cubecover {

double normal_pdf(double t) noexcept {
  return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double t) noexcept { return 0.5 * std::erfc(-t / std::numbers::sqrt2); }

std::string format_number(double value, int significant) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*g", significant, value);
  return buffer;
}

}  // namespace cubecover
