#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

namespace cubecover {

/// Parameters shared by every Monte Carlo estimator.
///
/// Samples are generated in fixed-size blocks; block `b` draws from its own
/// engine seeded by (seed, b). Results are therefore bit-identical for any
/// number of workers.
struct McConfig {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 20240101;
  unsigned workers = 0;  ///< 0 = std::thread::hardware_concurrency()
};

inline constexpr std::uint64_t kMinMcSamples = 1000;
inline constexpr std::uint64_t kMcBlockSize = 8192;

/// Throws DomainError when fewer than kMinMcSamples samples are requested.
void require_mc_samples(const McConfig& config);

/// Body invoked once per block: `first` is the global index of the block's
/// first sample, `points` holds `count * dim` coordinates, row-major, uniform
/// on [-1, 1]. Blocks may run concurrently and in any order.
using UniformBlockFn =
    std::function<void(std::uint64_t first, std::size_t count, std::span<const double> points)>;

void for_each_uniform_block(const McConfig& config, int dim, const UniformBlockFn& body);

/// Sample mean and its standard error (sample standard deviation / sqrt(n)).
struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

MeanEstimate mean_with_std_error(std::span<const double> values);

/// Binomial standard error sqrt(p (1 - p) / n).
double binomial_std_error(double p, std::uint64_t n) noexcept;

}  // namespace cubecover
