#include "cubecover/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "cubecover/errors.hpp"

namespace cubecover {
namespace {

std::mt19937_64 block_engine(std::uint64_t seed, std::uint64_t block) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
  return std::mt19937_64(seq);
}

// 53 random bits mapped onto [-1, 1).
inline double uniform_pm1(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-52 - 1.0;
}

}  // namespace

void require_mc_samples(const McConfig& config) {
  if (config.samples < kMinMcSamples) {
    throw DomainError("Monte Carlo estimators need at least " + std::to_string(kMinMcSamples) +
                      " samples, got " + std::to_string(config.samples));
  }
}

void for_each_uniform_block(const McConfig& config, int dim, const UniformBlockFn& body) {
  if (dim < 1) throw DomainError("dimension must be positive");
  const std::uint64_t blocks = (config.samples + kMcBlockSize - 1) / kMcBlockSize;
  unsigned workers = config.workers == 0 ? std::thread::hardware_concurrency() : config.workers;
  workers = static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, std::max<std::uint64_t>(blocks, 1)));

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    std::vector<double> points;
    try {
      for (std::uint64_t block = next++; block < blocks; block = next++) {
        const std::uint64_t first = block * kMcBlockSize;
        const auto count =
            static_cast<std::size_t>(std::min(kMcBlockSize, config.samples - first));
        points.resize(count * static_cast<std::size_t>(dim));
        auto engine = block_engine(config.seed, block);
        for (double& v : points) v = uniform_pm1(engine);
        body(first, count, points);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = blocks;
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

MeanEstimate mean_with_std_error(std::span<const double> values) {
  MeanEstimate estimate;
  const auto n = values.size();
  if (n == 0) return estimate;
  double sum = 0.0;
  for (double v : values) sum += v;
  estimate.mean = sum / static_cast<double>(n);
  if (n < 2) return estimate;
  double ss = 0.0;
  for (double v : values) ss += (v - estimate.mean) * (v - estimate.mean);
  const double variance = ss / static_cast<double>(n - 1);
  estimate.std_error = std::sqrt(variance / static_cast<double>(n));
  return estimate;
}

double binomial_std_error(double p, std::uint64_t n) noexcept {
  if (n == 0) return 0.0;
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

}  // namespace cubecover
