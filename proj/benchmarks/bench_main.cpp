#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "cubecover/coverage.hpp"
#include "cubecover/design.hpp"
#include "cubecover/quantization.hpp"
#include "cubecover/sobol.hpp"

using namespace cubecover;

namespace {

std::vector<double> uniform_points(int d, std::size_t count) {
  std::mt19937_64 engine(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(static_cast<std::size_t>(d) * count);
  for (double& v : x) v = u(engine);
  return x;
}

void BM_NearestDnDelta(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto x = uniform_points(d, 4096);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dn_delta_nearest_sq(std::span(x).subspan(i * d, d), 0.49));
    i = (i + 1) % 4096;
  }
}
BENCHMARK(BM_NearestDnDelta)->Arg(5)->Arg(20)->Arg(100);

void BM_NearestLinearScan(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Design design = sobol_design(d, 1024, default_direction_table());
  const auto x = uniform_points(d, 4096);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(linear_scan_sq_distance(std::span(x).subspan(i * d, d), design));
    i = (i + 1) % 4096;
  }
}
BENCHMARK(BM_NearestLinearScan)->Arg(5)->Arg(20);

void BM_Edgeworth(benchmark::State& state) {
  double r = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(approx_ball_cube_fraction(10, 2.5, r));
    r = r < 4.0 ? r + 1e-3 : 1.0;
  }
}
BENCHMARK(BM_Edgeworth);

void BM_CoverageDnDelta(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const double r = 0.35 * std::sqrt(static_cast<double>(d)) + 0.3;
  for (auto _ : state) benchmark::DoNotOptimize(coverage_dn_delta(d, 0.5, r));
}
BENCHMARK(BM_CoverageDnDelta)->Arg(5)->Arg(20)->Arg(200);

void BM_RadiusForCoverage(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(radius_for_coverage(d, 0.5, 0.01, RadiusMethod::Approximation));
  }
}
BENCHMARK(BM_RadiusForCoverage)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_SobolPoints(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sobol_points(d, 1024, default_direction_table()));
  state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_SobolPoints)->Arg(10)->Arg(100);

void BM_McQuantization(benchmark::State& state) {
  const Design design = Design::implicit_dn_delta(10, optimal_delta(10));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mc_quantization(design, {.samples = 100'000, .workers = 1}));
  }
  state.SetItemsProcessed(state.iterations() * 100'000);
}
BENCHMARK(BM_McQuantization)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
