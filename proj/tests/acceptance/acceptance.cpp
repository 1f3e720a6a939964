// Acceptance runner: one PASS/FAIL line per criterion on stdout, diagnostics
// indented above it. Exit status is nonzero when the selected criterion fails.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli.hpp"
#include "cubecover/coverage.hpp"
#include "cubecover/design.hpp"
#include "cubecover/format.hpp"
#include "cubecover/monte_carlo.hpp"
#include "cubecover/quadrature.hpp"
#include "cubecover/quantization.hpp"
#include "cubecover/sobol.hpp"

using namespace cubecover;

namespace {

constexpr std::uint64_t kSeed = 20240101;

struct Verdict {
  bool pass = true;
  std::string summary;
};

void note(const std::string& line) { std::printf("  %s\n", line.c_str()); }

std::string num(double v, int digits = 6) { return format_number(v, digits); }

double round4(double v) { return std::round(v * 1e4) / 1e4; }

// --- 1 ---------------------------------------------------------------------
Verdict criterion1() {
  const std::map<int, double> table{{5, 0.0876}, {7, 0.0827}, {10, 0.0804}, {15, 0.0798}, {20, 0.0800}};
  Verdict v;
  for (const auto& [d, expected] : table) {
    const double qd = qd_optimal(d);
    const bool ok = round4(qd) == expected;
    note("d=" + std::to_string(d) + " Q_d(opt)=" + num(qd) + " expected " + num(expected, 4) +
         (ok ? "" : "  <-- mismatch"));
    v.pass &= ok;
  }
  // D_n^(0): theta = d/12 against n = 2^d points.
  for (int d = 1; d <= 30; ++d) {
    const double qd = qd_normalize(d, std::ldexp(1.0, d), d / 12.0);
    if (std::abs(qd - 1.0 / 12.0) > 1e-15) {
      note("d=" + std::to_string(d) + " Q_d(D0)=" + num(qd, 17));
      v.pass = false;
    }
  }
  v.summary = "Q_d(D_{n,delta*}) table to 4 decimals; Q_d(D0) = 1/12";
  return v;
}

// --- 2 ---------------------------------------------------------------------
Verdict criterion2() {
  const std::map<int, double> table{{5, 0.7019}, {7, 0.6629}, {10, 0.6259}, {15, 0.5912}, {20, 0.5714}};
  Verdict v;
  for (const auto& [d, expected] : table) {
    const double r0 = full_cover_radius(DesignKind::Dn0, d).R;
    const double rh = full_cover_radius(DesignKind::DnDelta, d, 0.5).R;
    const bool ok = round4(r0) == 0.5 && round4(rh) == expected;
    note("d=" + std::to_string(d) + " R_1(D0)=" + num(r0) + " R_1(D_1/2)=" + num(rh) +
         " expected " + num(expected, 4) + (ok ? "" : "  <-- mismatch"));
    v.pass &= ok;
  }
  v.summary = "R_1 for D0 and D_{n,1/2} to 4 decimals";
  return v;
}

// --- 3 ---------------------------------------------------------------------
Verdict criterion3() {
  const std::map<int, double> table{{5, 0.4765}, {7, 0.4039}, {10, 0.3649}, {15, 0.3484}, {20, 0.3417}};
  Verdict v;
  for (const auto& [d, expected] : table) {
    const RadiusSolution s = radius_for_coverage(d, 0.5, 0.01, RadiusMethod::Approximation);
    const bool ok = std::abs(s.R - expected) <= 0.005;
    note("d=" + std::to_string(d) + " R_0.99=" + num(s.R) + " expected " + num(expected, 4) +
         (ok ? "" : "  <-- off by more than 0.005"));
    v.pass &= ok;
  }
  v.summary = "R_0.99(D_{n,1/2}) within 0.005";
  return v;
}

// --- 4 ---------------------------------------------------------------------
Verdict criterion4() {
  Verdict v;
  int reseeds = 0;
  int failures = 0;
  for (int d = 2; d <= 8; ++d) {
    for (double delta : {0.0, 0.3, 0.5, optimal_delta(d), 0.7, 1.0}) {
      const double exact = theta_dn_delta(d, delta);
      const Design design = Design::implicit_dn_delta(d, delta);
      QuantizationReport mc = mc_quantization(design, {.samples = 1'000'000, .seed = kSeed});
      bool ok = std::abs(mc.theta - exact) <= 3.0 * mc.std_error;
      if (!ok && reseeds == 0) {
        ++reseeds;
        note("reseed at d=" + std::to_string(d) + " delta=" + num(delta) + " z=" +
             num((mc.theta - exact) / mc.std_error, 3));
        mc = mc_quantization(design, {.samples = 1'000'000, .seed = kSeed ^ 0x9E3779B97F4A7C15ULL});
        ok = std::abs(mc.theta - exact) <= 3.0 * mc.std_error;
      }
      if (!ok) {
        ++failures;
        note("d=" + std::to_string(d) + " delta=" + num(delta) + " theta=" + num(exact) +
             " mc=" + num(mc.theta) + " z=" + num((mc.theta - exact) / mc.std_error, 3));
      }
    }
  }
  note("reseeds used: " + std::to_string(reseeds) + ", outside 3 sigma: " + std::to_string(failures));
  v.pass = failures == 0;
  v.summary = "closed-form theta vs MC(1e6) within 3 sigma, d=2..8";
  return v;
}

// --- 5, 6 ------------------------------------------------------------------
struct RRange {
  int d;
  std::vector<double> r;
};

std::vector<double> linspace(double a, double b, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(a + (b - a) * i / (count - 1));
  return out;
}

// Reference r-ranges. d = 3 has no range of its own: it reuses the normalized
// window of the d = 5 range, R = n^(1/d) r / (2 sqrt d), mapped back to r.
std::vector<RRange> accuracy_grid() {
  const auto R_of = [](int d, double r) { return normalized_radius(std::ldexp(1.0, d - 1), d, r); };
  const auto r_of = [](int d, double R) {
    return R * 2.0 * std::sqrt(static_cast<double>(d)) / std::pow(std::ldexp(1.0, d - 1), 1.0 / d);
  };
  std::vector<double> r3;
  for (double R : linspace(R_of(5, 0.7), R_of(5, 1.1), 5)) r3.push_back(r_of(3, R));
  return {{3, r3},
          {5, linspace(0.7, 1.1, 5)},
          {10, linspace(0.95, 1.15, 5)},
          {15, linspace(1.15, 1.35, 5)},
          {50, linspace(2.05, 2.35, 5)}};
}

std::vector<double> delta_grid() {
  std::vector<double> out;
  for (int k = 0; k <= 20; ++k) out.push_back(0.05 * k);
  return out;
}

Verdict criterion5() {
  Verdict v;
  for (const RRange& range : accuracy_grid()) {
    int bad = 0;
    double worst = 0.0;
    std::string worst_at;
    for (double delta : delta_grid()) {
      const DistanceSample sample = DistanceSample::draw(
          Design::implicit_dn_delta(range.d, delta), {.samples = 1'000'000, .seed = kSeed});
      for (double r : range.r) {
        const double p = sample.ecdf(r);
        const double se = binomial_std_error(p, sample.samples());
        const double approx = coverage_dn_delta(range.d, delta, r).value;
        const double err = std::abs(approx - p);
        if (err > std::max(3.0 * se, 0.01)) ++bad;
        if (err > worst) {
          worst = err;
          worst_at = "delta=" + num(delta, 3) + " r=" + num(r, 5) + " approx=" + num(approx) +
                     " mc=" + num(p);
        }
      }
    }
    note("d=" + std::to_string(range.d) + " violations=" + std::to_string(bad) + " worst |err|=" +
         num(worst, 4) + " at " + worst_at);
    v.pass &= bad == 0;
  }
  v.summary = "|approx - MC(1e6)| <= max(3 se, 0.01) on the reference r grids";
  return v;
}

Verdict criterion6() {
  Verdict v;
  for (const RRange& range : accuracy_grid()) {
    int bad = 0;
    double worst = 0.0;
    std::string worst_at;
    for (double delta : delta_grid()) {
      for (double r : range.r) {
        const double c = coverage_dn_delta(range.d, delta, r).value;
        const CoverageBounds b = coverage_bounds(range.d, delta, r);
        const double excess = std::max(b.lower - c, c - b.upper - 1e-6);
        if (excess > 0.0) {
          ++bad;
          if (excess > worst) {
            worst = excess;
            worst_at = "delta=" + num(delta, 3) + " r=" + num(r, 5) + " lower=" + num(b.lower) +
                       " approx=" + num(c) + " upper=" + num(b.upper);
          }
        }
      }
    }
    note("d=" + std::to_string(range.d) + " violations=" + std::to_string(bad) +
         (bad ? " worst excess=" + num(worst, 3) + " at " + worst_at : ""));
    v.pass &= bad == 0;
  }
  v.summary = "lower <= approx <= upper + 1e-6 on the criterion 5 grid";
  return v;
}

// --- 7 ---------------------------------------------------------------------
Verdict criterion7() {
  Verdict v;
  const double limit = 1.0 / std::sqrt(3.0);
  for (double gamma : {0.5, 0.1, 0.001}) {
    std::string row = "gamma=" + num(gamma) + " ratios:";
    double previous = INFINITY;
    bool decreasing = true;
    for (int d : {5, 10, 20, 50}) {
      const double ratio = radius_for_coverage(d, 0.5, gamma, RadiusMethod::Approximation).R /
                           full_cover_radius(DesignKind::DnDelta, d, 0.5).R;
      row += " d" + std::to_string(d) + "=" + num(ratio, 5);
      decreasing &= ratio < previous;
      previous = ratio;
    }
    const double at200 = radius_for_coverage(200, 0.5, gamma, RadiusMethod::Approximation).R /
                         full_cover_radius(DesignKind::DnDelta, 200, 0.5).R;
    const bool near = std::abs(at200 - limit) <= 0.05;
    row += " d200=" + num(at200, 5) + (decreasing ? "" : "  <-- not decreasing") +
           (near ? "" : "  <-- d=200 off 1/sqrt3");
    note(row);
    v.pass &= decreasing && near;
  }
  v.summary = "R_{1-gamma}/R_1 decreasing over d=5,10,20,50 and within 0.05 of 1/sqrt(3) at d=200";
  return v;
}

// --- 8 ---------------------------------------------------------------------
Verdict criterion8() {
  Verdict v;
  for (int d = 3; d <= 10; ++d) {
    const McConfig mc{.samples = 1'000'000, .seed = kSeed + static_cast<std::uint64_t>(d)};
    std::vector<std::uint64_t> hits((mc.samples + kMcBlockSize - 1) / kMcBlockSize, 0);
    for_each_uniform_block(mc, d, [&](std::uint64_t first, std::size_t count,
                                      std::span<const double> pts) {
      std::uint64_t inside = 0;
      for (std::size_t s = 0; s < count; ++s) {
        inside += voronoi_membership(pts.subspan(s * d, d), d).inside();
      }
      hits[first / kMcBlockSize] = inside;
    });
    std::uint64_t total = 0;
    for (auto h : hits) total += h;
    const double p = static_cast<double>(total) / mc.samples;
    const double expected = std::ldexp(1.0, 1 - d);
    const double se = std::sqrt(expected * (1.0 - expected) / mc.samples);
    const bool ok = std::abs(p - expected) <= 4.0 * se;
    note("d=" + std::to_string(d) + " fraction=" + num(p) + " expected=" + num(expected) +
         " z=" + num((p - expected) / se, 3));
    v.pass &= ok;
  }
  v.summary = "Voronoi cell of Z_1 occupies 2^(1-d) of the cube within 4 sigma";
  return v;
}

// --- 9 ---------------------------------------------------------------------
Verdict criterion9() {
  Verdict v;
  for (double z : {0.0, 0.25, 0.5, 1.0}) {
    const auto mean = [](auto f) {
      return integrate_adaptive(f, -1.0, 1.0, {.abs_tol = 1e-14}).value / 2.0;
    };
    const double mu = mean([&](double u) { return (u - z) * (u - z); });
    const double var = mean([&](double u) { return std::pow((u - z) * (u - z) - mu, 2); });
    const double mu3 = mean([&](double u) { return std::pow((u - z) * (u - z) - mu, 3); });
    const ApproxMoments m = ball_cube_moments(1, z * z);
    const double err = std::max({std::abs(m.mu - mu), std::abs(m.sigma_sq - var), std::abs(m.mu3 - mu3)});
    note("z=" + num(z) + " max |closed - quadrature| = " + num(err, 3));
    v.pass &= err <= 1e-10;
  }
  v.summary = "one-coordinate moments match quadrature to 1e-10";
  return v;
}

// --- 10 --------------------------------------------------------------------
bool dominates(const Design& upper, const Design& lower, const std::string& label) {
  const int d = upper.dim();
  std::vector<double> R;
  for (int k = 0; k <= 200; ++k) R.push_back(0.005 * k);
  const auto r_grid = [&](const Design& design) {
    std::vector<double> r;
    for (double v : R) {
      r.push_back(v * 2.0 * std::sqrt(static_cast<double>(d)) / std::pow(design.count(), 1.0 / d));
    }
    return r;
  };
  const auto a = distance_cdf_curve(upper, r_grid(upper), {.samples = 1'000'000, .seed = kSeed});
  const auto b = distance_cdf_curve(lower, r_grid(lower), {.samples = 1'000'000, .seed = kSeed + 1});
  std::vector<double> violated;
  double worst = 0.0;
  for (std::size_t i = 0; i < R.size(); ++i) {
    const double slack = 3.0 * std::hypot(a[i].std_error, b[i].std_error);
    if (a[i].cdf + slack < b[i].cdf) {
      violated.push_back(R[i]);
      worst = std::max(worst, b[i].cdf - a[i].cdf);
    }
  }
  std::string line = label + ": " + std::to_string(violated.size()) + " grid points violated";
  if (!violated.empty()) {
    line += " (R in [" + num(violated.front(), 3) + ", " + num(violated.back(), 3) +
            "], largest gap " + num(worst, 3) + ")";
  }
  note(line);
  return violated.empty();
}

Verdict criterion10() {
  Verdict v;
  const DirectionTable& table = default_direction_table();
  v.pass &= dominates(Design::implicit_dn_delta(10, optimal_delta(10)), Design::implicit_dn0(10),
                      "d=10 D_{n,delta*} over D0");
  v.pass &= dominates(Design::implicit_dn0(5), sobol_design(5, 1024, table), "d=5 D0 over S_1024");

  const std::map<int, std::pair<double, double>> sobol_rows{
      {5, {0.0988, 0.4714}}, {7, {0.1003, 0.4528}}, {10, {0.1022, 0.4256}},
      {15, {0.1060, 0.4074}}, {20, {0.1086, 0.3967}}};
  for (const auto& [d, expected] : sobol_rows) {
    const Design design = sobol_design(d, 1024, table);
    const McConfig mc{.samples = 200'000, .seed = kSeed};
    const double qd = mc_quantization(design, mc).qd;
    const double R = radius_for_coverage(design, 0.01, mc).R;
    const bool ok = std::abs(qd - expected.first) <= 0.01 && std::abs(R - expected.second) <= 0.01;
    note("d=" + std::to_string(d) + " S_1024 Q_d=" + num(qd, 4) + " (" + num(expected.first, 4) +
         ") R_0.99=" + num(R, 4) + " (" + num(expected.second, 4) + ")" +
         (ok ? "" : "  <-- outside 0.01"));
    v.pass &= ok;
  }
  v.summary = "CDF dominance (d=10, d=5) with 3 sigma slack; Sobol rows within 0.01";
  return v;
}

// --- 11 --------------------------------------------------------------------
Verdict criterion11() {
  using cli::Command;
  Verdict v;
  const auto output = [](cli::RunConfig config, unsigned workers) {
    config.workers = workers;
    std::ostringstream out, log;
    const int code = cli::run(config, out, log);
    return std::to_string(code) + "\n" + out.str();
  };
  std::vector<std::pair<std::string, cli::RunConfig>> runs;
  const auto base = [](Command command) {
    cli::RunConfig c;
    c.command = command;
    c.samples = 100'000;
    c.seed = 77;
    return c;
  };
  {
    cli::RunConfig c = base(Command::QuantTable);
    c.d_list = {4, 9};
    runs.emplace_back("quant-table", c);
  }
  {
    cli::RunConfig c = base(Command::CoverTable);
    c.d_list = {5};
    runs.emplace_back("cover-table", c);
  }
  {
    cli::RunConfig c = base(Command::Curve);
    c.d_list = {6};
    c.r_list = {0.8, 1.2};
    c.delta_grid = cli::DeltaGrid{0.0, 1.0, 0.25};
    runs.emplace_back("curve", c);
  }
  {
    cli::RunConfig c = base(Command::Cdf);
    c.d_list = {5};
    c.designs = {cli::DesignSelector::parse("dn0"), cli::DesignSelector::parse("sobol:512")};
    runs.emplace_back("cdf", c);
  }
  {
    cli::RunConfig c = base(Command::Eval);
    c.d_list = {7};
    c.r_list = {1.0};
    runs.emplace_back("eval", c);
  }
  {
    cli::RunConfig c = base(Command::Validate);
    c.d_list = {3, 4};
    runs.emplace_back("validate", c);
  }
  for (const auto& [name, config] : runs) {
    const std::string one = output(config, 1);
    bool same = true;
    for (unsigned w : {2u, 4u, 7u}) same &= output(config, w) == one;
    note(name + ": " + std::to_string(one.size()) + " bytes, " +
         (same ? "identical across workers 1/2/4/7" : "DIFFERS across worker counts"));
    v.pass &= same;
  }
  v.summary = "MC commands byte-identical across worker counts";
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cubecover acceptance checks"};
  std::vector<int> selected;
  app.add_option("--criterion", selected, "criterion number(s) 1-11; default all")
      ->delimiter(',')
      ->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Verdict()>> criteria{
      criterion1, criterion2, criterion3, criterion4, criterion5, criterion6,
      criterion7, criterion8, criterion9, criterion10, criterion11};
  if (selected.empty()) {
    for (int i = 1; i <= 11; ++i) selected.push_back(i);
  }
  bool all = true;
  for (int id : selected) {
    const Verdict v = criteria[id - 1]();
    std::printf("%s criterion %d: %s\n", v.pass ? "PASS" : "FAIL", id, v.summary.c_str());
    std::fflush(stdout);
    all &= v.pass;
  }
  return all ? 0 : 1;
}
