#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "cubecover/coverage.hpp"
#include "cubecover/errors.hpp"
#include "cubecover/format.hpp"
#include "cubecover/monte_carlo.hpp"
#include "cubecover/quadrature.hpp"
#include "cubecover/quantization.hpp"

namespace cubecover::cli {
namespace {

constexpr int kTableDigits = 6;
constexpr int kRawDigits = 17;

std::string table_num(double v) { return format_number(v, kTableDigits); }
std::string raw_num(double v) { return format_number(v, kRawDigits); }

double parse_double(std::string_view text, std::string_view what) {
  const std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw UsageError(std::string(what) + " is not a number: '" + s + "'");
  }
  return v;
}

McConfig mc_config(const RunConfig& config) {
  return {config.samples, config.seed, config.workers};
}

DirectionTable direction_table(const RunConfig& config) {
  if (config.direction_numbers) return load_direction_numbers(*config.direction_numbers);
  return default_direction_table();
}

std::vector<DesignSelector> designs_or(const RunConfig& config,
                                       std::initializer_list<std::string_view> fallback) {
  if (!config.designs.empty()) return config.designs;
  std::vector<DesignSelector> out;
  for (auto text : fallback) out.push_back(DesignSelector::parse(text));
  return out;
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  if (name == "quant-table") return Command::QuantTable;
  if (name == "cover-table") return Command::CoverTable;
  if (name == "curve") return Command::Curve;
  if (name == "cdf") return Command::Cdf;
  if (name == "validate") return Command::Validate;
  if (name == "eval") return Command::Eval;
  return std::nullopt;
}

std::string_view to_string(Command command) noexcept {
  switch (command) {
    case Command::QuantTable: return "quant-table";
    case Command::CoverTable: return "cover-table";
    case Command::Curve: return "curve";
    case Command::Cdf: return "cdf";
    case Command::Validate: return "validate";
    case Command::Eval: return "eval";
  }
  return "unknown";
}

std::vector<double> DeltaGrid::values() const {
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    // Snap to 15 digits so 0.4 + 3 * 0.005 prints as 0.415.
    out.push_back(std::stod(format_number(start + static_cast<double>(k) * step, 15)));
  }
  return out;
}

DesignSelector DesignSelector::parse(std::string_view text) {
  DesignSelector s;
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view arg =
      colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  const bool has_arg = colon != std::string_view::npos;
  if (head == "dn-delta") {
    s.kind = DesignKind::DnDelta;
    if (has_arg) {
      s.delta = parse_double(arg, "design delta");
      if (!(*s.delta >= 0.0 && *s.delta <= 1.0)) {
        throw UsageError("design delta must lie in [0, 1]");
      }
    }
  } else if (head == "dn0") {
    if (has_arg) throw UsageError("dn0 takes no argument");
    s.kind = DesignKind::Dn0;
  } else if (head == "sobol") {
    s.kind = DesignKind::Sobol;
    if (has_arg) {
      const double n = parse_double(arg, "sobol point count");
      if (!(n >= 1.0) || n != std::floor(n) || n > 4294967295.0) {
        throw UsageError("sobol point count must be a positive integer");
      }
      s.sobol_points = static_cast<std::size_t>(n);
    }
  } else if (head == "custom") {
    if (!has_arg || arg.empty()) throw UsageError("custom design needs a CSV path: custom:<csv>");
    s.kind = DesignKind::Custom;
    s.csv = std::string(arg);
  } else {
    throw UsageError("unknown design '" + std::string(text) +
                     "' (expected dn-delta[:delta], dn0, sobol[:n] or custom:<csv>)");
  }
  return s;
}

std::string DesignSelector::label(int d) const {
  switch (kind) {
    case DesignKind::DnDelta: return "dn-delta:" + table_num(delta.value_or(optimal_delta(d)));
    case DesignKind::Dn0: return "dn0";
    case DesignKind::Sobol: return "sobol:" + std::to_string(sobol_points);
    case DesignKind::Custom: return "custom:" + csv.filename().string();
  }
  return "unknown";
}

Design make_design(const DesignSelector& selector, int d, const DirectionTable& table) {
  switch (selector.kind) {
    case DesignKind::DnDelta:
      return Design::implicit_dn_delta(d, selector.delta.value_or(optimal_delta(d)));
    case DesignKind::Dn0: return Design::implicit_dn0(d);
    case DesignKind::Sobol:
      if (d > table.max_dim()) {
        throw UsageError("no Sobol direction numbers for d = " + std::to_string(d));
      }
      return sobol_design(d, selector.sobol_points, table);
    case DesignKind::Custom: {
      std::ifstream in(selector.csv);
      if (!in) throw IoError("cannot open design CSV '" + selector.csv.string() + "'");
      Design design = read_design_csv(in);
      if (design.dim() != d) {
        throw UsageError("design CSV '" + selector.csv.string() + "' has dimension " +
                         std::to_string(design.dim()) + ", requested d = " + std::to_string(d));
      }
      return design;
    }
  }
  throw UsageError("unsupported design");
}

void check_config(const RunConfig& config) {
  if (config.command != Command::Validate && config.d_list.empty()) {
    throw UsageError("--d needs at least one dimension");
  }
  for (int d : config.d_list) {
    if (d < 1) throw UsageError("dimensions must be positive, got " + std::to_string(d));
  }
  if (config.samples < kMinMcSamples) {
    throw UsageError("--samples must be at least " + std::to_string(kMinMcSamples));
  }
  if (config.delta_grid) {
    const DeltaGrid& g = *config.delta_grid;
    if (!(g.step > 0.0)) throw UsageError("--delta-step must be positive");
    if (!(g.start <= g.stop)) throw UsageError("--delta-start must not exceed --delta-stop");
    if (!(g.start >= 0.0 && g.stop <= 1.0)) throw UsageError("delta grid must lie in [0, 1]");
  }
  if (config.command == Command::CoverTable && !(config.gamma > 0.0 && config.gamma < 1.0)) {
    throw UsageError("--gamma must lie in (0, 1)");
  }
  if (config.command == Command::Curve && config.r_list.empty()) {
    throw UsageError("curve needs at least one --r value");
  }
  for (double r : config.r_list) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw UsageError("radii must be nonnegative");
  }
  if (!(config.grid_step > 0.0) || !(config.grid_stop > 0.0)) {
    throw UsageError("--grid-step and --grid-stop must be positive");
  }
}

// ---------------------------------------------------------------------------

int cmd_quant_table(const RunConfig& config, std::ostream& out) {
  check_config(config);
  const auto designs = designs_or(config, {"dn-delta", "dn0", "sobol"});
  std::optional<DirectionTable> table;
  out << "d,design,qd,stderr,method\n";
  for (int d : config.d_list) {
    for (const auto& sel : designs) {
      QuantizationReport report;
      if (sel.kind == DesignKind::DnDelta) {
        report = sel.delta ? closed_form_quantization(d, *sel.delta)
                           : QuantizationReport{.qd = qd_optimal(d)};
        report.theta = theta_dn_delta(d, sel.delta.value_or(optimal_delta(d)));
      } else if (sel.kind == DesignKind::Dn0) {
        report = {.theta = d / 12.0, .qd = 1.0 / 12.0};
      } else {
        if (!table) table = direction_table(config);
        report = mc_quantization(make_design(sel, d, *table), mc_config(config));
      }
      out << d << ',' << sel.label(d) << ',' << table_num(report.qd) << ','
          << table_num(report.std_error) << ',' << to_string(report.method) << '\n';
    }
  }
  return kOk;
}

int cmd_cover_table(const RunConfig& config, std::ostream& out, std::ostream& log) {
  check_config(config);
  const auto designs = designs_or(config, {"dn-delta", "dn-delta:0.5", "dn0", "sobol"});
  const DeltaGrid grid = config.delta_grid.value_or(DeltaGrid{0.40, 0.60, 0.005});
  const McConfig mc = mc_config(config);
  std::optional<DirectionTable> table;

  const auto warn = [&](const RadiusSolution& s) {
    for (const auto& w : s.warnings) {
      log << "warning: d=" << s.d << " delta=" << table_num(s.delta.value_or(0.0)) << ": " << w
          << '\n';
    }
  };
  const auto row = [&](int d, std::string_view design, std::optional<double> delta,
                       const RadiusSolution& s, std::string_view method) {
    out << d << ',' << design << ',' << (delta ? table_num(*delta) : std::string("na")) << ','
        << table_num(s.gamma) << ',' << table_num(s.R) << ',' << table_num(s.r) << ','
        << table_num(s.thickness) << ',' << method << '\n';
  };

  out << "d,design,delta,gamma,R,r,thickness,method\n";
  for (int d : config.d_list) {
    std::vector<std::pair<std::string, double>> full_cover;
    for (const auto& sel : designs) {
      if (sel.kind == DesignKind::DnDelta && !sel.delta) {
        std::optional<RadiusSolution> best;
        for (double delta : grid.values()) {
          RadiusSolution s =
              radius_for_coverage(d, delta, config.gamma, RadiusMethod::Approximation);
          warn(s);
          if (!best || s.R < best->R) best = std::move(s);
        }
        row(d, "dn-delta-opt", best->delta, *best, "approx");
        full_cover.emplace_back("dn-delta-opt", *best->delta);
      } else if (sel.kind == DesignKind::DnDelta) {
        const RadiusSolution s =
            radius_for_coverage(d, *sel.delta, config.gamma, RadiusMethod::Approximation);
        warn(s);
        row(d, sel.label(d), sel.delta, s, "approx");
        full_cover.emplace_back(sel.label(d), *sel.delta);
      } else {
        if (!table && sel.kind == DesignKind::Sobol) table = direction_table(config);
        const Design design =
            make_design(sel, d, table ? *table : default_direction_table());
        row(d, sel.label(d), std::nullopt, radius_for_coverage(design, config.gamma, mc),
            "monte-carlo");
        if (sel.kind == DesignKind::Dn0) full_cover.emplace_back("dn0", -1.0);
      }
    }
    for (const auto& [label, delta] : full_cover) {
      if (delta < 0.0) {
        row(d, label, std::nullopt, full_cover_radius(DesignKind::Dn0, d), "full-cover");
      } else {
        row(d, label, delta, full_cover_radius(DesignKind::DnDelta, d, delta), "full-cover");
      }
    }
  }
  return kOk;
}

int cmd_curve(const RunConfig& config, std::ostream& out) {
  check_config(config);
  const DeltaGrid grid = config.delta_grid.value_or(DeltaGrid{0.0, 1.0, 0.05});
  const McConfig mc = mc_config(config);
  out << "d,delta,r,approx,mc,mc_stderr,lower,upper\n";
  for (int d : config.d_list) {
    for (double delta : grid.values()) {
      const DistanceSample sample = DistanceSample::draw(Design::implicit_dn_delta(d, delta), mc);
      for (double r : config.r_list) {
        const double approx = coverage_dn_delta(d, delta, r).value;
        const double p = sample.ecdf(r);
        const CoverageBounds bounds = coverage_bounds(d, delta, r);
        out << d << ',' << raw_num(delta) << ',' << raw_num(r) << ',' << raw_num(approx) << ','
            << raw_num(p) << ',' << raw_num(binomial_std_error(p, sample.samples())) << ','
            << raw_num(bounds.lower) << ',' << raw_num(bounds.upper) << '\n';
      }
    }
  }
  return kOk;
}

int cmd_cdf(const RunConfig& config, std::ostream& out) {
  check_config(config);
  const auto designs = designs_or(config, {"dn-delta", "dn0", "sobol"});
  const DirectionTable table = direction_table(config);
  const DeltaGrid r_axis{0.0, config.grid_stop, config.grid_step};
  const std::vector<double> grid = r_axis.values();
  out << "d,design,R,cdf,stderr\n";
  for (int d : config.d_list) {
    for (const auto& sel : designs) {
      const Design design = make_design(sel, d, table);
      // r = R 2 sqrt(d) / n^(1/d)
      const double scale =
          2.0 * std::sqrt(static_cast<double>(d)) / std::exp(std::log(design.count()) / d);
      std::vector<double> r_grid(grid.size());
      std::transform(grid.begin(), grid.end(), r_grid.begin(), [&](double R) { return R * scale; });
      const auto curve = distance_cdf_curve(design, r_grid, mc_config(config));
      for (std::size_t i = 0; i < curve.size(); ++i) {
        out << d << ',' << sel.label(d) << ',' << table_num(grid[i]) << ','
            << raw_num(curve[i].cdf) << ',' << raw_num(curve[i].std_error) << '\n';
      }
    }
  }
  return kOk;
}

// ---------------------------------------------------------------------------

namespace {

class Report {
 public:
  explicit Report(std::ostream& out) : out_(out) {}

  void check(bool ok, const std::string& name, const std::string& detail) {
    out_ << (ok ? "PASS " : "FAIL ") << name << "  " << detail << '\n';
    ok ? ++passed_ : ++failed_;
  }
  int failed() const { return failed_; }
  void summary() { out_ << "summary: " << passed_ << " passed, " << failed_ << " failed\n"; }

 private:
  std::ostream& out_;
  int passed_ = 0;
  int failed_ = 0;
};

std::string tag(int d, double delta) {
  return "d=" + std::to_string(d) + " delta=" + table_num(delta);
}

double grid_minimizer(int d) {
  double best_delta = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 10000; ++k) {
    const double delta = k * 1e-4;
    const double q = qd_dn_delta(d, delta);
    if (q < best) {
      best = q;
      best_delta = delta;
    }
  }
  return best_delta;
}

// Central moments of (u - z)^2 for u uniform on [-1, 1] by quadrature.
ApproxMoments quadrature_moments(double z) {
  const auto integral = [](auto f) {
    return integrate_adaptive(f, -1.0, 1.0, {.abs_tol = 1e-14}).value / 2.0;
  };
  const double mu = integral([&](double u) { return (u - z) * (u - z); });
  const double var = integral([&](double u) {
    const double c = (u - z) * (u - z) - mu;
    return c * c;
  });
  const double third = integral([&](double u) {
    const double c = (u - z) * (u - z) - mu;
    return c * c * c;
  });
  return {mu, var, third};
}

}  // namespace

int cmd_validate(const RunConfig& config, std::ostream& out) {
  check_config(config);
  std::vector<int> dims = config.d_list;
  if (dims.empty()) dims = {3, 4, 5, 6, 7, 8};
  McConfig mc = mc_config(config);
  Report report(out);
  int reseeds_left = 1;

  for (double z : {0.0, 0.25, 0.5, 1.0}) {
    const ApproxMoments closed = ball_cube_moments(1, z * z);
    const ApproxMoments numeric = quadrature_moments(z);
    const double err = std::max({std::abs(closed.mu - numeric.mu),
                                 std::abs(closed.sigma_sq - numeric.sigma_sq),
                                 std::abs(closed.mu3 - numeric.mu3)});
    report.check(err <= 1e-10, "moments z=" + table_num(z), "max_abs_err=" + table_num(err));
  }

  for (int d : dims) {
    const double delta_star = config.delta_star_override.value_or(optimal_delta(d));

    const double argmin = grid_minimizer(d);
    report.check(std::abs(argmin - delta_star) <= 1e-4, "optimal-delta d=" + std::to_string(d),
                 "delta*=" + table_num(delta_star) + " grid_argmin=" + table_num(argmin));

    const double qd = qd_dn_delta(d, delta_star);
    const double via_theta =
        qd_normalize(d, std::ldexp(1.0, d - 1), theta_dn_delta(d, delta_star));
    report.check(std::abs(qd - via_theta) <= 1e-14 * qd, "qd-normalize d=" + std::to_string(d),
                 "rel_diff=" + table_num(std::abs(qd - via_theta) / qd));

    for (double delta : {0.0, 0.3, 0.5, delta_star, 0.7, 1.0}) {
      const double exact = theta_dn_delta(d, delta);
      const Design design = Design::implicit_dn_delta(d, delta);
      QuantizationReport est = mc_quantization(design, mc);
      std::string note;
      if (std::abs(est.theta - exact) > 3.0 * est.std_error && reseeds_left > 0) {
        --reseeds_left;
        McConfig fresh = mc;
        fresh.seed = mc.seed ^ 0x9E3779B97F4A7C15ULL;
        est = mc_quantization(design, fresh);
        note = " (reseeded)";
      }
      const double z = std::abs(est.theta - exact) / est.std_error;
      report.check(z <= 3.0, "quantization-mc " + tag(d, delta),
                   "closed=" + table_num(exact) + " mc=" + table_num(est.theta) +
                       " z=" + table_num(z) + note);
    }

    // Cell volume of Z_1 and agreement with the nearest-vertex rule.
    const auto samples = mc.samples;
    const auto ud = static_cast<std::size_t>(d);
    const std::uint64_t blocks = (samples + kMcBlockSize - 1) / kMcBlockSize;
    std::vector<std::uint64_t> inside(blocks, 0), disagree(blocks, 0);
    const double deltas[] = {0.3, 0.5, 0.7};
    for_each_uniform_block(mc, d, [&](std::uint64_t first, std::size_t count,
                                      std::span<const double> pts) {
      const std::uint64_t b = first / kMcBlockSize;
      for (std::size_t s = 0; s < count; ++s) {
        const auto x = pts.subspan(s * ud, ud);
        const bool in = voronoi_membership(x, d).inside();
        inside[b] += in;
        for (double delta : deltas) {
          double to_z1 = 0.0;
          for (double v : x) to_z1 += (v - delta) * (v - delta);
          const double nearest = dn_delta_nearest_sq(x, delta);
          const bool z1_nearest = to_z1 <= nearest + 1e-12;
          const bool tie = std::abs(to_z1 - nearest) <= 1e-12;
          if (!tie && in != z1_nearest) ++disagree[b];
        }
      }
    });
    std::uint64_t in_total = 0, bad = 0;
    for (std::uint64_t b = 0; b < blocks; ++b) {
      in_total += inside[b];
      bad += disagree[b];
    }
    const double p = static_cast<double>(in_total) / static_cast<double>(samples);
    const double expected = std::ldexp(1.0, 1 - d);
    const double se = binomial_std_error(expected, samples);
    report.check(std::abs(p - expected) <= 4.0 * se, "voronoi-volume d=" + std::to_string(d),
                 "fraction=" + table_num(p) + " expected=" + table_num(expected) +
                     " z=" + table_num(std::abs(p - expected) / se));
    report.check(bad == 0, "voronoi-agreement d=" + std::to_string(d),
                 "mismatches=" + std::to_string(bad));

    double worst_drop = 0.0;
    double previous = 0.0;
    const double top = 2.0 * std::sqrt(static_cast<double>(d));
    for (int k = 0; k <= 100; ++k) {
      const double value = coverage_dn_delta(d, delta_star, top * k / 100.0).value;
      worst_drop = std::max(worst_drop, previous - value);
      previous = value;
    }
    report.check(worst_drop <= 1e-6, "coverage-monotone " + tag(d, delta_star),
                 "largest_drop=" + table_num(worst_drop));
  }
  report.summary();
  return report.failed() == 0 ? kOk : kValidationFailed;
}

int cmd_eval(const RunConfig& config, std::ostream& out) {
  check_config(config);
  const auto designs = designs_or(config, {"dn-delta"});
  std::optional<DirectionTable> table;
  const McConfig mc = mc_config(config);
  out << "d,design,quantity,r,value,stderr,method\n";
  for (int d : config.d_list) {
    for (const auto& sel : designs) {
      if (!table && sel.kind == DesignKind::Sobol) table = direction_table(config);
      const Design design = make_design(sel, d, table ? *table : default_direction_table());
      const std::string label = sel.label(d);
      const auto row = [&](std::string_view quantity, std::optional<double> r, double value,
                           double se, std::string_view method) {
        out << d << ',' << label << ',' << quantity << ','
            << (r ? table_num(*r) : std::string("na")) << ',' << table_num(value) << ','
            << table_num(se) << ',' << method << '\n';
      };

      if (design.kind() == DesignKind::DnDelta) {
        const QuantizationReport q = closed_form_quantization(d, *design.delta());
        row("theta", std::nullopt, q.theta, 0.0, "closed-form");
        row("qd", std::nullopt, q.qd, 0.0, "closed-form");
      } else if (design.kind() == DesignKind::Dn0) {
        row("theta", std::nullopt, d / 12.0, 0.0, "closed-form");
        row("qd", std::nullopt, 1.0 / 12.0, 0.0, "closed-form");
      }
      const DistanceSample sample = DistanceSample::draw(design, mc);
      row("theta", std::nullopt, sample.mean_sq(), sample.mean_sq_std_error(), "monte-carlo");
      row("qd", std::nullopt, qd_normalize(d, design.count(), sample.mean_sq()),
          qd_normalize(d, design.count(), sample.mean_sq_std_error()), "monte-carlo");
      for (double r : config.r_list) {
        if (design.kind() == DesignKind::DnDelta) {
          row("coverage", r, coverage_dn_delta(d, *design.delta(), r).value, 0.0, "approx");
        }
        const double p = sample.ecdf(r);
        row("coverage", r, p, binomial_std_error(p, sample.samples()), "monte-carlo");
      }
    }
  }
  return kOk;
}

// ---------------------------------------------------------------------------

int run(const RunConfig& config, std::ostream& out, std::ostream& log) {
  try {
    std::ofstream file;
    std::ostream* sink = &out;
    if (config.output_path) {
      file.open(*config.output_path);
      if (!file) throw IoError("cannot open output '" + config.output_path->string() + "'");
      sink = &file;
    }
    int code = kOk;
    switch (config.command) {
      case Command::QuantTable: code = cmd_quant_table(config, *sink); break;
      case Command::CoverTable: code = cmd_cover_table(config, *sink, log); break;
      case Command::Curve: code = cmd_curve(config, *sink); break;
      case Command::Cdf: code = cmd_cdf(config, *sink); break;
      case Command::Validate: code = cmd_validate(config, *sink); break;
      case Command::Eval: code = cmd_eval(config, *sink); break;
    }
    sink->flush();
    if (!*sink) throw IoError("failed writing output");
    return code;
  } catch (const UsageError& e) {
    log << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    log << "error: " << e.what() << '\n';
    return kIo;
  } catch (const ParseError& e) {
    log << "error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace cubecover::cli
