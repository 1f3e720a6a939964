#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli.hpp"

namespace cc = cubecover::cli;

int main(int argc, char** argv) {
  CLI::App app{"Quantization and weak-covering statistics of vertex designs in [-1,1]^d"};
  app.require_subcommand(1);

  cc::RunConfig config;
  std::vector<std::string> designs;
  std::string out_path, direction_path;
  double delta_start = 0.0, delta_stop = 0.0, delta_step = 0.0;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--d", config.d_list, "Dimensions")->delimiter(',');
    sub->add_option("--samples", config.samples, "Monte Carlo samples")->capture_default_str();
    sub->add_option("--seed", config.seed, "Monte Carlo seed")->capture_default_str();
    sub->add_option("--workers", config.workers, "Worker threads (0 = all cores)");
    sub->add_option("--design", designs,
                    "dn-delta[:delta], dn0, sobol[:n] or custom:<csv> (repeatable)")
        ->delimiter(',');
    sub->add_option("--direction-numbers", direction_path, "Sobol direction-number file");
    sub->add_option("--out", out_path, "Output path (default stdout)");
    sub->add_option("--gamma", config.gamma, "Uncovered volume fraction")->capture_default_str();
    sub->add_option("--r", config.r_list, "Radii")->delimiter(',');
    sub->add_option("--delta-start", delta_start, "Delta grid start");
    sub->add_option("--delta-stop", delta_stop, "Delta grid stop");
    sub->add_option("--delta-step", delta_step, "Delta grid step");
    sub->add_option("--grid-stop", config.grid_stop, "Largest normalized radius (cdf)")
        ->capture_default_str();
    sub->add_option("--grid-step", config.grid_step, "Normalized radius step (cdf)")
        ->capture_default_str();
  };

  const std::pair<const char*, const char*> commands[] = {
      {"quant-table", "Normalized quantization error Q_d per design"},
      {"cover-table", "Normalized radius R_{1-gamma} and full-cover radius per design"},
      {"curve", "Coverage of D_{n,delta}: approximation, Monte Carlo and bounds"},
      {"cdf", "Empirical CDF of the normalized nearest distance"},
      {"validate", "Run the invariant checks and report pass/fail"},
      {"eval", "Quantization error and coverage of the chosen designs"},
  };
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cc::kOk : cc::kUsage;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    config.command = *cc::parse_command(sub->get_name());
    for (const auto& text : designs) config.designs.push_back(cc::DesignSelector::parse(text));
    if (!out_path.empty()) config.output_path = out_path;
    if (!direction_path.empty()) config.direction_numbers = direction_path;
    if (sub->count("--delta-start") + sub->count("--delta-stop") + sub->count("--delta-step") > 0) {
      if (sub->count("--delta-start") == 0 || sub->count("--delta-stop") == 0 ||
          sub->count("--delta-step") == 0) {
        throw cc::UsageError("--delta-start, --delta-stop and --delta-step go together");
      }
      config.delta_grid = cc::DeltaGrid{delta_start, delta_stop, delta_step};
    }
  } catch (const cc::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cc::kUsage;
  }
  return cc::run(config, std::cout, std::cerr);
}
