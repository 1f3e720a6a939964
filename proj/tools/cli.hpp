#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cubecover/design.hpp"
#include "cubecover/sobol.hpp"

namespace cubecover::cli {

enum class Command { QuantTable, CoverTable, Curve, Cdf, Validate, Eval };

std::optional<Command> parse_command(std::string_view name);
std::string_view to_string(Command command) noexcept;

enum ExitCode : int { kOk = 0, kUsage = 1, kValidationFailed = 2, kIo = 3 };

/// Thrown for malformed or inconsistent arguments (exit code 1).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DeltaGrid {
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;

  /// start, start + step, ... up to stop (inclusive within rounding).
  std::vector<double> values() const;
};

/// Parsed `--design` value: `dn-delta[:delta]`, `dn0`, `sobol[:n]`, `custom:<csv>`.
struct DesignSelector {
  DesignKind kind = DesignKind::DnDelta;
  std::optional<double> delta;  ///< dn-delta only; absent means the optimal delta
  std::size_t sobol_points = 1024;
  std::filesystem::path csv;

  static DesignSelector parse(std::string_view text);
  /// Short label used in CSV output, e.g. `dn-delta:0.490909` or `sobol:1024`.
  std::string label(int d) const;
};

struct RunConfig {
  Command command = Command::Eval;
  std::vector<int> d_list;
  double gamma = 0.01;
  std::vector<double> r_list;
  std::optional<DeltaGrid> delta_grid;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 20240101;
  std::optional<std::filesystem::path> output_path;
  std::vector<DesignSelector> designs;
  std::optional<std::filesystem::path> direction_numbers;
  unsigned workers = 0;
  /// Shared normalized-radius grid of the cdf command: 0, step, ..., stop.
  double grid_stop = 1.0;
  double grid_step = 0.005;
  /// Replaces the optimal delta inside `validate`; used as a negative control.
  std::optional<double> delta_star_override;
};

/// Validates the configuration for its command. Throws UsageError.
void check_config(const RunConfig& config);

/// Vertex designs are returned implicitly; sobol and custom are materialized.
Design make_design(const DesignSelector& selector, int d, const DirectionTable& table);

/// Each command writes its CSV (or report) to `out` and returns an exit code.
int cmd_quant_table(const RunConfig& config, std::ostream& out);
int cmd_cover_table(const RunConfig& config, std::ostream& out, std::ostream& log);
int cmd_curve(const RunConfig& config, std::ostream& out);
int cmd_cdf(const RunConfig& config, std::ostream& out);
int cmd_validate(const RunConfig& config, std::ostream& out);
int cmd_eval(const RunConfig& config, std::ostream& out);

/// Dispatches on config.command, writing to the output path or `out`. Maps
/// exceptions to exit codes and reports them on `log`.
int run(const RunConfig& config, std::ostream& out, std::ostream& log);

}  // namespace cubecover::cli
