#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "epds/config.hpp"
#include "epds/report.hpp"

namespace epds {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitConfigError = 2,
  kExitNumericalAbort = 3,
};

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

/// Level from EPDS_LOG (error, warn, info, debug); warn when unset.
LogLevel log_level_from_env();

struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

/// Analytic suite on a config: gain condition, equilibrium residual,
/// port-Hamiltonian residual and skew symmetry at random states, and the
/// two-path Lyapunov rate identity. Random states come from config seed.
std::vector<CheckResult> run_verify(const RunConfig& config, int random_states = 100);

struct SimulationResult {
  Trajectory trajectory;
  RunSummary summary;
};

SimulationResult run_simulation(const RunConfig& config, ControllerKind kind);

/// Writes trajectory.csv, metrics.csv and summary.json into dir.
void write_run_outputs(const std::string& dir, const RunConfig& config, const SimulationResult& result);

struct CompareResult {
  std::vector<SimulationResult> runs;  // c1, c2, c3
  bool voltage_ordering = false;       // c1 < c3 < c2
  double sharing_ratio = 0.0;          // c1 / c3 of resolved steady-state errors
  double raw_sharing_ratio = 0.0;      // c1 / c3 without the resolution floor
  bool sharing_comparable = false;     // ratio in [0.2, 5], both below c2
};

/// Sharing resolution as a fraction of the mean weighted current: a
/// steady-state sharing error below it counts as exact sharing when two
/// controllers are compared.
inline constexpr double kSharingResolution = 0.01;

/// Mean over segments of max(steady sharing error, resolution).
double resolved_sharing_error(const RunSummary& s);

/// Runs the three controllers concurrently on the same scenario.
CompareResult run_compare(const RunConfig& config);

int cmd_simulate(const std::string& config_path, std::optional<ControllerKind> kind,
                 std::optional<std::string> out_dir, std::ostream& out, std::ostream& err);
int cmd_verify(const std::string& config_path, std::ostream& out, std::ostream& err);
int cmd_compare(const std::string& config_path, std::optional<std::string> out_dir,
                std::ostream& out, std::ostream& err);

}  // namespace epds
