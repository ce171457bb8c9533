#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"
#include "thermoporo/analysis.hpp"

namespace thermoporo::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitNumericalFailure = 2;

/// One row per (algorithm, refinement level): 5-digit scientific errors,
/// 2-decimal rates (empty on the first row) and full-precision errors.
std::string convergence_csv(const std::vector<ConvergenceTable>& tables);

/// One row per algorithm: mesh, time step, errors and the median wall time.
std::string bench_csv(const std::vector<TimingReport>& reports, int divisions, double dt);

struct FieldRange {
  std::string field;
  double min = 0.0;
  double max = 0.0;
  Point2 argmin;
  Point2 argmax;
};

struct RunSummary {
  std::string scenario;
  Algorithm algorithm = Algorithm::Coupled;
  int divisions = 0;
  double dt = 0.0;
  double tau = 0.0;
  int steps = 0;
  Index dofs_u = 0;
  Index dofs_xi = 0;
  Index dofs_p = 0;
  Index dofs_T = 0;
  PhaseTimings timings;
  int first_level_iterations = 0;
  std::vector<FieldRange> ranges;  ///< u_x, u_y, |u|, xi, p, T over the dof nodes
  std::optional<ErrorReport> errors;
  std::vector<std::filesystem::path> files;
  std::vector<std::string> warnings;
};

/// Runs one scenario to tau and writes the VTK snapshots, summary.txt and
/// (optionally) coefficients.csv into `directory`.
RunSummary run_scenario(const RunConfig& config, const std::filesystem::path& directory);
std::string summary_text(const RunSummary& summary);

/// Subcommands. `out` receives the primary output when config.out is empty,
/// `log` receives warnings and progress. Exceptions propagate; the caller
/// maps them to exit codes.
int cmd_convergence(const RunConfig& config, std::ostream& out, std::ostream& log);
int cmd_bench(const RunConfig& config, std::ostream& out, std::ostream& log);
int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& log);
int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& log);

/// Validates the config for `command` and dispatches; InvalidInput maps to
/// exit code 1, NumericalFailure to 2.
int dispatch(const std::string& command, const RunConfig& config, std::ostream& out,
             std::ostream& log);

}  // namespace thermoporo::cli
