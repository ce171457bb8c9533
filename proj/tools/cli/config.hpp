#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "thermoporo/analysis.hpp"
#include "thermoporo/model.hpp"
#include "thermoporo/steppers.hpp"

namespace thermoporo::cli {

enum class ScenarioKind { Example1, Example2, Custom };

std::string_view scenario_name(ScenarioKind s);

/// Parameter values given explicitly; unset entries keep the scenario's values.
struct ParameterOverrides {
  std::optional<double> E;
  std::optional<double> nu;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> a0;
  std::optional<double> b0;
  std::optional<double> c0;
  std::optional<SPD2> K;
  std::optional<SPD2> Theta;
};

struct RunConfig {
  ScenarioKind scenario = ScenarioKind::Example1;
  std::optional<std::vector<Algorithm>> algorithms;
  int k = 2;
  std::optional<int> l;  ///< k - 1 when unset
  std::optional<int> divisions;
  std::optional<double> dt;
  std::optional<double> tau;
  ParameterOverrides params;
  std::string out;
  bool strict = true;
  int workers = 2;
  int repetitions = 3;
  std::optional<std::string> table;
  std::optional<ConvergenceSchedule> schedule;
  std::optional<RateBase> rate_base;  ///< the preset's (else h) when unset
  int load_exactness = kLoadExactness;
  int error_exactness = kLoadExactness;
  WellSigns well_signs = WellSigns::InjectionAt350;
  bool extended = false;  ///< include a preset's optional long-running rows
  bool dump_coefficients = false;

  [[nodiscard]] int degree_l() const { return l.value_or(k - 1); }
};

/// Reference parameter set and refinement schedule of one table.
struct TablePreset {
  std::string id;
  std::string description;
  ParameterOverrides params;
  int k = 2;
  int l = 1;
  ConvergenceSchedule schedule;
  std::vector<RefinementLevel> extended_levels;
  bool permissive = false;
  std::vector<Algorithm> algorithms;
};

/// T1..T6 (convergence) and T7 (timing). Throws InvalidInput for other ids.
const TablePreset& table_preset(std::string_view id);
const std::vector<TablePreset>& table_presets();

using Entry = std::pair<std::string, std::string>;

/// Flat key=value text; '#' starts a comment, blank lines are ignored.
std::vector<Entry> parse_entries(std::string_view text, std::string_view source = "config");
std::vector<Entry> load_entries(const std::string& path);
/// "key=value" from the command line.
Entry parse_override(std::string_view text);

/// Applies the entries in order on top of defaults. A `table` entry selects
/// a preset first, whatever its position; later keys override the preset.
/// Throws InvalidInput naming the offending key.
RunConfig build_config(const std::vector<Entry>& entries);

/// Conflicts that make the config unusable for the given command
/// ("convergence", "bench", "run", "validate"); empty when consistent.
std::vector<std::string> config_conflicts(const RunConfig& config, std::string_view command);

/// Scenario parameters with the overrides applied.
ModelParams resolve_parameters(const RunConfig& config);

struct ResolvedProblem {
  Problem problem;
  int divisions = 0;
  double dt = 0.0;
  double tau = 1.0;
  std::vector<std::string> warnings;  ///< assumption violations in permissive mode
};

/// Builds the problem and checks the assumptions (throws InvalidInput in
/// strict mode when they are violated).
ResolvedProblem resolve_problem(const RunConfig& config);

/// Explicit algorithms, else the preset's, else the command default
/// (alg1-alg3 for convergence, all four for bench, coupled for run).
std::vector<Algorithm> resolve_algorithms(const RunConfig& config, std::string_view command);

/// Schedule of a convergence run: the explicit schedule, else the preset's.
ConvergenceSchedule resolve_schedule(const RunConfig& config);

/// "0.1" (isotropic) or "xx,xy,yy".
SPD2 parse_tensor(std::string_view text);
/// "n:dt,n:dt,..." where dt may be a fraction such as 1/64.
std::vector<RefinementLevel> parse_schedule(std::string_view text);
double parse_number(std::string_view text);

}  // namespace thermoporo::cli
