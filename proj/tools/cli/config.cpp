#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace thermoporo::cli {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_plain(std::string_view text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw InvalidInput("not a number: '" + t + "'");
  }
  return v;
}

int parse_int(std::string_view text) {
  const std::string t = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw InvalidInput("not an integer: '" + t + "'");
  }
  return v;
}

bool parse_bool(std::string_view text) {
  const std::string t = lower(trim(text));
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  throw InvalidInput("not a boolean: '" + t + "'");
}

std::vector<Algorithm> parse_algorithms(std::string_view text) {
  std::vector<Algorithm> out;
  const std::string t = lower(trim(text));
  if (t == "all") return {std::begin(kAllAlgorithms), std::end(kAllAlgorithms)};
  for (const std::string& item : split(t, ',')) {
    const Algorithm a = parse_algorithm(item);
    if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
  }
  return out;
}

ScenarioKind parse_scenario(std::string_view text) {
  const std::string t = lower(trim(text));
  if (t == "example1") return ScenarioKind::Example1;
  if (t == "example2") return ScenarioKind::Example2;
  if (t == "custom") return ScenarioKind::Custom;
  throw InvalidInput("unknown scenario '" + t + "' (expected example1, example2 or custom)");
}

WellSigns parse_well_signs(std::string_view text) {
  const std::string t = lower(trim(text));
  if (t == "injection_at_350") return WellSigns::InjectionAt350;
  if (t == "as_printed") return WellSigns::AsPrinted;
  throw InvalidInput("unknown well_signs '" + t + "' (expected injection_at_350 or as_printed)");
}

const std::vector<Algorithm> kSplitAlgorithms{Algorithm::Sequential1, Algorithm::Sequential2,
                                              Algorithm::Parallel};

std::vector<RefinementLevel> space_time_levels() {
  return {{4, 1.0 / 4}, {8, 1.0 / 16}, {16, 1.0 / 64}, {32, 1.0 / 256}};
}

TablePreset space_time_preset(std::string id, std::string description) {
  TablePreset p;
  p.id = std::move(id);
  p.description = std::move(description);
  p.k = 2;
  p.l = 1;
  p.schedule.levels = space_time_levels();
  p.schedule.base = RateBase::MeshSize;
  p.algorithms = kSplitAlgorithms;
  return p;
}

std::vector<TablePreset> make_presets() {
  std::vector<TablePreset> out;

  TablePreset t1;
  t1.id = "T1";
  t1.description =
      "temporal convergence: k=3, l=2, fixed h=1/32 (a reduced mesh; the reference uses "
      "h=1/100), dt=1/4..1/32, rates against dt";
  t1.k = 3;
  t1.l = 2;
  t1.schedule.levels = {{32, 1.0 / 4}, {32, 1.0 / 8}, {32, 1.0 / 16}, {32, 1.0 / 32}};
  t1.schedule.base = RateBase::TimeStep;
  t1.algorithms = kSplitAlgorithms;
  out.push_back(t1);

  out.push_back(space_time_preset("T2", "baseline: nu=0.3, k=2, l=1, h=1/4..1/32, dt=h^2"));

  TablePreset t3 = space_time_preset("T3", "nearly incompressible: nu=0.499, k=2, l=1");
  t3.params.nu = 0.499;
  out.push_back(t3);

  TablePreset t4 = space_time_preset("T4", "low conductivities: K=Theta=1e-9 I, k=2, l=1");
  t4.params.K = SPD2::isotropic(1e-9);
  t4.params.Theta = SPD2::isotropic(1e-9);
  out.push_back(t4);

  TablePreset t5 = space_time_preset("T5", "degenerate storage: a0=b0=c0=0, k=2, l=1");
  t5.params.a0 = 0.0;
  t5.params.b0 = 0.0;
  t5.params.c0 = 0.0;
  t5.permissive = true;
  out.push_back(t5);

  TablePreset t6;
  t6.id = "T6";
  t6.description =
      "higher order: k=3, l=2, h=1/4..1/16 with dt=h^3; extended=true adds h=1/32, "
      "dt=1/2048";
  t6.k = 3;
  t6.l = 2;
  t6.schedule.levels = {{4, 1.0 / 4}, {8, 1.0 / 32}, {16, 1.0 / 256}};
  t6.extended_levels = {{32, 1.0 / 2048}};
  t6.algorithms = kSplitAlgorithms;
  out.push_back(t6);

  TablePreset t7;
  t7.id = "T7";
  t7.description = "timing: k=2, l=1, h=1/40, dt=1/16; extended=true adds h=1/80, dt=1/64";
  t7.k = 2;
  t7.l = 1;
  t7.schedule.levels = {{40, 1.0 / 16}};
  t7.extended_levels = {{80, 1.0 / 64}};
  t7.algorithms = {std::begin(kAllAlgorithms), std::end(kAllAlgorithms)};
  out.push_back(t7);
  return out;
}

void apply_preset(RunConfig& cfg, const TablePreset& preset) {
  cfg.table = preset.id;
  cfg.scenario = ScenarioKind::Example1;
  cfg.k = preset.k;
  cfg.l = preset.l;
  cfg.params = preset.params;
  cfg.strict = !preset.permissive;
}

void apply_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "scenario") {
    cfg.scenario = parse_scenario(value);
  } else if (key == "algorithm" || key == "algo") {
    cfg.algorithms = parse_algorithms(value);
  } else if (key == "k") {
    cfg.k = parse_int(value);
  } else if (key == "l") {
    cfg.l = parse_int(value);
  } else if (key == "n" || key == "divisions") {
    cfg.divisions = parse_int(value);
  } else if (key == "dt") {
    cfg.dt = parse_number(value);
  } else if (key == "tau") {
    cfg.tau = parse_number(value);
  } else if (key == "E" || key == "youngs_modulus") {
    cfg.params.E = parse_number(value);
  } else if (key == "nu" || key == "poisson_ratio") {
    cfg.params.nu = parse_number(value);
  } else if (key == "alpha") {
    cfg.params.alpha = parse_number(value);
  } else if (key == "beta") {
    cfg.params.beta = parse_number(value);
  } else if (key == "a0") {
    cfg.params.a0 = parse_number(value);
  } else if (key == "b0") {
    cfg.params.b0 = parse_number(value);
  } else if (key == "c0") {
    cfg.params.c0 = parse_number(value);
  } else if (key == "K") {
    cfg.params.K = parse_tensor(value);
  } else if (key == "Theta") {
    cfg.params.Theta = parse_tensor(value);
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "strict") {
    cfg.strict = parse_bool(value);
  } else if (key == "workers") {
    cfg.workers = parse_int(value);
  } else if (key == "repetitions") {
    cfg.repetitions = parse_int(value);
  } else if (key == "schedule") {
    ConvergenceSchedule s = cfg.schedule.value_or(ConvergenceSchedule{});
    s.levels = parse_schedule(value);
    cfg.schedule = s;
  } else if (key == "rate_base") {
    const std::string v = lower(value);
    if (v == "h") {
      cfg.rate_base = RateBase::MeshSize;
    } else if (v == "dt") {
      cfg.rate_base = RateBase::TimeStep;
    } else {
      throw InvalidInput("rate_base must be h or dt");
    }
  } else if (key == "load_exactness") {
    cfg.load_exactness = parse_int(value);
  } else if (key == "error_exactness") {
    cfg.error_exactness = parse_int(value);
  } else if (key == "well_signs") {
    cfg.well_signs = parse_well_signs(value);
  } else if (key == "extended") {
    cfg.extended = parse_bool(value);
  } else if (key == "dump") {
    cfg.dump_coefficients = parse_bool(value);
  } else {
    throw InvalidInput("unknown key '" + key + "'");
  }
}

bool integer_steps(double tau, double dt) {
  if (!(dt > 0.0) || !(tau > 0.0)) return false;
  const double r = tau / dt;
  return std::round(r) >= 1.0 && std::abs(r - std::round(r)) <= 1e-12 * std::max(1.0, r);
}

}  // namespace

std::string_view scenario_name(ScenarioKind s) {
  switch (s) {
    case ScenarioKind::Example1: return "example1";
    case ScenarioKind::Example2: return "example2";
    case ScenarioKind::Custom: return "custom";
  }
  return "unknown";
}

const std::vector<TablePreset>& table_presets() {
  static const std::vector<TablePreset> presets = make_presets();
  return presets;
}

const TablePreset& table_preset(std::string_view id) {
  const std::string want = lower(trim(id));
  for (const TablePreset& p : table_presets()) {
    if (lower(p.id) == want) return p;
  }
  throw InvalidInput("unknown table '" + std::string(id) + "' (expected T1..T7)");
}

double parse_number(std::string_view text) {
  const std::string t = trim(text);
  const std::size_t slash = t.find('/');
  if (slash == std::string::npos) return parse_plain(t);
  const double num = parse_plain(t.substr(0, slash));
  const double den = parse_plain(t.substr(slash + 1));
  if (den == 0.0) throw InvalidInput("division by zero in '" + t + "'");
  return num / den;
}

SPD2 parse_tensor(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() == 1) return SPD2::isotropic(parse_number(parts[0]));
  if (parts.size() == 3) {
    return {parse_number(parts[0]), parse_number(parts[1]), parse_number(parts[2])};
  }
  throw InvalidInput("tensor must be 'v' or 'xx,xy,yy': '" + std::string(text) + "'");
}

std::vector<RefinementLevel> parse_schedule(std::string_view text) {
  std::vector<RefinementLevel> out;
  for (const std::string& item : split(text, ',')) {
    const std::size_t colon = item.find(':');
    if (colon == std::string::npos) {
      throw InvalidInput("schedule entries are n:dt, got '" + item + "'");
    }
    out.push_back({parse_int(item.substr(0, colon)), parse_number(item.substr(colon + 1))});
  }
  return out;
}

std::vector<Entry> parse_entries(std::string_view text, std::string_view source) {
  std::vector<Entry> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos || trim(t.substr(0, eq)).empty()) {
      throw InvalidInput(std::string(source) + ":" + std::to_string(number) +
                         ": expected key=value");
    }
    out.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return out;
}

std::vector<Entry> load_entries(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_entries(buf.str(), path);
}

Entry parse_override(std::string_view text) {
  const auto entries = parse_entries(text, "override");
  if (entries.size() != 1) throw InvalidInput("override must be key=value");
  return entries.front();
}

RunConfig build_config(const std::vector<Entry>& entries) {
  RunConfig cfg;
  for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
    if (it->first == "table") {
      apply_preset(cfg, table_preset(it->second));
      break;
    }
  }
  for (const auto& [key, value] : entries) {
    if (key == "table") continue;
    try {
      apply_entry(cfg, key, value);
    } catch (const InvalidInput& e) {
      throw InvalidInput(key + ": " + e.what());
    }
  }
  return cfg;
}

ModelParams resolve_parameters(const RunConfig& config) {
  ModelParams p = config.scenario == ScenarioKind::Example2 ? example2_scenario().problem.params
                                                             : baseline_parameters();
  const ParameterOverrides& o = config.params;
  if (o.E || o.nu) p.set_young(o.E.value_or(p.youngs_modulus), o.nu.value_or(p.poisson_ratio));
  if (o.alpha) p.alpha = *o.alpha;
  if (o.beta) p.beta = *o.beta;
  if (o.a0) p.a0 = *o.a0;
  if (o.b0) p.b0 = *o.b0;
  if (o.c0) p.c0 = *o.c0;
  if (o.K) p.K = *o.K;
  if (o.Theta) p.Theta = *o.Theta;
  return p;
}

std::vector<Algorithm> resolve_algorithms(const RunConfig& config, std::string_view command) {
  if (config.algorithms) return *config.algorithms;
  if (config.table) return table_preset(*config.table).algorithms;
  if (command == "convergence") return kSplitAlgorithms;
  if (command == "bench") return {std::begin(kAllAlgorithms), std::end(kAllAlgorithms)};
  return {Algorithm::Coupled};
}

ConvergenceSchedule resolve_schedule(const RunConfig& config) {
  ConvergenceSchedule s;
  if (config.table) {
    const TablePreset& preset = table_preset(*config.table);
    s = preset.schedule;
    if (config.extended) {
      s.levels.insert(s.levels.end(), preset.extended_levels.begin(), preset.extended_levels.end());
    }
  }
  if (config.schedule) {
    if (!config.schedule->levels.empty()) s.levels = config.schedule->levels;
  }
  if (config.rate_base) s.base = *config.rate_base;
  if (config.tau) s.tau = *config.tau;
  s.load_exactness = config.load_exactness;
  s.error_exactness = config.error_exactness;
  return s;
}

ResolvedProblem resolve_problem(const RunConfig& config) {
  ResolvedProblem out;
  const ModelParams params = resolve_parameters(config);
  out.warnings = check_assumptions(
      params, config.strict ? AssumptionMode::Strict : AssumptionMode::Permissive);

  int divisions = 8;
  double dt = 1.0 / 16.0;
  double tau = 1.0;
  switch (config.scenario) {
    case ScenarioKind::Example1:
      out.problem = example1_problem(params);
      break;
    case ScenarioKind::Example2: {
      Scenario sc = example2_scenario(config.well_signs);
      // The well sources do not depend on the parameters; xi^0 = beta T0 does.
      out.problem = std::move(sc.problem);
      out.problem.params = params;
      const double T0 = out.problem.initial.T ? out.problem.initial.T(Point2{}) : 0.0;
      out.problem.initial.xi = [xi0 = params.beta * T0](Point2) { return xi0; };
      divisions = sc.divisions;
      dt = sc.dt;
      tau = sc.tau;
      break;
    }
    case ScenarioKind::Custom:
      out.problem = zero_problem(params);
      out.problem.name = "custom";
      break;
  }
  if (config.table) {
    const TablePreset& preset = table_preset(*config.table);
    divisions = preset.schedule.levels.front().divisions;
    dt = preset.schedule.levels.front().dt;
    tau = preset.schedule.tau;
  }
  out.divisions = config.divisions.value_or(divisions);
  out.dt = config.dt.value_or(dt);
  out.tau = config.tau.value_or(tau);
  return out;
}

std::vector<std::string> config_conflicts(const RunConfig& config, std::string_view command) {
  std::vector<std::string> out;
  if (config.k < 2 || config.k > 3) out.push_back("k must be 2 or 3");
  const int l = config.degree_l();
  if (l < 1 || l > 3) out.push_back("l must be 1, 2 or 3");
  if (config.workers < 1) out.push_back("workers must be at least 1");
  if (config.repetitions < 1) out.push_back("repetitions must be at least 1");
  if (config.load_exactness < 1 || config.load_exactness > 10) {
    out.push_back("load_exactness must be in 1..10");
  }
  if (config.error_exactness < 1 || config.error_exactness > 10) {
    out.push_back("error_exactness must be in 1..10");
  }
  if (config.table && config.scenario != ScenarioKind::Example1) {
    out.push_back("table presets use scenario example1, got " +
                  std::string(scenario_name(config.scenario)));
  }
  if (config.algorithms && config.algorithms->empty()) out.push_back("no algorithm selected");

  try {
    const ModelParams params = resolve_parameters(config);
    const auto violations = assumption_violations(params);
    if (config.strict) {
      for (const std::string& v : violations) out.push_back("assumption violated: " + v);
    }
  } catch (const InvalidInput& e) {
    out.push_back(e.what());
  }

  if (command == "convergence") {
    if (config.scenario != ScenarioKind::Example1) {
      out.push_back("convergence needs a closed-form solution (scenario example1)");
    }
    if (!config.table && (!config.schedule || config.schedule->levels.empty())) {
      out.push_back("convergence needs --table or a schedule");
    }
    if (config.table || config.schedule) {
      try {
        const ConvergenceSchedule s = resolve_schedule(config);
        for (const RefinementLevel& level : s.levels) {
          if (level.divisions < 1) out.push_back("schedule: mesh divisions must be positive");
          if (!integer_steps(s.tau, level.dt)) {
            out.push_back("schedule: tau is not an integer multiple of dt=" +
                          std::to_string(level.dt));
          }
        }
      } catch (const InvalidInput& e) {
        out.push_back(e.what());
      }
    }
  } else if (command == "bench" || command == "run") {
    try {
      const RunConfig copy = [&] {
        RunConfig c = config;
        c.strict = false;  // violations are reported above
        return c;
      }();
      const ResolvedProblem rp = resolve_problem(copy);
      if (rp.divisions < 1) out.push_back("n must be positive");
      if (!integer_steps(rp.tau, rp.dt)) out.push_back("tau must be an integer multiple of dt");
    } catch (const InvalidInput& e) {
      out.push_back(e.what());
    }
    if (command == "run" && config.algorithms && config.algorithms->size() > 1) {
      out.push_back("run takes a single algorithm");
    }
    if (command == "bench" && config.scenario != ScenarioKind::Example1 && config.table) {
      out.push_back("bench presets use scenario example1");
    }
  }
  return out;
}

}  // namespace thermoporo::cli
