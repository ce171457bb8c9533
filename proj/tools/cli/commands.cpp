#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "thermoporo/vtk.hpp"
#include "validate.hpp"

namespace thermoporo::cli {

namespace {

std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string sci(double v) { return format("%.5e", v); }
std::string full(double v) { return format("%.17g", v); }
std::string compact(double v) { return format("%.6g", v); }

std::string rate(const std::optional<double>& r) { return r ? format("%.2f", *r) : ""; }

FieldRange range_of(std::string name, std::span<const double> values,
                    const std::vector<Point2>& coords) {
  FieldRange r;
  r.field = std::move(name);
  if (values.empty()) return r;
  std::size_t lo = 0;
  std::size_t hi = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[lo]) lo = i;
    if (values[i] > values[hi]) hi = i;
  }
  r.min = values[lo];
  r.max = values[hi];
  r.argmin = coords[lo];
  r.argmax = coords[hi];
  return r;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream file(path);
  if (!file) throw InvalidInput("cannot write '" + path.string() + "'");
  file << text;
  if (!file) throw InvalidInput("failed writing '" + path.string() + "'");
}

void emit(const RunConfig& config, const std::string& text, std::ostream& out) {
  if (config.out.empty()) {
    out << text;
    return;
  }
  const std::filesystem::path path(config.out);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  write_text(path, text);
}

void report_warnings(const std::vector<std::string>& warnings, std::ostream& log) {
  for (const std::string& w : warnings) log << "warning: " << w << '\n';
}

}  // namespace

std::string convergence_csv(const std::vector<ConvergenceTable>& tables) {
  std::ostringstream s;
  s << "algorithm,h,dt,err_u_H1,rate_u,err_xi_L2,rate_xi,err_p_H1,rate_p,err_T_H1,rate_T,"
       "err_u_H1_full,err_xi_L2_full,err_p_H1_full,err_T_H1_full\n";
  for (const ConvergenceTable& table : tables) {
    for (const ConvergenceRow& row : table.rows) {
      const auto e = row.errors.as_array();
      s << algorithm_name(table.algorithm) << ',' << compact(row.h) << ',' << compact(row.dt);
      for (std::size_t i = 0; i < 4; ++i) s << ',' << sci(e[i]) << ',' << rate(row.rates[i]);
      for (std::size_t i = 0; i < 4; ++i) s << ',' << full(e[i]);
      s << '\n';
    }
  }
  return s.str();
}

std::string bench_csv(const std::vector<TimingReport>& reports, int divisions, double dt) {
  std::ostringstream s;
  s << "algorithm,h,dt,err_u_H1,err_xi_L2,err_p_H1,err_T_H1,median_seconds,repetitions,"
       "setup_seconds,rhs_seconds,solve_seconds,join_seconds,"
       "err_u_H1_full,err_xi_L2_full,err_p_H1_full,err_T_H1_full\n";
  for (const TimingReport& r : reports) {
    s << algorithm_name(r.algorithm) << ',' << compact(1.0 / divisions) << ',' << compact(dt);
    const auto e = r.errors ? r.errors->as_array() : std::array<double, 4>{};
    for (std::size_t i = 0; i < 4; ++i) s << ',' << (r.errors ? sci(e[i]) : "");
    const PhaseTimings& p = r.phases;
    s << ',' << format("%.4f", r.median_seconds) << ',' << r.samples.size() << ','
      << format("%.4f", p.setup) << ',' << format("%.4f", p.rhs) << ','
      << format("%.4f", p.solve_coupled + p.solve_elasticity + p.solve_rd) << ','
      << format("%.4f", p.join);
    for (std::size_t i = 0; i < 4; ++i) s << ',' << (r.errors ? full(e[i]) : "");
    s << '\n';
  }
  return s.str();
}

RunSummary run_scenario(const RunConfig& config, const std::filesystem::path& directory) {
  ResolvedProblem rp = resolve_problem(config);
  RunSummary sum;
  sum.scenario = std::string(scenario_name(config.scenario));
  sum.algorithm = resolve_algorithms(config, "run").front();
  sum.divisions = rp.divisions;
  sum.dt = rp.dt;
  sum.tau = rp.tau;
  sum.warnings = rp.warnings;

  Simulation sim(make_mesh(rp.problem, rp.divisions), config.k, config.degree_l(), rp.problem);
  sim.set_load_exactness(config.load_exactness);
  StepConfig step;
  step.dt = rp.dt;
  step.tau = rp.tau;
  step.algorithm = sum.algorithm;
  step.workers = config.workers;
  sum.steps = step.steps();
  const RunResult result = sim.run(step);
  const State& s = result.final_state;
  const Spaces& sp = sim.spaces();
  sum.timings = result.timings;
  sum.first_level_iterations = result.first_level_iterations;
  sum.dofs_u = sp.displacement.size();
  sum.dofs_xi = sp.xi.size();
  sum.dofs_p = sp.scalar.size();
  sum.dofs_T = sp.scalar.size();

  const auto nu = static_cast<std::size_t>(sp.displacement.scalar_size());
  std::span<const double> ux(s.u.data(), nu);
  std::span<const double> uy(s.u.data() + nu, nu);
  std::vector<double> mag(nu);
  for (std::size_t i = 0; i < nu; ++i) mag[i] = std::hypot(ux[i], uy[i]);
  const auto& cu = sp.displacement.coordinates();
  sum.ranges.push_back(range_of("u_x", ux, cu));
  sum.ranges.push_back(range_of("u_y", uy, cu));
  sum.ranges.push_back(range_of("|u|", mag, cu));
  sum.ranges.push_back(range_of("xi", s.xi, sp.xi.coordinates()));
  sum.ranges.push_back(range_of("p", s.p, sp.scalar.coordinates()));
  sum.ranges.push_back(range_of("T", s.T, sp.scalar.coordinates()));
  for (const FieldRange& r : sum.ranges) {
    if (!std::isfinite(r.min) || !std::isfinite(r.max)) {
      throw NumericalFailure("non-finite values in field " + r.field);
    }
  }
  if (rp.problem.exact) {
    sum.errors = error_report(s, *rp.problem.exact, sp, sim.mesh(), config.error_exactness);
  }

  sum.files = write_state_vtk(directory, sim.mesh(), sp, s);
  if (config.dump_coefficients) {
    std::ostringstream c;
    c << "field,index,x,y,value\n";
    const auto dump = [&](const char* name, std::span<const double> v,
                          const std::vector<Point2>& coords) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        const Point2& x = coords[i % coords.size()];
        c << name << ',' << i << ',' << full(x.x) << ',' << full(x.y) << ',' << full(v[i]) << '\n';
      }
    };
    dump("u", s.u, cu);
    dump("xi", s.xi, sp.xi.coordinates());
    dump("p", s.p, sp.scalar.coordinates());
    dump("T", s.T, sp.scalar.coordinates());
    const auto path = directory / "coefficients.csv";
    write_text(path, c.str());
    sum.files.push_back(path);
  }
  const auto summary_path = directory / "summary.txt";
  sum.files.push_back(summary_path);
  write_text(summary_path, summary_text(sum));
  return sum;
}

std::string summary_text(const RunSummary& s) {
  std::ostringstream o;
  o << "scenario " << s.scenario << '\n'
    << "algorithm " << algorithm_name(s.algorithm) << '\n'
    << "divisions " << s.divisions << '\n'
    << "dt " << full(s.dt) << '\n'
    << "tau " << full(s.tau) << '\n'
    << "steps " << s.steps << '\n'
    << "dofs u " << s.dofs_u << " xi " << s.dofs_xi << " p " << s.dofs_p << " T " << s.dofs_T
    << '\n';
  const PhaseTimings& t = s.timings;
  o << "seconds total " << format("%.4f", t.total) << " setup " << format("%.4f", t.setup)
    << " rhs " << format("%.4f", t.rhs) << " coupled " << format("%.4f", t.solve_coupled)
    << " elasticity " << format("%.4f", t.solve_elasticity) << " rd "
    << format("%.4f", t.solve_rd) << " join " << format("%.4f", t.join) << '\n';
  if (s.first_level_iterations > 0) {
    o << "first level gmres iterations " << s.first_level_iterations << '\n';
  }
  for (const FieldRange& r : s.ranges) {
    o << "range " << r.field << " min " << sci(r.min) << " at (" << compact(r.argmin.x) << ", "
      << compact(r.argmin.y) << ") max " << sci(r.max) << " at (" << compact(r.argmax.x) << ", "
      << compact(r.argmax.y) << ")\n";
  }
  if (s.errors) {
    o << "error u_H1 " << sci(s.errors->u_h1) << " xi_L2 " << sci(s.errors->xi_l2) << " p_H1 "
      << sci(s.errors->p_h1) << " T_H1 " << sci(s.errors->T_h1) << '\n';
  }
  for (const std::string& w : s.warnings) o << "warning " << w << '\n';
  return o.str();
}

int cmd_convergence(const RunConfig& config, std::ostream& out, std::ostream& log) {
  ResolvedProblem rp = resolve_problem(config);
  report_warnings(rp.warnings, log);
  const ConvergenceSchedule schedule = resolve_schedule(config);
  const auto tables = convergence_study(rp.problem, schedule,
                                        resolve_algorithms(config, "convergence"), config.k,
                                        config.degree_l(), config.workers);
  emit(config, convergence_csv(tables), out);
  return kExitSuccess;
}

int cmd_bench(const RunConfig& config, std::ostream& out, std::ostream& log) {
  RunConfig cfg = config;
  if (!cfg.table && !cfg.divisions && !cfg.dt && cfg.scenario == ScenarioKind::Example1) {
    cfg.table = "T7";
  }
  ResolvedProblem rp = resolve_problem(cfg);
  report_warnings(rp.warnings, log);
  BenchmarkConfig bc;
  bc.divisions = rp.divisions;
  bc.dt = rp.dt;
  bc.tau = rp.tau;
  bc.k = cfg.k;
  bc.l = cfg.degree_l();
  bc.repetitions = cfg.repetitions;
  bc.workers = cfg.workers;
  const auto reports = benchmark(rp.problem, resolve_algorithms(cfg, "bench"), bc);
  emit(cfg, bench_csv(reports, bc.divisions, bc.dt), out);
  return kExitSuccess;
}

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& log) {
  const std::filesystem::path dir = config.out.empty() ? "tpsolve_run" : config.out;
  const RunSummary s = run_scenario(config, dir);
  report_warnings(s.warnings, log);
  out << summary_text(s);
  for (const auto& f : s.files) out << "wrote " << f.string() << '\n';
  return kExitSuccess;
}

int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream&) {
  const auto checks = run_validation(config);
  bool failed = false;
  for (const CheckResult& c : checks) {
    out << status_label(c.status) << ' ' << c.name;
    if (!c.detail.empty()) out << ": " << c.detail;
    out << '\n';
    failed = failed || c.status == CheckStatus::Fail;
  }
  out << (failed ? "validation failed" : "validation passed") << '\n';
  return failed ? kExitNumericalFailure : kExitSuccess;
}

int dispatch(const std::string& command, const RunConfig& config, std::ostream& out,
             std::ostream& log) {
  try {
    if (command != "validate") {
      const auto conflicts = config_conflicts(config, command);
      if (!conflicts.empty()) {
        for (const std::string& c : conflicts) log << "config error: " << c << '\n';
        return kExitConfigError;
      }
    }
    if (command == "convergence") return cmd_convergence(config, out, log);
    if (command == "bench") return cmd_bench(config, out, log);
    if (command == "run") return cmd_run(config, out, log);
    if (command == "validate") return cmd_validate(config, out, log);
    log << "unknown command '" << command << "'\n";
    return kExitConfigError;
  } catch (const InvalidInput& e) {
    log << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const NumericalFailure& e) {
    log << "numerical failure: " << e.what() << '\n';
    return kExitNumericalFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    log << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
}

}  // namespace thermoporo::cli
