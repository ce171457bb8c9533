#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli/commands.hpp"
#include "cli/config.hpp"

namespace {

std::string preset_help() {
  std::string s = "Table presets:\n";
  for (const auto& p : thermoporo::cli::table_presets())
    s += "  " + p.id + "  " + p.description + "\n";
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace thermoporo::cli;

  CLI::App app{"Four-field thermo-poroelasticity solver"};
  app.footer(preset_help() +
             "Config keys (file or key=value overrides): scenario, algorithm, k, l, n, dt, tau,\n"
             "E, nu, alpha, beta, a0, b0, c0, K, Theta, out, strict, workers, repetitions,\n"
             "schedule, rate_base, load_exactness, error_exactness, well_signs, extended, dump.");
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string table;
  std::string algo;
  std::string out;
  int workers = 0;
  bool strict = false;
  std::vector<std::string> overrides;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key=value config file");
    sub->add_option("--table", table, "table preset T1..T7");
    sub->add_option("--algo", algo, "coupled, alg1, alg2, alg3, a comma list or all");
    sub->add_option("--out", out, "output file (CSV) or directory (run)");
    sub->add_option("--workers", workers, "worker threads for alg3")->check(CLI::PositiveNumber);
    sub->add_flag("--strict", strict, "fail on violated parameter assumptions");
    sub->add_option("overrides", overrides, "key=value overrides");
  };
  for (const char* name : {"convergence", "bench", "run", "validate"}) {
    add_common(app.add_subcommand(name, std::string(name) == "convergence"
                                            ? "error and rate table (CSV)"
                                        : std::string(name) == "bench"
                                            ? "median wall time per algorithm (CSV)"
                                        : std::string(name) == "run"
                                            ? "single run with VTK snapshots and summary"
                                            : "invariant suite with per-check status"));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitSuccess : kExitConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  RunConfig config;
  try {
    std::vector<Entry> entries;
    if (!config_path.empty()) entries = load_entries(config_path);
    for (const std::string& o : overrides) entries.push_back(parse_override(o));
    if (!table.empty()) entries.emplace_back("table", table);
    if (!algo.empty()) entries.emplace_back("algorithm", algo);
    if (!out.empty()) entries.emplace_back("out", out);
    if (workers > 0) entries.emplace_back("workers", std::to_string(workers));
    if (strict) entries.emplace_back("strict", "true");
    config = build_config(entries);
  } catch (const thermoporo::InvalidInput& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
  return dispatch(command, config, std::cout, std::cerr);
}
