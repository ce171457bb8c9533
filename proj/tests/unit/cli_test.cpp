#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "cli/validate.hpp"
#include "support/oracles.hpp"

namespace tp = thermoporo;
namespace cli = thermoporo::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("thermoporo_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string(TPSOLVE_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(CliParsing, EntriesAndComments) {
  const auto e = cli::parse_entries("# header\nk = 3\n\n  dt=1/64  # trailing\nalgo=alg1,alg3\n");
  ASSERT_EQ(e.size(), 3u);
  EXPECT_EQ(e[0], (cli::Entry{"k", "3"}));
  EXPECT_EQ(e[1], (cli::Entry{"dt", "1/64"}));
  EXPECT_THROW(cli::parse_entries("just words\n"), tp::InvalidInput);
  EXPECT_EQ(cli::parse_override("nu=0.499"), (cli::Entry{"nu", "0.499"}));
  EXPECT_THROW(cli::parse_override("nu"), tp::InvalidInput);
}

TEST(CliParsing, NumbersTensorsSchedules) {
  EXPECT_DOUBLE_EQ(cli::parse_number("1/64"), 1.0 / 64.0);
  EXPECT_DOUBLE_EQ(cli::parse_number("2.5e-1"), 0.25);
  EXPECT_THROW(cli::parse_number("abc"), tp::InvalidInput);
  EXPECT_THROW(cli::parse_number("1/0"), tp::InvalidInput);
  const auto iso = cli::parse_tensor("1e-9");
  EXPECT_DOUBLE_EQ(iso.xx, 1e-9);
  EXPECT_DOUBLE_EQ(iso.xy, 0.0);
  const auto full = cli::parse_tensor("2,0.5,3");
  EXPECT_DOUBLE_EQ(full.xy, 0.5);
  EXPECT_THROW(cli::parse_tensor("1,2"), tp::InvalidInput);
  const auto s = cli::parse_schedule("4:1/4, 8:1/16");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[1].divisions, 8);
  EXPECT_DOUBLE_EQ(s[1].dt, 1.0 / 16.0);
  EXPECT_THROW(cli::parse_schedule("4-1/4"), tp::InvalidInput);
}

TEST(CliConfig, LaterEntriesWinAndTableAppliesFirst) {
  const auto c = cli::build_config({{"k", "3"}, {"table", "T2"}, {"nu", "0.4"}, {"nu", "0.45"}});
  EXPECT_EQ(c.k, 3);
  ASSERT_TRUE(c.params.nu.has_value());
  EXPECT_DOUBLE_EQ(*c.params.nu, 0.45);
  EXPECT_EQ(c.table, std::optional<std::string>("T2"));
  try {
    cli::build_config({{"colour", "red"}});
    FAIL() << "unknown key accepted";
  } catch (const tp::InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("colour"), std::string::npos);
  }
  EXPECT_THROW(cli::build_config({{"k", "two"}}), tp::InvalidInput);
  EXPECT_THROW(cli::build_config({{"table", "T9"}}), tp::InvalidInput);
}

TEST(CliConfig, PresetsCarryTheirParameterSets) {
  const auto& t2 = cli::table_preset("T2");
  EXPECT_EQ(t2.k, 2);
  EXPECT_EQ(t2.l, 1);
  ASSERT_EQ(t2.schedule.levels.size(), 4u);
  EXPECT_EQ(t2.schedule.levels[3].divisions, 32);
  EXPECT_DOUBLE_EQ(t2.schedule.levels[3].dt, 1.0 / 256.0);
  EXPECT_EQ(t2.algorithms.size(), 3u);
  EXPECT_DOUBLE_EQ(*cli::table_preset("T3").params.nu, 0.499);
  EXPECT_DOUBLE_EQ(cli::table_preset("T4").params.K->xx, 1e-9);
  EXPECT_DOUBLE_EQ(cli::table_preset("T4").params.Theta->yy, 1e-9);
  const auto& t5 = cli::table_preset("T5");
  EXPECT_TRUE(t5.permissive);
  EXPECT_DOUBLE_EQ(*t5.params.a0, 0.0);
  const auto& t6 = cli::table_preset("T6");
  EXPECT_EQ(t6.k, 3);
  EXPECT_EQ(t6.l, 2);
  EXPECT_EQ(t6.schedule.levels.size(), 3u);
  EXPECT_EQ(t6.extended_levels.size(), 1u);
  EXPECT_EQ(cli::table_preset("T1").schedule.base, tp::RateBase::TimeStep);
  EXPECT_EQ(cli::table_preset("T7").algorithms.size(), 4u);

  const auto c5 = cli::build_config({{"table", "T5"}});
  EXPECT_FALSE(c5.strict);
  EXPECT_TRUE(cli::config_conflicts(c5, "convergence").empty());
  const auto params = cli::resolve_parameters(c5);
  EXPECT_EQ(params.c0, 0.0);
  EXPECT_DOUBLE_EQ(params.lambda, tp::derive_lame(1.0, 0.3).lambda);
}

TEST(CliConfig, ConflictsAreReportedBeforeSolving) {
  EXPECT_FALSE(cli::config_conflicts(cli::build_config({{"k", "4"}}), "run").empty());
  EXPECT_FALSE(
      cli::config_conflicts(cli::build_config({{"scenario", "example2"}, {"schedule", "4:1/4"}}),
                            "convergence")
          .empty());
  EXPECT_FALSE(cli::config_conflicts(cli::build_config({}), "convergence").empty());
  EXPECT_FALSE(cli::config_conflicts(cli::build_config({{"dt", "0.3"}}), "run").empty());
  EXPECT_FALSE(
      cli::config_conflicts(cli::build_config({{"a0", "0"}, {"b0", "0"}, {"c0", "0"}}), "run")
          .empty());
  EXPECT_TRUE(cli::config_conflicts(
                  cli::build_config({{"a0", "0"}, {"b0", "0"}, {"c0", "0"}, {"strict", "false"}}),
                  "run")
                  .empty());
  EXPECT_FALSE(cli::config_conflicts(cli::build_config({{"algo", "alg1,alg2"}}), "run").empty());
}

TEST(CliConfig, AlgorithmDefaultsPerCommand) {
  const auto none = cli::build_config({});
  EXPECT_EQ(cli::resolve_algorithms(none, "run"), std::vector{tp::Algorithm::Coupled});
  EXPECT_EQ(cli::resolve_algorithms(none, "bench").size(), 4u);
  EXPECT_EQ(cli::resolve_algorithms(none, "convergence").size(), 3u);
  const auto chosen = cli::build_config({{"algo", "alg3"}});
  EXPECT_EQ(cli::resolve_algorithms(chosen, "bench"), std::vector{tp::Algorithm::Parallel});
}

TEST(CliCommands, ConvergenceCsvIsDeterministic) {
  const auto c = cli::build_config({{"schedule", "2:1/4,4:1/16"}, {"algo", "alg1,alg3"}});
  std::ostringstream a, b, log;
  ASSERT_EQ(cli::cmd_convergence(c, a, log), cli::kExitSuccess);
  ASSERT_EQ(cli::cmd_convergence(c, b, log), cli::kExitSuccess);
  EXPECT_EQ(a.str(), b.str());
  const auto lines = split_lines(a.str());
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0],
            "algorithm,h,dt,err_u_H1,rate_u,err_xi_L2,rate_xi,err_p_H1,rate_p,err_T_H1,rate_T,"
            "err_u_H1_full,err_xi_L2_full,err_p_H1_full,err_T_H1_full");
  const auto first = split_fields(lines[1]);
  ASSERT_EQ(first.size(), 15u);
  EXPECT_EQ(first[0], "alg1");
  EXPECT_EQ(first[1], "0.5");
  EXPECT_EQ(first[4], "");
  // Five significant digits in scientific notation, as in the reference tables.
  EXPECT_EQ(first[3].size(), std::string("1.23456e-01").size());
  EXPECT_NEAR(std::stod(first[3]), std::stod(first[11]), 1e-5 * std::stod(first[11]));
  const auto second = split_fields(lines[2]);
  EXPECT_EQ(second[4].find('.'), second[4].size() - 3);
}

TEST(CliCommands, BenchErrorsEqualRunErrors) {
  const auto c = cli::build_config(
      {{"n", "4"}, {"dt", "1/4"}, {"repetitions", "1"}, {"algo", "alg2"}});
  std::ostringstream csv, log;
  ASSERT_EQ(cli::cmd_bench(c, csv, log), cli::kExitSuccess);
  const auto lines = split_lines(csv.str());
  ASSERT_EQ(lines.size(), 2u);
  const auto header = split_fields(lines[0]);
  const auto row = split_fields(lines[1]);
  ASSERT_EQ(header.size(), row.size());
  const auto column = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return std::stod(row[i]);
    }
    ADD_FAILURE() << "missing column " << name;
    return 0.0;
  };
  const auto summary = cli::run_scenario(c, scratch_dir("bench_vs_run"));
  ASSERT_TRUE(summary.errors.has_value());
  EXPECT_NEAR(column("err_u_H1_full"), summary.errors->u_h1, 1e-12);
  EXPECT_NEAR(column("err_xi_L2_full"), summary.errors->xi_l2, 1e-12);
  EXPECT_NEAR(column("err_p_H1_full"), summary.errors->p_h1, 1e-12);
  EXPECT_NEAR(column("err_T_H1_full"), summary.errors->T_h1, 1e-12);
  EXPECT_GT(column("median_seconds"), 0.0);
}

TEST(CliCommands, ZeroSourceCustomRunEmitsZeroFields) {
  const auto dir = scratch_dir("zero");
  auto c = cli::build_config({{"scenario", "custom"}, {"n", "3"}, {"dt", "1/4"}, {"algo", "alg3"}});
  c.out = dir.string();
  std::ostringstream out, log;
  ASSERT_EQ(cli::cmd_run(c, out, log), cli::kExitSuccess);
  for (const char* name : {"u.vtk", "xi.vtk", "p.vtk", "T.vtk"}) {
    const auto f = oracle::read_vtk_file((dir / name).string());
    ASSERT_TRUE(f.valid) << name << ": " << f.error;
    for (double v : f.data) EXPECT_EQ(v, 0.0) << name;
  }
  std::ifstream summary(dir / "summary.txt");
  ASSERT_TRUE(summary.good());
  const std::string text((std::istreambuf_iterator<char>(summary)), {});
  EXPECT_NE(text.find("custom"), std::string::npos);
}

TEST(CliCommands, CoefficientDump) {
  const auto dir = scratch_dir("dump");
  auto c = cli::build_config({{"n", "2"}, {"dt", "1/2"}, {"dump", "true"}});
  const auto summary = cli::run_scenario(c, dir);
  EXPECT_TRUE(fs::exists(dir / "coefficients.csv"));
  EXPECT_EQ(summary.dofs_u, 2 * 25);
  EXPECT_EQ(summary.dofs_p, 9);
  EXPECT_EQ(summary.steps, 2);
}

TEST(CliValidate, SuitePassesAndAssumptionModesDiffer) {
  const auto results = cli::run_validation(cli::build_config({}));
  ASSERT_FALSE(results.empty());
  for (const auto& r : results) {
    EXPECT_EQ(r.status, cli::CheckStatus::Pass) << r.name << ": " << r.detail;
  }
  const auto statuses = [](const cli::RunConfig& c) {
    std::vector<cli::CheckStatus> s;
    for (const auto& r : cli::run_validation(c)) s.push_back(r.status);
    return s;
  };
  const auto permissive = statuses(cli::build_config({{"table", "T5"}}));
  EXPECT_NE(std::find(permissive.begin(), permissive.end(), cli::CheckStatus::Warn),
            permissive.end());
  EXPECT_EQ(std::find(permissive.begin(), permissive.end(), cli::CheckStatus::Fail),
            permissive.end());
  const auto strict = statuses(cli::build_config({{"table", "T5"}, {"strict", "true"}}));
  EXPECT_NE(std::find(strict.begin(), strict.end(), cli::CheckStatus::Fail), strict.end());
}

TEST(CliTool, ExitCodes) {
  const auto dir = scratch_dir("tool");
  EXPECT_EQ(run_tool("--help"), 0);
  EXPECT_EQ(run_tool(""), 1);
  EXPECT_EQ(run_tool("frobnicate"), 1);
  EXPECT_EQ(run_tool("run --algo alg7"), 1);
  EXPECT_EQ(run_tool("run k=5"), 1);
  EXPECT_EQ(run_tool("convergence --config /nonexistent/file.cfg"), 1);
  EXPECT_EQ(run_tool("run --out /proc/forbidden/dir n=2 dt=1/2"), 1);
  EXPECT_EQ(run_tool("run --out " + (dir / "ok").string() + " n=2 dt=1/2"), 0);
  EXPECT_TRUE(fs::exists(dir / "ok" / "p.vtk"));
  const auto cfg = dir / "t.cfg";
  std::ofstream(cfg) << "# small study\nschedule = 2:1/4,4:1/16\nalgorithm = alg2\n";
  EXPECT_EQ(run_tool("convergence --config " + cfg.string() + " --out " +
                     (dir / "t.csv").string()),
            0);
  EXPECT_TRUE(fs::exists(dir / "t.csv"));
  // A strict validation of parameters violating the assumptions is a failed suite.
  EXPECT_EQ(run_tool("validate --table T5 strict=true"), 2);
}
