#include <gtest/gtest.h>

#include "support/oracles.hpp"
#include "thermoporo/analysis.hpp"

namespace tp = thermoporo;

namespace {

std::vector<double> difference(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

double state_distance(const tp::State& a, const tp::State& b) {
  return std::max({oracle::max_abs_diff(a.u, b.u), oracle::max_abs_diff(a.xi, b.xi),
                   oracle::max_abs_diff(a.p, b.p), oracle::max_abs_diff(a.T, b.T)});
}

tp::StepConfig config(tp::Algorithm a, double dt, bool trajectory = true) {
  tp::StepConfig c;
  c.algorithm = a;
  c.dt = dt;
  c.tau = 1.0;
  c.keep_trajectory = trajectory;
  return c;
}

}  // namespace

TEST(StepConfig, StepsMustDivideHorizon) {
  tp::StepConfig c;
  c.dt = 0.25;
  EXPECT_EQ(c.steps(), 4);
  c.dt = 1.0 / 64.0;
  EXPECT_EQ(c.steps(), 64);
  c.dt = 0.3;
  EXPECT_THROW((void)c.steps(), tp::InvalidInput);
  c.dt = -1.0;
  EXPECT_THROW((void)c.steps(), tp::InvalidInput);
}

TEST(Algorithms, ParseAndName) {
  EXPECT_EQ(tp::parse_algorithm("coupled"), tp::Algorithm::Coupled);
  EXPECT_EQ(tp::parse_algorithm("alg1"), tp::Algorithm::Sequential1);
  EXPECT_EQ(tp::parse_algorithm("alg2"), tp::Algorithm::Sequential2);
  EXPECT_EQ(tp::parse_algorithm("alg3"), tp::Algorithm::Parallel);
  for (const auto a : tp::kAllAlgorithms) EXPECT_EQ(tp::parse_algorithm(tp::algorithm_name(a)), a);
  EXPECT_THROW(tp::parse_algorithm("alg4"), tp::InvalidInput);
}

class PatchTest : public ::testing::TestWithParam<std::tuple<int, tp::Algorithm>> {};

TEST_P(PatchTest, ReproducesPolynomialSolution) {
  const auto [k, algorithm] = GetParam();
  const int l = k - 1;
  const auto problem = tp::patch_problem(tp::baseline_parameters(), k, l);
  tp::Simulation sim(tp::make_mesh(problem, 3), k, l, problem);
  const auto result = sim.run(config(algorithm, 0.25, false));
  const auto& s = result.final_state;
  ASSERT_DOUBLE_EQ(s.t, 1.0);
  // Oracle: nodal interpolation of the exact fields.
  const auto& ex = *problem.exact;
  const auto u =
      sim.spaces().displacement.interpolate_vector([&](tp::Point2 x) { return ex.u(x, 1.0); });
  const auto xi = sim.spaces().xi.interpolate([&](tp::Point2 x) { return ex.xi(x, 1.0); });
  const auto p = sim.spaces().scalar.interpolate([&](tp::Point2 x) { return ex.p(x, 1.0); });
  const auto T = sim.spaces().scalar.interpolate([&](tp::Point2 x) { return ex.T(x, 1.0); });
  EXPECT_LT(oracle::max_abs_diff(s.u, u), 1e-9);
  EXPECT_LT(oracle::max_abs_diff(s.xi, xi), 1e-9);
  EXPECT_LT(oracle::max_abs_diff(s.p, p), 1e-9);
  EXPECT_LT(oracle::max_abs_diff(s.T, T), 1e-9);
}

INSTANTIATE_TEST_SUITE_P(
    DegreesAndAlgorithms, PatchTest,
    ::testing::Combine(::testing::Values(2, 3), ::testing::ValuesIn(tp::kAllAlgorithms)),
    [](const auto& info) {
      return "k" + std::to_string(std::get<0>(info.param)) + "_" +
             std::string(tp::algorithm_name(std::get<1>(info.param)));
    });

TEST(Steppers, DecoupledParametersMakeAllAlgorithmsMonolithic) {
  auto params = tp::baseline_parameters();
  params.alpha = 0.0;
  params.beta = 0.0;
  const auto problem = tp::example1_problem(params);
  tp::Simulation sim(tp::make_mesh(problem, 4), 2, 1, problem);
  const auto reference = sim.run(config(tp::Algorithm::Coupled, 0.125)).trajectory;
  for (const auto a : tp::kAllAlgorithms) {
    const auto run = sim.run(config(a, 0.125)).trajectory;
    ASSERT_EQ(run.size(), reference.size());
    for (std::size_t n = 0; n < run.size(); ++n) {
      EXPECT_LT(state_distance(run[n], reference[n]), 1e-10)
          << tp::algorithm_name(a) << " level " << n;
    }
  }
}

TEST(Steppers, TrajectoriesFollowTheSubstepComposition) {
  const auto problem = tp::example1_problem(tp::baseline_parameters());
  tp::Simulation sim(tp::make_mesh(problem, 4), 2, 1, problem);
  const double dt = 0.25;
  for (const auto a : {tp::Algorithm::Sequential1, tp::Algorithm::Sequential2,
                       tp::Algorithm::Parallel}) {
    const auto run = sim.run(config(a, dt)).trajectory;
    ASSERT_EQ(run.size(), 5u);
    const tp::State level1 = sim.coupled_step(run[0], dt);
    EXPECT_LT(state_distance(run[1], level1), 1e-11);
    tp::State prev = level1;
    tp::State older = run[0];
    for (int n = 2; n <= 4; ++n) {
      const double t = n * dt;
      std::vector<double> u, xi, p, T;
      if (a == tp::Algorithm::Sequential1) {
        std::tie(u, xi) = sim.elasticity_substep(prev.p, prev.T, t);
        std::tie(p, T) =
            sim.reaction_diffusion_substep(prev.p, prev.T, difference(xi, prev.xi), dt, t);
      } else {
        std::tie(p, T) =
            sim.reaction_diffusion_substep(prev.p, prev.T, difference(prev.xi, older.xi), dt, t);
        if (a == tp::Algorithm::Sequential2) {
          std::tie(u, xi) = sim.elasticity_substep(p, T, t);
        } else {
          std::tie(u, xi) = sim.elasticity_substep(prev.p, prev.T, t);
        }
      }
      tp::State next;
      next.u = u;
      next.xi = xi;
      next.p = p;
      next.T = T;
      EXPECT_LT(state_distance(run[n], next), 1e-11) << tp::algorithm_name(a) << " level " << n;
      EXPECT_DOUBLE_EQ(run[n].t, t);
      EXPECT_EQ(run[n].level, n);
      older = prev;
      prev = run[n];
    }
  }
}

TEST(Steppers, FirstSplitLevelIteratesToTheCoupledSolution) {
  const auto problem = tp::example1_problem(tp::baseline_parameters());
  tp::Simulation sim(tp::make_mesh(problem, 8), 2, 1, problem);
  const auto split = sim.run(config(tp::Algorithm::Parallel, 0.25));
  EXPECT_GT(split.first_level_iterations, 0);
  const auto coupled = sim.run(config(tp::Algorithm::Coupled, 0.25));
  EXPECT_EQ(coupled.first_level_iterations, 0);
  EXPECT_LT(state_distance(split.trajectory[1], coupled.trajectory[1]), 1e-11);

  // A single level is the coupled step itself.
  const auto one = sim.run(config(tp::Algorithm::Sequential1, 1.0));
  EXPECT_EQ(one.first_level_iterations, 0);
  EXPECT_LT(
      state_distance(one.final_state, sim.run(config(tp::Algorithm::Coupled, 1.0)).final_state),
      1e-13);
}

TEST(Steppers, LaggedSchemesIgnoreTheCurrentElasticitySolve) {
  const auto problem = tp::example1_problem(tp::baseline_parameters());
  tp::Simulation sim(tp::make_mesh(problem, 4), 2, 1, problem);
  const double dt = 0.125;
  for (const auto a : {tp::Algorithm::Sequential1, tp::Algorithm::Sequential2,
                       tp::Algorithm::Parallel}) {
    const auto clean = sim.run(config(a, dt)).trajectory;
    tp::RunHooks hooks;
    hooks.after_elasticity = [](int level, std::vector<double>&, std::vector<double>& xi) {
      if (level == 3) {
        for (double& v : xi) v += 1e-3;
      }
    };
    const auto poisoned = sim.run(config(a, dt), hooks).trajectory;
    const double same_level = oracle::max_abs_diff(clean[3].p, poisoned[3].p);
    const double next_level = oracle::max_abs_diff(clean[4].p, poisoned[4].p);
    if (a == tp::Algorithm::Sequential1) {
      EXPECT_GT(same_level, 1e-8);
    } else {
      EXPECT_EQ(same_level, 0.0) << tp::algorithm_name(a);
    }
    EXPECT_GT(next_level, 1e-8) << tp::algorithm_name(a);
  }
}

TEST(Steppers, ParallelWorkerCountDoesNotChangeResults) {
  const auto problem = tp::example1_problem(tp::baseline_parameters());
  tp::Simulation sim(tp::make_mesh(problem, 4), 2, 1, problem);
  auto c = config(tp::Algorithm::Parallel, 0.125, false);
  c.workers = 1;
  const auto serial = sim.run(c).final_state;
  c.workers = 2;
  const auto threaded = sim.run(c).final_state;
  EXPECT_EQ(serial.u, threaded.u);
  EXPECT_EQ(serial.xi, threaded.xi);
  EXPECT_EQ(serial.p, threaded.p);
  EXPECT_EQ(serial.T, threaded.T);
}

TEST(Steppers, SystemMatricesHaveTheirStructure) {
  const auto problem = tp::example1_problem(tp::baseline_parameters());
  tp::Simulation sim(tp::make_mesh(problem, 4), 3, 2, problem);
  const auto& spaces = sim.spaces();
  const auto& coupled = sim.coupled_matrix(0.25);
  EXPECT_EQ(coupled.rows(),
            spaces.displacement.size() + spaces.xi.size() + 2 * spaces.scalar.size());
  EXPECT_LT(coupled.asymmetry(), 1e-12);
  const auto& e = sim.elasticity_matrix();
  EXPECT_EQ(e.rows(), spaces.displacement.size() + spaces.xi.size());
  EXPECT_LT(e.asymmetry(), 1e-12);
  const auto& rd = sim.reaction_diffusion_matrix(0.25);
  EXPECT_EQ(rd.rows(), 2 * spaces.scalar.size());
  EXPECT_TRUE(oracle::dense_cholesky_ok(rd.to_dense(), static_cast<std::size_t>(rd.rows())));
  EXPECT_TRUE(sim.reaction_diffusion_is_spd(0.25));
}

TEST(Steppers, LoadExactnessValidation) {
  const auto problem = tp::example1_problem(tp::baseline_parameters());
  tp::Simulation sim(tp::make_mesh(problem, 2), 2, 1, problem);
  EXPECT_EQ(sim.load_exactness(), tp::kLoadExactness);
  sim.set_load_exactness(5);
  EXPECT_EQ(sim.load_exactness(), 5);
  EXPECT_THROW(sim.set_load_exactness(0), tp::InvalidInput);
  EXPECT_THROW(sim.set_load_exactness(11), tp::InvalidInput);
}

TEST(Steppers, ZeroDataStaysZero) {
  const auto problem = tp::zero_problem(tp::baseline_parameters());
  tp::Simulation sim(tp::make_mesh(problem, 3), 2, 1, problem);
  for (const auto a : tp::kAllAlgorithms) {
    const auto s = sim.run(config(a, 0.25, false)).final_state;
    for (const auto* v : {&s.u, &s.xi, &s.p, &s.T}) {
      for (double x : *v) EXPECT_EQ(x, 0.0);
    }
  }
}

TEST(Steppers, MeshMatchesRequestedDivisions) {
  const auto problem = tp::example1_problem(tp::baseline_parameters());
  const auto mesh = tp::make_mesh(problem, 12);
  EXPECT_EQ(mesh.divisions(), 12);
  EXPECT_EQ(mesh.triangle_count(), 2 * 12 * 12);
  EXPECT_THROW(tp::make_mesh(problem, 0), tp::InvalidInput);
}
