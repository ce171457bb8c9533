#include <benchmark/benchmark.h>

#include "thermoporo/assembly.hpp"
#include "thermoporo/model.hpp"
#include "thermoporo/sparse.hpp"
#include "thermoporo/steppers.hpp"

namespace tp = thermoporo;

namespace {

tp::Problem baseline() { return tp::example1_problem(tp::baseline_parameters()); }

void BM_AssembleForms(benchmark::State& state) {
  const auto problem = baseline();
  const auto mesh = tp::make_mesh(problem, static_cast<int>(state.range(0)));
  const auto spaces = tp::build_spaces(mesh, 2, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tp::assemble_forms(mesh, spaces, problem.params));
  }
}
BENCHMARK(BM_AssembleForms)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_FactorElasticity(benchmark::State& state) {
  const auto problem = baseline();
  tp::Simulation sim(tp::make_mesh(problem, static_cast<int>(state.range(0))), 2, 1, problem);
  const auto& a = sim.elasticity_matrix();
  for (auto _ : state) {
    tp::Factorization f(a, tp::MatrixStructure::SymmetricIndefinite, "elasticity");
    benchmark::DoNotOptimize(f.size());
  }
}
BENCHMARK(BM_FactorElasticity)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_FactorReactionDiffusion(benchmark::State& state) {
  const auto problem = baseline();
  tp::Simulation sim(tp::make_mesh(problem, static_cast<int>(state.range(0))), 2, 1, problem);
  const auto& a = sim.reaction_diffusion_matrix(1.0 / 16);
  for (auto _ : state) {
    tp::Factorization f(a, tp::MatrixStructure::SymmetricPositiveDefinite, "reaction-diffusion");
    benchmark::DoNotOptimize(f.size());
  }
}
BENCHMARK(BM_FactorReactionDiffusion)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_FactorCoupled(benchmark::State& state) {
  const auto problem = baseline();
  tp::Simulation sim(tp::make_mesh(problem, static_cast<int>(state.range(0))), 2, 1, problem);
  const auto& a = sim.coupled_matrix(1.0 / 16);
  for (auto _ : state) {
    tp::Factorization f(a, tp::MatrixStructure::SymmetricIndefinite, "coupled");
    benchmark::DoNotOptimize(f.size());
  }
}
BENCHMARK(BM_FactorCoupled)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

// Full run to tau = 1 with dt = 1/16 on a 16 x 16 mesh; setup included.
void BM_Run(benchmark::State& state) {
  const auto problem = baseline();
  const auto algorithm = tp::kAllAlgorithms[state.range(0)];
  state.SetLabel(std::string(tp::algorithm_name(algorithm)));
  for (auto _ : state) {
    tp::Simulation sim(tp::make_mesh(problem, 16), 2, 1, problem);
    tp::StepConfig c;
    c.dt = 1.0 / 16;
    c.algorithm = algorithm;
    benchmark::DoNotOptimize(sim.run(c).final_state.t);
  }
}
BENCHMARK(BM_Run)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
