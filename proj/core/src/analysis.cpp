#include "thermoporo/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "cell_tools.hpp"

namespace thermoporo {

namespace {

using detail::CellGeometry;
using detail::Tabulation;

}  // namespace

ErrorReport error_report(const State& state, const ExactSolution& exact, const Spaces& spaces,
                         const TriMesh& mesh, int exactness) {
  const QuadratureRule rule = quadrature(exactness);
  const Tabulation tu(spaces.displacement.element(), rule);
  const Tabulation tx(spaces.xi.element(), rule);
  const Tabulation tw(spaces.scalar.element(), rule);
  const Index su = spaces.displacement.scalar_size();
  const double t = state.t;

  double eu = 0.0;
  double ex = 0.0;
  double ep = 0.0;
  double eT = 0.0;
  std::vector<Vec2> grads_u(static_cast<std::size_t>(tu.n));
  std::vector<Vec2> grads_w(static_cast<std::size_t>(tw.n));
  for (Index cell = 0; cell < mesh.triangle_count(); ++cell) {
    const CellGeometry geo(mesh, cell);
    const auto du = spaces.displacement.cell_dofs(cell);
    const auto dx = spaces.xi.cell_dofs(cell);
    const auto dw = spaces.scalar.cell_dofs(cell);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double w = rule.weights[q] * std::abs(geo.det);
      const Point2 x = geo.map(rule.points[q]);

      Vec2 uh{0.0, 0.0};
      Mat2 guh{};
      for (int i = 0; i < tu.n; ++i) {
        const Vec2 g = geo.physical_gradient(tu.grad(q, i));
        for (int c = 0; c < 2; ++c) {
          const double coef = state.u[static_cast<std::size_t>(c * su + du[i])];
          uh[c] += coef * tu.value(q, i);
          guh[c][0] += coef * g[0];
          guh[c][1] += coef * g[1];
        }
      }
      const Vec2 ue = exact.u(x, t);
      const Mat2 gue = exact.grad_u(x, t);
      for (int c = 0; c < 2; ++c) {
        eu += w * std::pow(ue[c] - uh[c], 2);
        for (int d = 0; d < 2; ++d) eu += w * std::pow(gue[c][d] - guh[c][d], 2);
      }

      double xh = 0.0;
      for (int i = 0; i < tx.n; ++i)
        xh += state.xi[static_cast<std::size_t>(dx[i])] * tx.value(q, i);
      ex += w * std::pow(exact.xi(x, t) - xh, 2);

      double ph = 0.0;
      double Th = 0.0;
      Vec2 gph{0.0, 0.0};
      Vec2 gTh{0.0, 0.0};
      for (int i = 0; i < tw.n; ++i) {
        const Vec2 g = geo.physical_gradient(tw.grad(q, i));
        const double cp = state.p[static_cast<std::size_t>(dw[i])];
        const double cT = state.T[static_cast<std::size_t>(dw[i])];
        ph += cp * tw.value(q, i);
        Th += cT * tw.value(q, i);
        for (int d = 0; d < 2; ++d) {
          gph[d] += cp * g[d];
          gTh[d] += cT * g[d];
        }
      }
      const Vec2 gpe = exact.grad_p(x, t);
      const Vec2 gTe = exact.grad_T(x, t);
      ep += w * (std::pow(exact.p(x, t) - ph, 2) + std::pow(gpe[0] - gph[0], 2) +
                 std::pow(gpe[1] - gph[1], 2));
      eT += w * (std::pow(exact.T(x, t) - Th, 2) + std::pow(gTe[0] - gTh[0], 2) +
                 std::pow(gTe[1] - gTh[1], 2));
    }
  }
  return {t, std::sqrt(eu), std::sqrt(ex), std::sqrt(ep), std::sqrt(eT)};
}

std::optional<double> observed_rate(double e_coarse, double e_fine, double ratio) {
  if (!(e_coarse > 0.0) || !(e_fine > 0.0) || !(ratio > 1.0) || !std::isfinite(e_coarse) ||
      !std::isfinite(e_fine)) {
    return std::nullopt;
  }
  return std::log(e_coarse / e_fine) / std::log(ratio);
}

void compute_rates(std::vector<ConvergenceRow>& rows, RateBase base) {
  for (std::size_t r = 0; r < rows.size(); ++r) {
    rows[r].rates.fill(std::nullopt);
    if (r == 0) continue;
    const ConvergenceRow& prev = rows[r - 1];
    const double ratio = base == RateBase::MeshSize
                             ? static_cast<double>(rows[r].divisions) / prev.divisions
                             : prev.dt / rows[r].dt;
    const auto ec = prev.errors.as_array();
    const auto ef = rows[r].errors.as_array();
    for (std::size_t i = 0; i < 4; ++i) rows[r].rates[i] = observed_rate(ec[i], ef[i], ratio);
  }
}

std::vector<ConvergenceTable> convergence_study(const Problem& problem,
                                                const ConvergenceSchedule& schedule,
                                                const std::vector<Algorithm>& algorithms, int k,
                                                int l, int workers) {
  if (!problem.exact) throw InvalidInput("convergence study needs a closed-form solution");
  if (schedule.levels.empty()) throw InvalidInput("empty refinement schedule");
  std::vector<ConvergenceTable> tables;
  for (Algorithm a : algorithms) tables.push_back({a, {}});

  for (const RefinementLevel& level : schedule.levels) {
    Simulation sim(make_mesh(problem, level.divisions), k, l, problem);
    sim.set_load_exactness(schedule.load_exactness);
    for (ConvergenceTable& table : tables) {
      StepConfig cfg;
      cfg.dt = level.dt;
      cfg.tau = schedule.tau;
      cfg.algorithm = table.algorithm;
      cfg.workers = workers;
      const RunResult run = sim.run(cfg);
      ConvergenceRow row;
      row.divisions = level.divisions;
      row.h = 1.0 / level.divisions;
      row.dt = level.dt;
      row.errors = error_report(run.final_state, *problem.exact, sim.spaces(), sim.mesh(),
                                schedule.error_exactness);
      table.rows.push_back(row);
    }
  }
  for (ConvergenceTable& table : tables) compute_rates(table.rows, schedule.base);
  return tables;
}

std::vector<TimingReport> benchmark(const Problem& problem,
                                    const std::vector<Algorithm>& algorithms,
                                    const BenchmarkConfig& config) {
  if (config.repetitions < 1) throw InvalidInput("repetitions must be at least 1");
  std::vector<TimingReport> reports;
  std::vector<std::vector<PhaseTimings>> phases(algorithms.size());
  for (Algorithm a : algorithms) reports.push_back({a, 0.0, {}, {}, std::nullopt});

  for (int rep = 0; rep < config.repetitions; ++rep) {
    for (std::size_t i = 0; i < algorithms.size(); ++i) {
      const auto start = std::chrono::steady_clock::now();
      Simulation sim(make_mesh(problem, config.divisions), config.k, config.l, problem);
      StepConfig cfg;
      cfg.dt = config.dt;
      cfg.tau = config.tau;
      cfg.algorithm = algorithms[i];
      cfg.workers = config.workers;
      const RunResult run = sim.run(cfg);
      const double elapsed =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      reports[i].samples.push_back(elapsed);
      phases[i].push_back(run.timings);
      if (rep == 0 && problem.exact) {
        reports[i].errors = error_report(run.final_state, *problem.exact, sim.spaces(), sim.mesh());
      }
    }
  }
  for (std::size_t i = 0; i < reports.size(); ++i) {
    std::vector<std::size_t> order(reports[i].samples.size());
    for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return reports[i].samples[a] < reports[i].samples[b];
    });
    const std::size_t mid = order[order.size() / 2];
    reports[i].median_seconds = reports[i].samples[mid];
    reports[i].phases = phases[i][mid];
  }
  return reports;
}

}  // namespace thermoporo
