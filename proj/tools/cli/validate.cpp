#include "validate.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "thermoporo/analysis.hpp"
#include "thermoporo/assembly.hpp"
#include "thermoporo/quadrature.hpp"

namespace thermoporo::cli {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

CheckResult check(std::string name, bool ok, std::string detail) {
  return {std::move(name), ok ? CheckStatus::Pass : CheckStatus::Fail, std::move(detail)};
}

// Run a check body, turning exceptions into failures.
void guarded(std::vector<CheckResult>& out, const std::string& name,
             const std::function<CheckResult()>& body) {
  try {
    out.push_back(body());
  } catch (const std::exception& e) {
    out.push_back({name, CheckStatus::Fail, e.what()});
  }
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

TriMesh unit_mesh(int n) { return build_uniform_rect(n, n, {0.0, 0.0}, {1.0, 1.0}, all_clamped()); }

CheckResult quadrature_check() {
  double worst = 0.0;
  for (int e = 1; e <= kMaxQuadratureExactness; ++e) {
    const QuadratureRule rule = quadrature(e);
    for (int a = 0; a <= rule.exactness; ++a) {
      for (int b = 0; a + b <= rule.exactness; ++b) {
        double q = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) {
          q += rule.weights[i] * std::pow(rule.points[i].x, a) * std::pow(rule.points[i].y, b);
        }
        const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
        worst = std::max(worst, std::abs(q - exact) / exact);
      }
    }
  }
  return check("quadrature exactness", worst < 1e-12,
               "max relative monomial error " + sci(worst) + " for degrees <= exactness");
}

CheckResult mass_stiffness_check() {
  const TriMesh mesh = unit_mesh(3);
  double worst = 0.0;
  for (int degree = 1; degree <= 3; ++degree) {
    const DofMap space(mesh, SpaceKind::Scalar, degree);
    const SparseMatrix m = assemble_mass(mesh, space, space);
    const SparseMatrix k = assemble_stiffness(mesh, space, SPD2::isotropic(1.0));
    const std::vector<double> one(static_cast<std::size_t>(space.size()), 1.0);
    const auto x = space.interpolate([](Point2 p) { return p.x; });
    // 1' M 1 = |Omega|, K 1 = 0, x' K x = |grad x|^2 |Omega| = 1, x' M x = 1/3.
    worst = std::max(worst, std::abs(dot(one, m.multiply(one)) - 1.0));
    worst = std::max(worst, max_abs(k.multiply(one)));
    worst = std::max(worst, std::abs(dot(x, k.multiply(x)) - 1.0));
    worst = std::max(worst, std::abs(dot(x, m.multiply(x)) - 1.0 / 3.0));
  }
  return check("mass and stiffness oracles", worst < 1e-12,
               "P1-P3 integral identities, max deviation " + sci(worst));
}

CheckResult elasticity_kernel_check() {
  const TriMesh mesh = unit_mesh(3);
  double worst = 0.0;
  for (int degree = 2; degree <= 3; ++degree) {
    const DofMap v(mesh, SpaceKind::Vector, degree);
    const DofMap q(mesh, SpaceKind::Scalar, degree - 1);
    const SparseMatrix a = assemble_elasticity(mesh, v, 1.0);
    for (const auto& mode :
         {std::function<Vec2(Point2)>([](Point2) { return Vec2{1.0, 0.0}; }),
          std::function<Vec2(Point2)>([](Point2) { return Vec2{0.0, 1.0}; }),
          std::function<Vec2(Point2)>([](Point2 p) { return Vec2{-p.y, p.x}; })}) {
      worst = std::max(worst, max_abs(a.multiply(v.interpolate_vector(mode))));
    }
    // (div v, 1) = |Omega| for v = (x, 0).
    const SparseMatrix b = assemble_divergence(mesh, v, q);
    const auto stretch = v.interpolate_vector([](Point2 p) { return Vec2{p.x, 0.0}; });
    const std::vector<double> one(static_cast<std::size_t>(q.size()), 1.0);
    worst = std::max(worst, std::abs(dot(stretch, b.multiply(one)) - 1.0));
  }
  return check("elasticity and divergence oracles", worst < 1e-12,
               "rigid motions in the kernel, divergence identity, max deviation " + sci(worst));
}

ModelParams random_params(std::mt19937& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ModelParams p = ModelParams::from_young(0.1 + 10.0 * unit(rng), 0.05 + 0.44 * unit(rng));
  p.alpha = 0.01 + unit(rng);
  p.beta = 0.01 + unit(rng);
  p.b0 = unit(rng);
  p.a0 = p.b0 + 1e-3 + unit(rng);
  p.c0 = p.b0 + 1e-3 + unit(rng);
  p.K = SPD2::isotropic(1e-3 + unit(rng));
  p.Theta = SPD2::isotropic(1e-3 + unit(rng));
  return p;
}

CheckResult rd_spd_check() {
  std::mt19937 rng(20240611);
  int bad = 0;
  int factored = 0;
  constexpr int kDraws = 200;
  for (int i = 0; i < kDraws; ++i) {
    const ModelParams p = random_params(rng);
    if (!assumption_violations(p).empty()) continue;
    const Mat2 c = rd_coefficient_matrix(p);
    const bool spd = c[0][0] > 0.0 && c[0][0] * c[1][1] - c[0][1] * c[1][0] > 0.0;
    if (!spd) ++bad;
    if (i % 40 == 0) {
      Simulation sim(unit_mesh(2), 2, 1, zero_problem(p));
      if (!sim.reaction_diffusion_is_spd(0.1)) ++bad;
      ++factored;
    }
  }
  return check("reaction-diffusion SPD", bad == 0,
               std::to_string(kDraws) + " parameter draws, " + std::to_string(factored) +
                   " Cholesky factorizations, " + std::to_string(bad) + " failures");
}

CheckResult saddle_check() {
  double asym = 0.0;
  for (int n : {2, 4, 8}) {
    for (int k : {2, 3}) {
      Simulation sim(make_mesh(example1_problem(baseline_parameters()), n), k, k - 1,
                     example1_problem(baseline_parameters()));
      const SparseMatrix& a = sim.elasticity_matrix();  // factorization throws if singular
      asym = std::max(asym, a.asymmetry());
    }
  }
  return check("elasticity saddle matrix", asym < 1e-12,
               "symmetric (max asymmetry " + sci(asym) + ") and factorizable for n=2,4,8, k=2,3");
}

CheckResult patch_check() {
  double worst = 0.0;
  const ModelParams params = baseline_parameters();
  for (int k : {2, 3}) {
    const Problem problem = patch_problem(params, k, k - 1);
    Simulation sim(make_mesh(problem, 4), k, k - 1, problem);
    for (Algorithm a : kAllAlgorithms) {
      StepConfig cfg;
      cfg.dt = 0.25;
      cfg.algorithm = a;
      const RunResult r = sim.run(cfg);
      const auto e = error_report(r.final_state, *problem.exact, sim.spaces(), sim.mesh());
      for (double v : e.as_array()) worst = std::max(worst, v);
    }
  }
  return check("patch test", worst < 1e-9,
               "polynomial solution, all algorithms, max error " + sci(worst));
}

CheckResult equivalence_check() {
  ModelParams params = baseline_parameters();
  params.alpha = 0.0;
  params.beta = 0.0;
  const Problem problem = example1_problem(params);
  Simulation sim(make_mesh(problem, 4), 2, 1, problem);
  StepConfig cfg;
  cfg.dt = 0.25;
  cfg.keep_trajectory = true;
  const RunResult ref = sim.run(cfg);
  double worst = 0.0;
  for (Algorithm a : kAllAlgorithms) {
    cfg.algorithm = a;
    const RunResult r = sim.run(cfg);
    for (std::size_t n = 0; n < r.trajectory.size(); ++n) {
      const State& s = r.trajectory[n];
      const State& c = ref.trajectory[n];
      worst = std::max({worst, max_diff(s.u, c.u), max_diff(s.xi, c.xi), max_diff(s.p, c.p),
                        max_diff(s.T, c.T)});
    }
  }
  return check("decoupling equivalence", worst < 1e-10,
               "alpha=beta=0, every level, max coefficient difference " + sci(worst));
}

CheckResult lag_check() {
  const Problem problem = example1_problem(baseline_parameters());
  Simulation sim(make_mesh(problem, 4), 2, 1, problem);
  constexpr int kLevel = 3;
  std::string detail;
  bool ok = true;
  for (Algorithm a : {Algorithm::Sequential1, Algorithm::Sequential2, Algorithm::Parallel}) {
    StepConfig cfg;
    cfg.dt = 0.125;
    cfg.algorithm = a;
    cfg.keep_trajectory = true;
    const RunResult clean = sim.run(cfg);
    RunHooks hooks;
    hooks.after_elasticity = [](int level, std::vector<double>&, std::vector<double>& xi) {
      if (level == kLevel) {
        for (double& v : xi) v += 1e-3;
      }
    };
    const RunResult poisoned = sim.run(cfg, hooks);
    const double same_level = max_diff(clean.trajectory[kLevel].p, poisoned.trajectory[kLevel].p);
    const double next_level =
        max_diff(clean.trajectory[kLevel + 1].p, poisoned.trajectory[kLevel + 1].p);
    // Alg1 reads the fresh xi in the same level; Alg2 and Alg3 only in the next.
    const bool fresh = a == Algorithm::Sequential1;
    const bool pass = (fresh ? same_level > 0.0 : same_level == 0.0) && next_level > 0.0;
    ok = ok && pass;
    if (!detail.empty()) detail += "; ";
    detail += std::string(algorithm_name(a)) + " same-level " + sci(same_level) +
              " next-level " + sci(next_level);
  }
  return check("lag instrumentation", ok, detail);
}

std::vector<CheckResult> parameter_checks(const RunConfig& config) {
  std::vector<CheckResult> out;
  const ModelParams p = resolve_parameters(config);
  const auto violations = assumption_violations(p);
  if (violations.empty()) {
    out.push_back({"parameter assumptions", CheckStatus::Pass, "all hold"});
    return out;
  }
  for (const std::string& v : violations) {
    out.push_back({"parameter assumptions",
                   config.strict ? CheckStatus::Fail : CheckStatus::Warn, v});
  }
  return out;
}

}  // namespace

std::string_view status_label(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Warn: return "WARN";
    case CheckStatus::Fail: return "FAIL";
  }
  return "????";
}

std::vector<CheckResult> run_validation(const RunConfig& config) {
  std::vector<CheckResult> out;
  guarded(out, "quadrature exactness", quadrature_check);
  guarded(out, "mass and stiffness oracles", mass_stiffness_check);
  guarded(out, "elasticity and divergence oracles", elasticity_kernel_check);
  guarded(out, "reaction-diffusion SPD", rd_spd_check);
  guarded(out, "elasticity saddle matrix", saddle_check);
  guarded(out, "patch test", patch_check);
  guarded(out, "decoupling equivalence", equivalence_check);
  guarded(out, "lag instrumentation", lag_check);
  try {
    for (CheckResult& c : parameter_checks(config)) out.push_back(std::move(c));
  } catch (const std::exception& e) {
    out.push_back({"parameter assumptions", CheckStatus::Fail, e.what()});
  }
  return out;
}

}  // namespace thermoporo::cli
