#include "thermoporo/steppers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <optional>
#include <string>

namespace thermoporo {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

class ScopedTimer {
 public:
  explicit ScopedTimer(double* sink) : sink_(sink), start_(Clock::now()) {}
  ~ScopedTimer() {
    if (sink_ != nullptr) *sink_ += seconds_since(start_);
  }
  ScopedTimer(const ScopedTimer&) = delete;
  ScopedTimer& operator=(const ScopedTimer&) = delete;

 private:
  double* sink_;
  Clock::time_point start_;
};

double* slot(PhaseTimings* timings, double PhaseTimings::*member) {
  return timings != nullptr ? &(timings->*member) : nullptr;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

std::vector<double> difference(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

std::vector<Index> shifted(const std::vector<Index>& dofs, Index offset) {
  std::vector<Index> out(dofs.size());
  for (std::size_t i = 0; i < dofs.size(); ++i) out[i] = dofs[i] + offset;
  return out;
}

// A^T x without forming the transpose.
std::vector<double> transpose_multiply(const SparseMatrix& a, std::span<const double> x) {
  std::vector<double> y(static_cast<std::size_t>(a.cols()), 0.0);
  const auto& off = a.row_offsets();
  for (Index row = 0; row < a.rows(); ++row) {
    const double d = x[static_cast<std::size_t>(row)];
    if (d == 0.0) continue;
    for (Index k = off[row]; k < off[row + 1]; ++k) {
      y[static_cast<std::size_t>(a.col_indices()[k])] += a.values()[k] * d;
    }
  }
  return y;
}

bool same_step(double a, double b) { return std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(a)); }

}  // namespace

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Coupled: return "coupled";
    case Algorithm::Sequential1: return "alg1";
    case Algorithm::Sequential2: return "alg2";
    case Algorithm::Parallel: return "alg3";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "coupled" || s == "monolithic") return Algorithm::Coupled;
  if (s == "alg1" || s == "algorithm1" || s == "sequential1") return Algorithm::Sequential1;
  if (s == "alg2" || s == "algorithm2" || s == "sequential2") return Algorithm::Sequential2;
  if (s == "alg3" || s == "algorithm3" || s == "parallel") return Algorithm::Parallel;
  throw InvalidInput("unknown algorithm '" + std::string(text) +
                     "' (expected coupled, alg1, alg2 or alg3)");
}

int StepConfig::steps() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("time step must be positive");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidInput("final time must be positive");
  const double ratio = tau / dt;
  const double n = std::round(ratio);
  if (n < 1.0 || std::abs(ratio - n) > 1e-12 * std::max(1.0, ratio)) {
    throw InvalidInput("final time " + std::to_string(tau) +
                       " is not an integer multiple of the time step " + std::to_string(dt));
  }
  if (workers < 1) throw InvalidInput("worker count must be at least 1");
  return static_cast<int>(n);
}

struct Simulation::Systems {
  std::optional<double> coupled_dt;
  std::optional<DirichletConstraint> coupled;
  std::optional<Factorization> coupled_factor;

  std::optional<DirichletConstraint> elasticity;
  std::optional<Factorization> elasticity_factor;

  std::optional<double> rd_dt;
  std::optional<DirichletConstraint> rd;
  std::optional<Factorization> rd_factor;
  bool rd_spd = false;
};

TriMesh make_mesh(const Problem& problem, int divisions) {
  if (divisions < 1) throw InvalidInput("mesh divisions must be positive");
  int coarse = divisions;
  int refinements = 0;
  while (coarse % 2 == 0) {
    coarse /= 2;
    ++refinements;
  }
  TriMesh mesh = build_uniform_rect(coarse, coarse, problem.lo, problem.hi, problem.tags);
  for (int r = 0; r < refinements; ++r) mesh = refine_regular(mesh);
  return mesh;
}

Simulation::Simulation(TriMesh mesh, int k, int l, Problem problem)
    : mesh_(std::move(mesh)),
      spaces_(build_spaces(mesh_, k, l)),
      problem_(std::move(problem)),
      forms_(assemble_forms(mesh_, spaces_, problem_.params)),
      u_dirichlet_(boundary_dofs(spaces_.displacement, mesh_,
                                 BoundarySelector::tagged(BoundaryTag::GammaD))),
      w_dirichlet_(boundary_dofs(spaces_.scalar, mesh_, BoundarySelector::whole())),
      systems_(std::make_unique<Systems>()) {
  if (!(problem_.params.lambda > 0.0)) throw InvalidInput("lambda must be positive");
}

void Simulation::set_load_exactness(int exactness) {
  if (exactness < 1 || exactness > 10)
    throw InvalidInput("load quadrature exactness must be in 1..10");
  load_exactness_ = exactness;
}

Simulation::~Simulation() = default;

State Simulation::initial_state() const {
  const InitialData& init = problem_.initial;
  State s;
  s.t = 0.0;
  s.level = 0;
  const auto zero_vec = [](Point2) { return Vec2{0.0, 0.0}; };
  const auto zero = [](Point2) { return 0.0; };
  s.u = init.u ? spaces_.displacement.interpolate_vector(init.u)
               : spaces_.displacement.interpolate_vector(zero_vec);
  s.p = init.p ? spaces_.scalar.interpolate(init.p) : spaces_.scalar.interpolate(zero);
  s.T = init.T ? spaces_.scalar.interpolate(init.T) : spaces_.scalar.interpolate(zero);
  s.xi = init.xi ? spaces_.xi.interpolate(init.xi) : spaces_.xi.interpolate(zero);
  s.xi_prev = s.xi;
  return s;
}

std::vector<double> Simulation::displacement_load(double t) const {
  std::vector<double> f =
      problem_.sources.f
          ? assemble_load(mesh_, spaces_.displacement, problem_.sources.f, t, load_exactness_)
          : std::vector<double>(static_cast<std::size_t>(spaces_.displacement.size()));
  if (problem_.traction) {
    const auto tr = assemble_neumann_traction(mesh_, spaces_.displacement, problem_.traction, t);
    axpy(1.0, tr, f);
  }
  return f;
}

std::vector<double> Simulation::dirichlet_values(const std::vector<Index>& dofs,
                                                 const DofMap& space, const VectorField& fn,
                                                 double t) const {
  if (!fn) return {};
  std::vector<double> out(dofs.size());
  const Index n = space.scalar_size();
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    const int comp = dofs[i] >= n ? 1 : 0;
    const Vec2 v = fn(space.coordinates()[static_cast<std::size_t>(dofs[i] - comp * n)], t);
    out[i] = v[static_cast<std::size_t>(comp)];
  }
  return out;
}

std::vector<double> Simulation::dirichlet_values(const std::vector<Index>& dofs,
                                                 const DofMap& space, const ScalarField& fn,
                                                 double t) const {
  if (!fn) return {};
  std::vector<double> out(dofs.size());
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    out[i] = fn(space.coordinates()[static_cast<std::size_t>(dofs[i])], t);
  }
  return out;
}

void Simulation::ensure_elasticity() {
  Systems& sys = *systems_;
  if (sys.elasticity_factor) return;
  const ModelParams& prm = problem_.params;
  const Index nu = spaces_.displacement.size();
  const Index nx = spaces_.xi.size();
  std::vector<Triplet> t;
  forms_.elasticity.append_triplets(t, 0, 0);
  forms_.divergence.append_triplets(t, 0, nu, -1.0);
  forms_.divergence.append_triplets(t, nu, 0, -1.0, true);
  forms_.mass_xi.append_triplets(t, nu, nu, -1.0 / prm.lambda);
  const SparseMatrix a = SparseMatrix::from_triplets(nu + nx, nu + nx, t);
  sys.elasticity.emplace(a, u_dirichlet_);
  sys.elasticity_factor.emplace(sys.elasticity->matrix(), MatrixStructure::SymmetricIndefinite,
                                "elasticity");
}

void Simulation::ensure_reaction_diffusion(double dt) {
  Systems& sys = *systems_;
  if (sys.rd_factor && same_step(*sys.rd_dt, dt)) return;
  const ModelParams& prm = problem_.params;
  const Index nw = spaces_.scalar.size();
  std::vector<Triplet> t;
  forms_.mass_scalar.append_triplets(t, 0, 0, prm.storage_pp());
  forms_.stiffness_p.append_triplets(t, 0, 0, dt);
  forms_.mass_scalar.append_triplets(t, 0, nw, prm.storage_pt());
  forms_.mass_scalar.append_triplets(t, nw, 0, prm.storage_pt());
  forms_.mass_scalar.append_triplets(t, nw, nw, prm.storage_tt());
  forms_.stiffness_T.append_triplets(t, nw, nw, dt);
  const SparseMatrix a = SparseMatrix::from_triplets(2 * nw, 2 * nw, t);
  std::vector<Index> dofs = w_dirichlet_;
  const auto second = shifted(w_dirichlet_, nw);
  dofs.insert(dofs.end(), second.begin(), second.end());
  sys.rd.emplace(a, std::move(dofs));
  sys.rd_factor.reset();
  sys.rd_dt = dt;
  try {
    sys.rd_factor.emplace(sys.rd->matrix(), MatrixStructure::SymmetricPositiveDefinite,
                          "reaction-diffusion");
    sys.rd_spd = true;
  } catch (const NumericalFailure&) {
    // Not SPD (assumptions violated): fall back to a general factorization.
    sys.rd_spd = false;
    sys.rd_factor.emplace(sys.rd->matrix(), MatrixStructure::General, "reaction-diffusion");
  }
}

void Simulation::ensure_coupled_system(double dt) {
  Systems& sys = *systems_;
  if (sys.coupled && same_step(*sys.coupled_dt, dt)) return;
  const ModelParams& prm = problem_.params;
  const Index nu = spaces_.displacement.size();
  const Index nx = spaces_.xi.size();
  const Index nw = spaces_.scalar.size();
  const Index op = nu + nx;
  const Index ot = op + nw;
  std::vector<Triplet> t;
  forms_.elasticity.append_triplets(t, 0, 0);
  forms_.divergence.append_triplets(t, 0, nu, -1.0);
  forms_.divergence.append_triplets(t, nu, 0, -1.0, true);
  forms_.mass_xi.append_triplets(t, nu, nu, -1.0 / prm.lambda);
  // xi rows couple to p and T; the p and T rows are negated so the matrix stays symmetric.
  const double ca = prm.alpha / prm.lambda;
  const double cb = prm.beta / prm.lambda;
  forms_.mass_xi_scalar.append_triplets(t, nu, op, ca);
  forms_.mass_xi_scalar.append_triplets(t, nu, ot, cb);
  forms_.mass_xi_scalar.append_triplets(t, op, nu, ca, true);
  forms_.mass_xi_scalar.append_triplets(t, ot, nu, cb, true);
  forms_.mass_scalar.append_triplets(t, op, op, -prm.storage_pp());
  forms_.stiffness_p.append_triplets(t, op, op, -dt);
  forms_.mass_scalar.append_triplets(t, op, ot, -prm.storage_pt());
  forms_.mass_scalar.append_triplets(t, ot, op, -prm.storage_pt());
  forms_.mass_scalar.append_triplets(t, ot, ot, -prm.storage_tt());
  forms_.stiffness_T.append_triplets(t, ot, ot, -dt);
  const Index n = ot + nw;
  const SparseMatrix a = SparseMatrix::from_triplets(n, n, t);
  std::vector<Index> dofs = u_dirichlet_;
  for (Index off : {op, ot}) {
    const auto s = shifted(w_dirichlet_, off);
    dofs.insert(dofs.end(), s.begin(), s.end());
  }
  sys.coupled.emplace(a, std::move(dofs));
  sys.coupled_factor.reset();
  sys.coupled_dt = dt;
}

void Simulation::ensure_coupled(double dt) {
  ensure_coupled_system(dt);
  Systems& sys = *systems_;
  if (sys.coupled_factor) return;
  sys.coupled_factor.emplace(sys.coupled->matrix(), MatrixStructure::SymmetricIndefinite,
                             "coupled");
}

const SparseMatrix& Simulation::coupled_matrix(double dt) {
  ensure_coupled_system(dt);
  return systems_->coupled->matrix();
}

const SparseMatrix& Simulation::elasticity_matrix() {
  ensure_elasticity();
  return systems_->elasticity->matrix();
}

const SparseMatrix& Simulation::reaction_diffusion_matrix(double dt) {
  ensure_reaction_diffusion(dt);
  return systems_->rd->matrix();
}

bool Simulation::reaction_diffusion_is_spd(double dt) {
  ensure_reaction_diffusion(dt);
  return systems_->rd_spd;
}

std::vector<double> Simulation::coupled_rhs(const State& prev, double dt,
                                            PhaseTimings* timings) const {
  const Systems& sys = *systems_;
  const ModelParams& prm = problem_.params;
  const Index nu = spaces_.displacement.size();
  const Index nx = spaces_.xi.size();
  const Index nw = spaces_.scalar.size();
  const auto unw = static_cast<std::size_t>(nw);
  const double t_new = prev.t + dt;
  const double ca = prm.alpha / prm.lambda;
  const double cb = prm.beta / prm.lambda;

  std::vector<double> rhs(static_cast<std::size_t>(nu + nx + 2 * nw));
  {
    ScopedTimer timer(slot(timings, &PhaseTimings::rhs));
    const auto f = displacement_load(t_new);
    std::copy(f.begin(), f.end(), rhs.begin());
    std::span<double> rp(rhs.data() + nu + nx, unw);
    std::span<double> rT(rhs.data() + nu + nx + nw, unw);
    if (problem_.sources.g) {
      axpy(-dt, assemble_load(mesh_, spaces_.scalar, problem_.sources.g, t_new, load_exactness_),
           rp);
    }
    if (problem_.sources.heat) {
      axpy(-dt, assemble_load(mesh_, spaces_.scalar, problem_.sources.heat, t_new, load_exactness_),
           rT);
    }
    const auto mp = forms_.mass_scalar.multiply(prev.p);
    const auto mT = forms_.mass_scalar.multiply(prev.T);
    const auto wx = transpose_multiply(forms_.mass_xi_scalar, prev.xi);
    axpy(-prm.storage_pp(), mp, rp);
    axpy(-prm.storage_pt(), mT, rp);
    axpy(ca, wx, rp);
    axpy(-prm.storage_tt(), mT, rT);
    axpy(-prm.storage_pt(), mp, rT);
    axpy(cb, wx, rT);

    std::vector<double> values;
    const BoundaryData& bd = problem_.boundary;
    if (bd.u || bd.p || bd.T) {
      values = dirichlet_values(u_dirichlet_, spaces_.displacement, bd.u, t_new);
      values.resize(u_dirichlet_.size(), 0.0);
      auto vp = dirichlet_values(w_dirichlet_, spaces_.scalar, bd.p, t_new);
      vp.resize(w_dirichlet_.size(), 0.0);
      auto vT = dirichlet_values(w_dirichlet_, spaces_.scalar, bd.T, t_new);
      vT.resize(w_dirichlet_.size(), 0.0);
      values.insert(values.end(), vp.begin(), vp.end());
      values.insert(values.end(), vT.begin(), vT.end());
    }
    sys.coupled->apply(rhs, values);
  }
  return rhs;
}

State Simulation::unpack_coupled(std::span<const double> x, const State& prev, double dt) const {
  const Index nu = spaces_.displacement.size();
  const Index nx = spaces_.xi.size();
  const Index nw = spaces_.scalar.size();
  State next;
  next.t = prev.t + dt;
  next.level = prev.level + 1;
  next.u.assign(x.begin(), x.begin() + nu);
  next.xi.assign(x.begin() + nu, x.begin() + nu + nx);
  next.p.assign(x.begin() + nu + nx, x.begin() + nu + nx + nw);
  next.T.assign(x.begin() + nu + nx + nw, x.end());
  next.xi_prev = prev.xi;
  return next;
}

State Simulation::solve_coupled(const State& prev, double dt, PhaseTimings* timings) const {
  const auto rhs = coupled_rhs(prev, dt, timings);
  ScopedTimer timer(slot(timings, &PhaseTimings::solve_coupled));
  return unpack_coupled(systems_->coupled_factor->solve(rhs), prev, dt);
}

std::optional<State> Simulation::iterate_coupled(const State& prev, double dt,
                                                 PhaseTimings* timings, int* iterations) const {
  const Systems& sys = *systems_;
  const auto rhs = coupled_rhs(prev, dt, timings);
  ScopedTimer timer(slot(timings, &PhaseTimings::solve_coupled));
  const SparseMatrix& k = sys.coupled->matrix();
  const auto ne = static_cast<std::size_t>(sys.elasticity->matrix().rows());
  const std::size_t n = rhs.size();
  std::vector<Index> rd_fixed;
  for (Index d : sys.rd->dofs()) rd_fixed.push_back(d);

  // Block lower-triangular preconditioner: elasticity first, then the
  // reaction-diffusion block (stored with the opposite sign) on the
  // remainder. Constrained rows carry a unit diagonal in both systems.
  std::vector<double> lower(n);
  const LinearOperator preconditioner = [&](std::span<const double> r, std::span<double> y) {
    const auto ye = sys.elasticity_factor->solve(r.first(ne));
    std::fill(y.begin(), y.end(), 0.0);
    std::copy(ye.begin(), ye.end(), y.begin());
    k.multiply(y, lower);
    std::vector<double> rest(n - ne);
    for (std::size_t i = 0; i < rest.size(); ++i) rest[i] = r[ne + i] - lower[ne + i];
    const auto yr = sys.rd_factor->solve(rest);
    for (std::size_t i = 0; i < rest.size(); ++i) y[ne + i] = -yr[i];
    for (Index d : rd_fixed)
      y[ne + static_cast<std::size_t>(d)] = rest[static_cast<std::size_t>(d)];
  };
  const LinearOperator op = [&](std::span<const double> x, std::span<double> y) {
    k.multiply(x, y);
  };
  std::vector<double> x(n, 0.0);
  const KrylovReport report =
      gmres(op, preconditioner, rhs, x, kCoupledIterationTolerance, kCoupledIterationLimit);
  if (!report.converged) return std::nullopt;
  *iterations = report.iterations;
  return unpack_coupled(x, prev, dt);
}

std::pair<std::vector<double>, std::vector<double>> Simulation::solve_elasticity(
    std::span<const double> p_in, std::span<const double> T_in, double t_new,
    PhaseTimings* timings) const {
  const Systems& sys = *systems_;
  const ModelParams& prm = problem_.params;
  const Index nu = spaces_.displacement.size();
  const Index nx = spaces_.xi.size();
  std::vector<double> rhs(static_cast<std::size_t>(nu + nx));
  {
    ScopedTimer timer(slot(timings, &PhaseTimings::rhs));
    const auto f = displacement_load(t_new);
    std::copy(f.begin(), f.end(), rhs.begin());
    std::span<double> rx(rhs.data() + nu, static_cast<std::size_t>(nx));
    forms_.mass_xi_scalar.multiply_add(-prm.alpha / prm.lambda, p_in, rx);
    forms_.mass_xi_scalar.multiply_add(-prm.beta / prm.lambda, T_in, rx);
    const auto values =
        dirichlet_values(u_dirichlet_, spaces_.displacement, problem_.boundary.u, t_new);
    sys.elasticity->apply(rhs, values);
  }
  std::vector<double> x;
  {
    ScopedTimer timer(slot(timings, &PhaseTimings::solve_elasticity));
    x = sys.elasticity_factor->solve(rhs);
  }
  return {std::vector<double>(x.begin(), x.begin() + nu),
          std::vector<double>(x.begin() + nu, x.end())};
}

std::pair<std::vector<double>, std::vector<double>> Simulation::solve_reaction_diffusion(
    std::span<const double> p_n, std::span<const double> T_n, std::span<const double> xi_diff,
    double t_new, PhaseTimings* timings) const {
  const Systems& sys = *systems_;
  const ModelParams& prm = problem_.params;
  const double dt = *sys.rd_dt;
  const Index nw = spaces_.scalar.size();
  const auto unw = static_cast<std::size_t>(nw);
  std::vector<double> rhs(2 * unw);
  {
    ScopedTimer timer(slot(timings, &PhaseTimings::rhs));
    std::span<double> rp(rhs.data(), unw);
    std::span<double> rT(rhs.data() + nw, unw);
    if (problem_.sources.g) {
      axpy(dt, assemble_load(mesh_, spaces_.scalar, problem_.sources.g, t_new, load_exactness_),
           rp);
    }
    if (problem_.sources.heat) {
      axpy(dt, assemble_load(mesh_, spaces_.scalar, problem_.sources.heat, t_new, load_exactness_),
           rT);
    }
    const auto mp = forms_.mass_scalar.multiply(p_n);
    const auto mT = forms_.mass_scalar.multiply(T_n);
    const auto wx = transpose_multiply(forms_.mass_xi_scalar, xi_diff);
    axpy(prm.storage_pp(), mp, rp);
    axpy(prm.storage_pt(), mT, rp);
    axpy(prm.alpha / prm.lambda, wx, rp);
    axpy(prm.storage_tt(), mT, rT);
    axpy(prm.storage_pt(), mp, rT);
    axpy(prm.beta / prm.lambda, wx, rT);

    std::vector<double> values;
    const BoundaryData& bd = problem_.boundary;
    if (bd.p || bd.T) {
      values = dirichlet_values(w_dirichlet_, spaces_.scalar, bd.p, t_new);
      values.resize(w_dirichlet_.size(), 0.0);
      auto vT = dirichlet_values(w_dirichlet_, spaces_.scalar, bd.T, t_new);
      vT.resize(w_dirichlet_.size(), 0.0);
      values.insert(values.end(), vT.begin(), vT.end());
    }
    sys.rd->apply(rhs, values);
  }
  std::vector<double> x;
  {
    ScopedTimer timer(slot(timings, &PhaseTimings::solve_rd));
    x = sys.rd_factor->solve(rhs);
  }
  return {std::vector<double>(x.begin(), x.begin() + nw),
          std::vector<double>(x.begin() + nw, x.end())};
}

State Simulation::coupled_step(const State& prev, double dt) {
  ensure_coupled(dt);
  return solve_coupled(prev, dt, nullptr);
}

std::pair<std::vector<double>, std::vector<double>> Simulation::elasticity_substep(
    std::span<const double> p_in, std::span<const double> T_in, double t_new) {
  ensure_elasticity();
  return solve_elasticity(p_in, T_in, t_new, nullptr);
}

std::pair<std::vector<double>, std::vector<double>> Simulation::reaction_diffusion_substep(
    std::span<const double> p_n, std::span<const double> T_n, std::span<const double> xi_diff,
    double dt, double t_new) {
  ensure_reaction_diffusion(dt);
  return solve_reaction_diffusion(p_n, T_n, xi_diff, t_new, nullptr);
}

RunResult Simulation::run(const StepConfig& config, const RunHooks& hooks) {
  const int steps = config.steps();
  const double dt = config.dt;
  const Clock::time_point start = Clock::now();
  RunResult result;
  PhaseTimings& tm = result.timings;

  // The split schemes take their coupled first level by an iteration built
  // on their own two factorizations, so they never factor the coupled matrix
  // unless that iteration fails.
  const bool split = config.algorithm != Algorithm::Coupled && steps > 1;
  {
    ScopedTimer timer(&tm.setup);
    if (split) {
      ensure_coupled_system(dt);
      ensure_elasticity();
      ensure_reaction_diffusion(dt);
    } else {
      ensure_coupled(dt);
    }
  }

  State state = initial_state();
  if (config.keep_trajectory) result.trajectory.push_back(state);

  const auto fail = [](int level, const std::exception& e) -> NumericalFailure {
    return NumericalFailure("level " + std::to_string(level) + ": " + e.what());
  };

  const auto record = [&](State next) {
    state = std::move(next);
    if (config.keep_trajectory) result.trajectory.push_back(state);
  };

  try {
    std::optional<State> first;
    if (split) first = iterate_coupled(state, dt, &tm, &result.first_level_iterations);
    if (!first) {
      ScopedTimer timer(&tm.setup);
      ensure_coupled(dt);
    }
    record(first ? std::move(*first) : solve_coupled(state, dt, &tm));
  } catch (const NumericalFailure& e) {
    throw fail(1, e);
  }

  for (int level = 2; level <= steps; ++level) {
    const double t_new = dt * level;
    State next;
    next.t = t_new;
    next.level = level;
    try {
      switch (config.algorithm) {
        case Algorithm::Coupled:
          next = solve_coupled(state, dt, &tm);
          next.t = t_new;
          break;
        case Algorithm::Sequential1: {
          auto [u, xi] = solve_elasticity(state.p, state.T, t_new, &tm);
          if (hooks.after_elasticity) hooks.after_elasticity(level, u, xi);
          const auto diff = difference(xi, state.xi);
          auto [p, T] = solve_reaction_diffusion(state.p, state.T, diff, t_new, &tm);
          next.u = std::move(u);
          next.xi = std::move(xi);
          next.p = std::move(p);
          next.T = std::move(T);
          break;
        }
        case Algorithm::Sequential2: {
          const auto diff = difference(state.xi, state.xi_prev);
          auto [p, T] = solve_reaction_diffusion(state.p, state.T, diff, t_new, &tm);
          auto [u, xi] = solve_elasticity(p, T, t_new, &tm);
          if (hooks.after_elasticity) hooks.after_elasticity(level, u, xi);
          next.u = std::move(u);
          next.xi = std::move(xi);
          next.p = std::move(p);
          next.T = std::move(T);
          break;
        }
        case Algorithm::Parallel: {
          const auto diff = difference(state.xi, state.xi_prev);
          PhaseTimings elastic_tm;
          auto elastic_task = [&]() {
            auto r = solve_elasticity(state.p, state.T, t_new, &elastic_tm);
            if (hooks.after_elasticity) hooks.after_elasticity(level, r.first, r.second);
            return r;
          };
          std::pair<std::vector<double>, std::vector<double>> ux;
          std::pair<std::vector<double>, std::vector<double>> pT;
          if (config.workers >= 2) {
            auto future = std::async(std::launch::async, elastic_task);
            pT = solve_reaction_diffusion(state.p, state.T, diff, t_new, &tm);
            const Clock::time_point wait = Clock::now();
            ux = future.get();
            tm.join += seconds_since(wait);
          } else {
            ux = elastic_task();
            pT = solve_reaction_diffusion(state.p, state.T, diff, t_new, &tm);
          }
          tm.rhs += elastic_tm.rhs;
          tm.solve_elasticity += elastic_tm.solve_elasticity;
          next.u = std::move(ux.first);
          next.xi = std::move(ux.second);
          next.p = std::move(pT.first);
          next.T = std::move(pT.second);
          break;
        }
      }
    } catch (const NumericalFailure& e) {
      throw fail(level, e);
    }
    next.xi_prev = state.xi;
    record(std::move(next));
  }

  tm.total = seconds_since(start);
  result.final_state = state;
  return result;
}

}  // namespace thermoporo
