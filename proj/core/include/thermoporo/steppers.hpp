#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "thermoporo/assembly.hpp"
#include "thermoporo/dofmap.hpp"
#include "thermoporo/mesh.hpp"
#include "thermoporo/model.hpp"
#include "thermoporo/sparse.hpp"

namespace thermoporo {

/// Coefficient vectors of all four fields at one time level, plus the
/// pseudo-total pressure of the previous level needed by the lagged schemes.
struct State {
  double t = 0.0;
  int level = 0;
  std::vector<double> u;
  std::vector<double> xi;
  std::vector<double> p;
  std::vector<double> T;
  std::vector<double> xi_prev;
};

enum class Algorithm {
  Coupled,     ///< monolithic backward Euler at every level
  Sequential1, ///< elasticity, then reaction-diffusion with the fresh xi difference
  Sequential2, ///< reaction-diffusion with the lagged xi difference, then elasticity
  Parallel,    ///< both subproblems concurrently from level-n data
};

std::string_view algorithm_name(Algorithm a);
/// Accepts coupled, alg1, alg2, alg3 (and the long names); throws InvalidInput.
Algorithm parse_algorithm(std::string_view text);
inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::Coupled, Algorithm::Sequential1,
                                               Algorithm::Sequential2, Algorithm::Parallel};

struct StepConfig {
  double dt = 0.25;
  double tau = 1.0;
  Algorithm algorithm = Algorithm::Coupled;
  int workers = 2;  ///< Parallel only; 1 runs both subproblems on the calling thread
  bool keep_trajectory = false;

  /// Number of levels; throws InvalidInput unless tau / dt is an integer.
  [[nodiscard]] int steps() const;
};

/// Wall-clock seconds spent per phase of a run.
struct PhaseTimings {
  double setup = 0.0;  ///< system assembly and factorizations
  double rhs = 0.0;    ///< load vectors and right-hand sides
  double solve_coupled = 0.0;
  double solve_elasticity = 0.0;
  double solve_rd = 0.0;
  double join = 0.0;  ///< waiting at the level barrier (Parallel only)
  double total = 0.0;
};

struct RunResult {
  State final_state;
  PhaseTimings timings;
  std::vector<State> trajectory;  ///< levels 0..N when requested
  /// GMRES iterations of a split scheme's first level; 0 when it was solved
  /// with the coupled factorization.
  int first_level_iterations = 0;
};

/// Instrumentation points; used by tests to check data dependencies.
struct RunHooks {
  /// Called by the elasticity worker right after it produced level `level`.
  std::function<void(int level, std::vector<double>& u, std::vector<double>& xi)>
      after_elasticity;
};

/// One discretized problem: mesh, spaces, constant-coefficient forms and
/// the factorizations of the three system matrices (built on first use and
/// reused for every level with the same time step).
class Simulation {
 public:
  Simulation(TriMesh mesh, int k, int l, Problem problem);
  ~Simulation();
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  [[nodiscard]] const TriMesh& mesh() const { return mesh_; }
  [[nodiscard]] const Spaces& spaces() const { return spaces_; }
  [[nodiscard]] const FormSet& forms() const { return forms_; }
  [[nodiscard]] const Problem& problem() const { return problem_; }

  /// Quadrature exactness of the load vectors (default kLoadExactness).
  void set_load_exactness(int exactness);
  [[nodiscard]] int load_exactness() const { return load_exactness_; }

  /// Nodal interpolation of the initial data at level 0 (xi_prev = xi^0).
  [[nodiscard]] State initial_state() const;

  /// Monolithic backward-Euler step from `prev` to prev.t + dt.
  State coupled_step(const State& prev, double dt);
  /// The shared first level of every algorithm: a coupled step that keeps xi^0.
  State initial_step(const State& level0, double dt) { return coupled_step(level0, dt); }

  /// Mixed elasticity with the given pressure and temperature in the
  /// constitutive row; loads at t_new. Returns (u, xi).
  std::pair<std::vector<double>, std::vector<double>> elasticity_substep(
      std::span<const double> p_in, std::span<const double> T_in, double t_new);

  /// Pressure-temperature block from (p_n, T_n) with the given xi difference;
  /// loads at t_new. Returns (p, T).
  std::pair<std::vector<double>, std::vector<double>> reaction_diffusion_substep(
      std::span<const double> p_n, std::span<const double> T_n,
      std::span<const double> xi_diff, double dt, double t_new);

  RunResult run(const StepConfig& config, const RunHooks& hooks = {});

  static constexpr double kCoupledIterationTolerance = 1e-13;
  static constexpr int kCoupledIterationLimit = 200;

  /// System matrices after Dirichlet elimination (for structural checks).
  const SparseMatrix& coupled_matrix(double dt);
  const SparseMatrix& elasticity_matrix();
  const SparseMatrix& reaction_diffusion_matrix(double dt);
  /// True when the reaction-diffusion Cholesky factorization succeeded.
  bool reaction_diffusion_is_spd(double dt);

 private:
  struct Systems;

  std::vector<double> displacement_load(double t) const;
  std::vector<double> dirichlet_values(const std::vector<Index>& dofs, const DofMap& space,
                                       const VectorField& fn, double t) const;
  std::vector<double> dirichlet_values(const std::vector<Index>& dofs, const DofMap& space,
                                       const ScalarField& fn, double t) const;

  std::pair<std::vector<double>, std::vector<double>> solve_elasticity(
      std::span<const double> p_in, std::span<const double> T_in, double t_new,
      PhaseTimings* timings) const;
  std::pair<std::vector<double>, std::vector<double>> solve_reaction_diffusion(
      std::span<const double> p_n, std::span<const double> T_n,
      std::span<const double> xi_diff, double t_new, PhaseTimings* timings) const;
  std::vector<double> coupled_rhs(const State& prev, double dt, PhaseTimings* timings) const;
  State unpack_coupled(std::span<const double> x, const State& prev, double dt) const;
  State solve_coupled(const State& prev, double dt, PhaseTimings* timings) const;
  /// Coupled step by preconditioned GMRES on the elasticity and
  /// reaction-diffusion factorizations; empty when it does not converge.
  std::optional<State> iterate_coupled(const State& prev, double dt, PhaseTimings* timings,
                                       int* iterations) const;

  void ensure_coupled_system(double dt);
  void ensure_coupled(double dt);
  void ensure_elasticity();
  void ensure_reaction_diffusion(double dt);

  TriMesh mesh_;
  Spaces spaces_;
  Problem problem_;
  FormSet forms_;
  std::vector<Index> u_dirichlet_;  // displacement dofs on GammaD
  std::vector<Index> w_dirichlet_;  // scalar dofs on the whole boundary
  std::unique_ptr<Systems> systems_;
  int load_exactness_ = kLoadExactness;
};

/// Uniform mesh of the problem's rectangle with `divisions` cells per side,
/// produced by regular refinement of the coarsest compatible grid.
TriMesh make_mesh(const Problem& problem, int divisions);

}  // namespace thermoporo
