#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "thermoporo/common.hpp"
#include "thermoporo/mesh.hpp"

namespace thermoporo {

/// Symmetric 2x2 tensor (permeability over viscosity, thermal conductivity).
struct SPD2 {
  double xx = 1.0;
  double xy = 0.0;
  double yy = 1.0;

  static SPD2 isotropic(double v) { return {v, 0.0, v}; }
  [[nodiscard]] bool is_spd() const { return xx > 0.0 && xx * yy - xy * xy > 0.0; }
  [[nodiscard]] Vec2 apply(const Vec2& v) const {
    return {xx * v[0] + xy * v[1], xy * v[0] + yy * v[1]};
  }
  /// K : H for a symmetric Hessian H, i.e. div(K grad q) for constant K.
  [[nodiscard]] double contract(const Mat2& h) const {
    return xx * h[0][0] + 2.0 * xy * h[0][1] + yy * h[1][1];
  }
};

struct LameParameters {
  double lambda;
  double mu;
};

/// Lame parameters from Young's modulus and Poisson's ratio.
/// Throws InvalidInput unless E > 0 and 0 < nu < 0.5.
LameParameters derive_lame(double youngs_modulus, double poisson_ratio);

/// Physical coefficients of the linear thermo-poroelastic system.
struct ModelParams {
  double youngs_modulus = 1.0;
  double poisson_ratio = 0.3;
  double lambda = 0.0;
  double mu = 0.0;
  double alpha = 0.1;  ///< Biot-Willis coefficient
  double beta = 0.1;   ///< thermal stress coefficient
  double a0 = 0.2;     ///< effective thermal capacity
  double b0 = 0.1;     ///< thermal dilation
  double c0 = 0.2;     ///< specific storage
  SPD2 K = SPD2::isotropic(1.0);
  SPD2 Theta = SPD2::isotropic(1.0);

  /// Sets E and nu and re-derives lambda and mu.
  static ModelParams from_young(double E, double nu);
  void set_young(double E, double nu);

  [[nodiscard]] double storage_pp() const { return c0 + alpha * alpha / lambda; }
  [[nodiscard]] double storage_tt() const { return a0 + beta * beta / lambda; }
  [[nodiscard]] double storage_pt() const { return alpha * beta / lambda - b0; }
};

enum class AssumptionMode { Strict, Permissive };

/// Human-readable list of violated positivity/ordering assumptions
/// (SPD tensors, positive lambda, mu, alpha, beta, and a0, c0 > b0 >= 0).
std::vector<std::string> assumption_violations(const ModelParams& params);

/// Strict mode throws InvalidInput on any violation; permissive mode
/// returns the violations as warnings.
std::vector<std::string> check_assumptions(const ModelParams& params, AssumptionMode mode);

/// [[c0 + a^2/l, ab/l - b0], [ab/l - b0, a0 + b^2/l]], the pointwise
/// coefficient matrix of the pressure-temperature block.
Mat2 rd_coefficient_matrix(const ModelParams& params);

/// Parameters shared by the manufactured-solution tables:
/// nu = 0.3, E = 1, a0 = c0 = 0.2, b0 = 0.1, alpha = beta = 0.1, K = Theta = I.
ModelParams baseline_parameters();

/// Closed-form space-time fields with the derivatives the strong operators need.
///
/// Hessians are indexed hess[i][j] = d^2 / dx_i dx_j; for the displacement
/// hess_u[c] is the Hessian of component c and grad_u[c][d] = d u_c / d x_d.
class ExactSolution {
 public:
  explicit ExactSolution(ModelParams params) : params_(params) {}
  virtual ~ExactSolution() = default;

  [[nodiscard]] const ModelParams& params() const { return params_; }

  [[nodiscard]] virtual Vec2 u(Point2 x, double t) const = 0;
  [[nodiscard]] virtual Mat2 grad_u(Point2 x, double t) const = 0;
  [[nodiscard]] virtual std::array<Mat2, 2> hess_u(Point2 x, double t) const = 0;
  /// Time derivative of grad_u.
  [[nodiscard]] virtual Mat2 grad_u_t(Point2 x, double t) const = 0;

  [[nodiscard]] virtual double p(Point2 x, double t) const = 0;
  [[nodiscard]] virtual Vec2 grad_p(Point2 x, double t) const = 0;
  [[nodiscard]] virtual Mat2 hess_p(Point2 x, double t) const = 0;
  [[nodiscard]] virtual double p_t(Point2 x, double t) const = 0;

  [[nodiscard]] virtual double T(Point2 x, double t) const = 0;
  [[nodiscard]] virtual Vec2 grad_T(Point2 x, double t) const = 0;
  [[nodiscard]] virtual Mat2 hess_T(Point2 x, double t) const = 0;
  [[nodiscard]] virtual double T_t(Point2 x, double t) const = 0;

  [[nodiscard]] double div_u(Point2 x, double t) const {
    const Mat2 g = grad_u(x, t);
    return g[0][0] + g[1][1];
  }
  /// Pseudo-total pressure -lambda div u + alpha p + beta T.
  [[nodiscard]] double xi(Point2 x, double t) const;
  [[nodiscard]] Vec2 grad_xi(Point2 x, double t) const;
  /// Total traction (2 mu eps(u) - xi I) n on a boundary with outward normal n.
  [[nodiscard]] Vec2 traction(Point2 x, double t, Vec2 normal) const;

 private:
  ModelParams params_;
};

/// Manufactured solution of the unit-square benchmark:
/// u = e^{-t} ( sin(2 pi y)(cos(2 pi x) - 1) + s/(mu+lambda),
///              sin(2 pi x)(1 - cos(2 pi y)) + s/(mu+lambda) ),
/// p = T = e^{-t} s, with s = sin(pi x) sin(pi y).
class Example1Solution final : public ExactSolution {
 public:
  explicit Example1Solution(ModelParams params);

  Vec2 u(Point2 x, double t) const override;
  Mat2 grad_u(Point2 x, double t) const override;
  std::array<Mat2, 2> hess_u(Point2 x, double t) const override;
  Mat2 grad_u_t(Point2 x, double t) const override;
  double p(Point2 x, double t) const override;
  Vec2 grad_p(Point2 x, double t) const override;
  Mat2 hess_p(Point2 x, double t) const override;
  double p_t(Point2 x, double t) const override;
  double T(Point2 x, double t) const override { return p(x, t); }
  Vec2 grad_T(Point2 x, double t) const override { return grad_p(x, t); }
  Mat2 hess_T(Point2 x, double t) const override { return hess_p(x, t); }
  double T_t(Point2 x, double t) const override { return p_t(x, t); }

 private:
  double c_;  // 1 / (mu + lambda)
};

/// Bivariate polynomial sum c_ij x^i y^j.
class Polynomial2 {
 public:
  Polynomial2() = default;
  explicit Polynomial2(std::map<std::pair<int, int>, double> coefficients)
      : coeffs_(std::move(coefficients)) {}

  [[nodiscard]] double operator()(Point2 x) const;
  [[nodiscard]] Polynomial2 dx() const;
  [[nodiscard]] Polynomial2 dy() const;
  [[nodiscard]] int degree() const;

 private:
  std::map<std::pair<int, int>, double> coeffs_;
};

/// Polynomial patch solution: u = (1 + t) P_u(x) with P_u of degree k,
/// p = P_p(x) and T = P_T(x) of degree l <= k - 1, all stationary in time
/// except u (and hence xi, which is affine in t). Every stepper reproduces
/// it exactly when the discrete spaces contain it.
class PatchSolution final : public ExactSolution {
 public:
  PatchSolution(ModelParams params, int k, int l);

  Vec2 u(Point2 x, double t) const override;
  Mat2 grad_u(Point2 x, double t) const override;
  std::array<Mat2, 2> hess_u(Point2 x, double t) const override;
  Mat2 grad_u_t(Point2 x, double t) const override;
  double p(Point2 x, double) const override { return p_(x); }
  Vec2 grad_p(Point2 x, double) const override { return {p_.dx()(x), p_.dy()(x)}; }
  Mat2 hess_p(Point2 x, double) const override;
  double p_t(Point2, double) const override { return 0.0; }
  double T(Point2 x, double) const override { return T_(x); }
  Vec2 grad_T(Point2 x, double) const override { return {T_.dx()(x), T_.dy()(x)}; }
  Mat2 hess_T(Point2 x, double) const override;
  double T_t(Point2, double) const override { return 0.0; }

 private:
  std::array<Polynomial2, 2> u_;
  Polynomial2 p_;
  Polynomial2 T_;
};

using ScalarField = std::function<double(Point2, double)>;
using VectorField = std::function<Vec2(Point2, double)>;
/// Boundary traction as a function of position, time and outward normal.
using TractionField = std::function<Vec2(Point2, double, Vec2)>;

struct SourceSet {
  VectorField f;     ///< body force
  ScalarField g;     ///< mass source
  ScalarField heat;  ///< heat source H_s
};

/// Applies the strong operators to the exact fields:
/// f  = -mu lap u - (mu + lambda) grad div u + alpha grad p + beta grad T,
/// g  = d/dt(c0 p - b0 T + alpha div u) - div(K grad p),
/// Hs = d/dt(a0 T - b0 p + beta div u) - div(Theta grad T).
SourceSet manufacture_sources(std::shared_ptr<const ExactSolution> exact);

struct InitialData {
  std::function<Vec2(Point2)> u;
  std::function<double(Point2)> p;
  std::function<double(Point2)> T;
  std::function<double(Point2)> xi;  ///< -lambda div u0 + alpha p0 + beta T0
};

/// Dirichlet values; an empty function means homogeneous data.
struct BoundaryData {
  VectorField u;
  ScalarField p;
  ScalarField T;
};

/// Everything a stepper needs besides the mesh and the time grid.
struct Problem {
  std::string name;
  ModelParams params;
  Point2 lo{0.0, 0.0};
  Point2 hi{1.0, 1.0};
  TagRule tags;
  SourceSet sources;
  TractionField traction;  ///< on GammaN; empty means traction-free
  InitialData initial;
  BoundaryData boundary;
  std::shared_ptr<const ExactSolution> exact;  ///< null when no closed form is known
};

/// Problem whose sources, traction, initial and boundary data come from `exact`
/// on the unit square with GammaD = {x = 0} u {x = 1}.
Problem manufactured_problem(std::shared_ptr<const ExactSolution> exact, std::string name);

std::shared_ptr<const ExactSolution> example1_exact(const ModelParams& params);
Problem example1_problem(const ModelParams& params);
Problem patch_problem(const ModelParams& params, int k, int l);

/// Sources and data identically zero.
Problem zero_problem(const ModelParams& params);

/// Which Gaussian carries the positive (injection) sign in the reservoir
/// scenario's mass and heat sources.
enum class WellSigns {
  InjectionAt350,  ///< g > 0 at (350, 250): matches the well labels
  AsPrinted,       ///< g > 0 at (150, 250): the literal source formula
};

struct Scenario {
  Problem problem;
  int divisions;  ///< cells per side
  double dt;
  double tau;
};

/// Geothermal injection-production reservoir on (0, 500)^2.
Scenario example2_scenario(WellSigns signs = WellSigns::InjectionAt350);

}  // namespace thermoporo
