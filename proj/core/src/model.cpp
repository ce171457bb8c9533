#include "thermoporo/model.hpp"

#include <numbers>

namespace thermoporo {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

LameParameters derive_lame(double youngs_modulus, double poisson_ratio) {
  if (!(youngs_modulus > 0.0)) throw InvalidInput("Young's modulus must be positive");
  if (!(poisson_ratio > 0.0) || !(poisson_ratio < 0.5)) {
    throw InvalidInput("Poisson ratio must lie in (0, 0.5), got " + std::to_string(poisson_ratio));
  }
  const double E = youngs_modulus;
  const double nu = poisson_ratio;
  return {E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)), E / (2.0 * (1.0 + nu))};
}

ModelParams ModelParams::from_young(double E, double nu) {
  ModelParams p;
  p.set_young(E, nu);
  return p;
}

void ModelParams::set_young(double E, double nu) {
  const auto lame = derive_lame(E, nu);
  youngs_modulus = E;
  poisson_ratio = nu;
  lambda = lame.lambda;
  mu = lame.mu;
}

std::vector<std::string> assumption_violations(const ModelParams& p) {
  std::vector<std::string> out;
  if (!p.K.is_spd()) out.emplace_back("K is not symmetric positive definite");
  if (!p.Theta.is_spd()) out.emplace_back("Theta is not symmetric positive definite");
  if (!(p.lambda > 0.0)) out.emplace_back("lambda must be positive");
  if (!(p.mu > 0.0)) out.emplace_back("mu must be positive");
  if (!(p.alpha > 0.0)) out.emplace_back("alpha must be positive");
  if (!(p.beta > 0.0)) out.emplace_back("beta must be positive");
  if (!(p.b0 >= 0.0)) out.emplace_back("b0 must be non-negative");
  if (!(p.a0 > p.b0)) out.emplace_back("a0 must exceed b0");
  if (!(p.c0 > p.b0)) out.emplace_back("c0 must exceed b0");
  return out;
}

std::vector<std::string> check_assumptions(const ModelParams& params, AssumptionMode mode) {
  auto violations = assumption_violations(params);
  if (mode == AssumptionMode::Strict && !violations.empty()) {
    std::string msg = "parameter assumptions violated:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw InvalidInput(msg);
  }
  return violations;
}

Mat2 rd_coefficient_matrix(const ModelParams& p) {
  return {{{p.storage_pp(), p.storage_pt()}, {p.storage_pt(), p.storage_tt()}}};
}

ModelParams baseline_parameters() {
  ModelParams p = ModelParams::from_young(1.0, 0.3);
  p.a0 = 0.2;
  p.c0 = 0.2;
  p.b0 = 0.1;
  p.alpha = 0.1;
  p.beta = 0.1;
  p.K = SPD2::isotropic(1.0);
  p.Theta = SPD2::isotropic(1.0);
  return p;
}

double ExactSolution::xi(Point2 x, double t) const {
  const auto& pr = params_;
  return -pr.lambda * div_u(x, t) + pr.alpha * p(x, t) + pr.beta * T(x, t);
}

Vec2 ExactSolution::grad_xi(Point2 x, double t) const {
  const auto& pr = params_;
  const auto h = hess_u(x, t);
  const Vec2 gp = grad_p(x, t);
  const Vec2 gT = grad_T(x, t);
  Vec2 out{};
  for (int d = 0; d < 2; ++d) {
    const double grad_div = h[0][0][d] + h[1][1][d];
    out[d] = -pr.lambda * grad_div + pr.alpha * gp[d] + pr.beta * gT[d];
  }
  return out;
}

Vec2 ExactSolution::traction(Point2 x, double t, Vec2 n) const {
  const Mat2 g = grad_u(x, t);
  const double mu = params_.mu;
  const double s = xi(x, t);
  const double sxx = 2.0 * mu * g[0][0] - s;
  const double syy = 2.0 * mu * g[1][1] - s;
  const double sxy = mu * (g[0][1] + g[1][0]);
  return {sxx * n[0] + sxy * n[1], sxy * n[0] + syy * n[1]};
}

// --- example1 --------------------------------------------------------------

Example1Solution::Example1Solution(ModelParams params)
    : ExactSolution(params), c_(1.0 / (params.mu + params.lambda)) {}

Vec2 Example1Solution::u(Point2 x, double t) const {
  const double e = std::exp(-t);
  const double s = std::sin(kPi * x.x) * std::sin(kPi * x.y);
  return {e * (std::sin(2 * kPi * x.y) * (std::cos(2 * kPi * x.x) - 1.0) + c_ * s),
          e * (std::sin(2 * kPi * x.x) * (1.0 - std::cos(2 * kPi * x.y)) + c_ * s)};
}

Mat2 Example1Solution::grad_u(Point2 x, double t) const {
  const double e = std::exp(-t);
  const double s1x = std::sin(kPi * x.x), c1x = std::cos(kPi * x.x);
  const double s1y = std::sin(kPi * x.y), c1y = std::cos(kPi * x.y);
  const double s2x = std::sin(2 * kPi * x.x), c2x = std::cos(2 * kPi * x.x);
  const double s2y = std::sin(2 * kPi * x.y), c2y = std::cos(2 * kPi * x.y);
  const double sx = c_ * kPi * c1x * s1y;  // d/dx of c s
  const double sy = c_ * kPi * s1x * c1y;  // d/dy of c s
  return {{{e * (-2 * kPi * s2y * s2x + sx), e * (2 * kPi * c2y * (c2x - 1.0) + sy)},
           {e * (2 * kPi * c2x * (1.0 - c2y) + sx), e * (2 * kPi * s2x * s2y + sy)}}};
}

std::array<Mat2, 2> Example1Solution::hess_u(Point2 x, double t) const {
  const double e = std::exp(-t);
  const double s1x = std::sin(kPi * x.x), c1x = std::cos(kPi * x.x);
  const double s1y = std::sin(kPi * x.y), c1y = std::cos(kPi * x.y);
  const double s2x = std::sin(2 * kPi * x.x), c2x = std::cos(2 * kPi * x.x);
  const double s2y = std::sin(2 * kPi * x.y), c2y = std::cos(2 * kPi * x.y);
  const double pi2 = kPi * kPi;
  const double sxx = -c_ * pi2 * s1x * s1y;
  const double sxy = c_ * pi2 * c1x * c1y;
  const double syy = sxx;
  const double u1xx = -4 * pi2 * s2y * c2x + sxx;
  const double u1xy = -4 * pi2 * c2y * s2x + sxy;
  const double u1yy = -4 * pi2 * s2y * (c2x - 1.0) + syy;
  const double u2xx = -4 * pi2 * s2x * (1.0 - c2y) + sxx;
  const double u2xy = 4 * pi2 * c2x * s2y + sxy;
  const double u2yy = 4 * pi2 * s2x * c2y + syy;
  return {Mat2{{{e * u1xx, e * u1xy}, {e * u1xy, e * u1yy}}},
          Mat2{{{e * u2xx, e * u2xy}, {e * u2xy, e * u2yy}}}};
}

Mat2 Example1Solution::grad_u_t(Point2 x, double t) const {
  Mat2 g = grad_u(x, t);
  for (auto& row : g)
    for (auto& v : row) v = -v;
  return g;
}

double Example1Solution::p(Point2 x, double t) const {
  return std::exp(-t) * std::sin(kPi * x.x) * std::sin(kPi * x.y);
}

Vec2 Example1Solution::grad_p(Point2 x, double t) const {
  const double e = std::exp(-t);
  return {e * kPi * std::cos(kPi * x.x) * std::sin(kPi * x.y),
          e * kPi * std::sin(kPi * x.x) * std::cos(kPi * x.y)};
}

Mat2 Example1Solution::hess_p(Point2 x, double t) const {
  const double e = std::exp(-t) * kPi * kPi;
  const double d = -e * std::sin(kPi * x.x) * std::sin(kPi * x.y);
  const double o = e * std::cos(kPi * x.x) * std::cos(kPi * x.y);
  return {{{d, o}, {o, d}}};
}

double Example1Solution::p_t(Point2 x, double t) const { return -p(x, t); }

// --- Polynomials -----------------------------------------------------------

double Polynomial2::operator()(Point2 x) const {
  double sum = 0.0;
  for (const auto& [exp, c] : coeffs_) {
    sum += c * std::pow(x.x, exp.first) * std::pow(x.y, exp.second);
  }
  return sum;
}

Polynomial2 Polynomial2::dx() const {
  std::map<std::pair<int, int>, double> out;
  for (const auto& [exp, c] : coeffs_) {
    if (exp.first > 0) out[{exp.first - 1, exp.second}] += c * exp.first;
  }
  return Polynomial2(std::move(out));
}

Polynomial2 Polynomial2::dy() const {
  std::map<std::pair<int, int>, double> out;
  for (const auto& [exp, c] : coeffs_) {
    if (exp.second > 0) out[{exp.first, exp.second - 1}] += c * exp.second;
  }
  return Polynomial2(std::move(out));
}

int Polynomial2::degree() const {
  int d = 0;
  for (const auto& [exp, c] : coeffs_) {
    if (c != 0.0) d = std::max(d, exp.first + exp.second);
  }
  return d;
}

PatchSolution::PatchSolution(ModelParams params, int k, int l) : ExactSolution(params) {
  if (k < 2 || k > 3 || l < 1 || l > k - 1) {
    throw InvalidInput("patch solution needs k in {2, 3} and 1 <= l <= k - 1");
  }
  std::map<std::pair<int, int>, double> u1{{{0, 0}, 0.3},  {{1, 0}, 0.5},   {{0, 1}, -0.2},
                                           {{2, 0}, 0.4},  {{1, 1}, -0.3},  {{0, 2}, 0.25}};
  std::map<std::pair<int, int>, double> u2{{{0, 0}, -0.1}, {{1, 0}, 0.2},   {{0, 1}, 0.6},
                                           {{2, 0}, -0.35}, {{1, 1}, 0.15}, {{0, 2}, 0.45}};
  std::map<std::pair<int, int>, double> p{{{0, 0}, 0.5}, {{1, 0}, 0.3}, {{0, 1}, -0.4}};
  std::map<std::pair<int, int>, double> T{{{0, 0}, -0.2}, {{1, 0}, 0.6}, {{0, 1}, 0.25}};
  if (k == 3) {
    u1.insert({{{3, 0}, 0.2}, {{2, 1}, -0.1}, {{1, 2}, 0.3}, {{0, 3}, -0.15}});
    u2.insert({{{3, 0}, -0.25}, {{2, 1}, 0.2}, {{1, 2}, 0.1}, {{0, 3}, 0.3}});
  }
  if (l == 2) {
    p.insert({{{2, 0}, 0.2}, {{1, 1}, -0.1}, {{0, 2}, 0.3}});
    T.insert({{{2, 0}, -0.15}, {{1, 1}, 0.2}, {{0, 2}, 0.1}});
  }
  u_ = {Polynomial2(u1), Polynomial2(u2)};
  p_ = Polynomial2(p);
  T_ = Polynomial2(T);
}

Vec2 PatchSolution::u(Point2 x, double t) const { return {(1 + t) * u_[0](x), (1 + t) * u_[1](x)}; }

Mat2 PatchSolution::grad_u(Point2 x, double t) const {
  Mat2 g = grad_u_t(x, t);
  for (auto& row : g)
    for (auto& v : row) v *= (1 + t);
  return g;
}

Mat2 PatchSolution::grad_u_t(Point2 x, double) const {
  return {{{u_[0].dx()(x), u_[0].dy()(x)}, {u_[1].dx()(x), u_[1].dy()(x)}}};
}

std::array<Mat2, 2> PatchSolution::hess_u(Point2 x, double t) const {
  std::array<Mat2, 2> out{};
  for (int c = 0; c < 2; ++c) {
    const double xx = u_[c].dx().dx()(x);
    const double xy = u_[c].dx().dy()(x);
    const double yy = u_[c].dy().dy()(x);
    out[c] = {{{(1 + t) * xx, (1 + t) * xy}, {(1 + t) * xy, (1 + t) * yy}}};
  }
  return out;
}

Mat2 PatchSolution::hess_p(Point2 x, double) const {
  const double xy = p_.dx().dy()(x);
  return {{{p_.dx().dx()(x), xy}, {xy, p_.dy().dy()(x)}}};
}

Mat2 PatchSolution::hess_T(Point2 x, double) const {
  const double xy = T_.dx().dy()(x);
  return {{{T_.dx().dx()(x), xy}, {xy, T_.dy().dy()(x)}}};
}

// --- Sources and problems --------------------------------------------------

SourceSet manufacture_sources(std::shared_ptr<const ExactSolution> exact) {
  SourceSet s;
  s.f = [exact](Point2 x, double t) {
    const auto& pr = exact->params();
    const auto h = exact->hess_u(x, t);
    const Vec2 gp = exact->grad_p(x, t);
    const Vec2 gT = exact->grad_T(x, t);
    Vec2 f{};
    for (int c = 0; c < 2; ++c) {
      const double lap = h[c][0][0] + h[c][1][1];
      const double grad_div = h[0][0][c] + h[1][1][c];
      f[c] = -pr.mu * lap - (pr.mu + pr.lambda) * grad_div + pr.alpha * gp[c] + pr.beta * gT[c];
    }
    return f;
  };
  s.g = [exact](Point2 x, double t) {
    const auto& pr = exact->params();
    const Mat2 gut = exact->grad_u_t(x, t);
    const double div_ut = gut[0][0] + gut[1][1];
    return pr.c0 * exact->p_t(x, t) - pr.b0 * exact->T_t(x, t) + pr.alpha * div_ut -
           pr.K.contract(exact->hess_p(x, t));
  };
  s.heat = [exact](Point2 x, double t) {
    const auto& pr = exact->params();
    const Mat2 gut = exact->grad_u_t(x, t);
    const double div_ut = gut[0][0] + gut[1][1];
    return pr.a0 * exact->T_t(x, t) - pr.b0 * exact->p_t(x, t) + pr.beta * div_ut -
           pr.Theta.contract(exact->hess_T(x, t));
  };
  return s;
}

Problem manufactured_problem(std::shared_ptr<const ExactSolution> exact, std::string name) {
  Problem pb;
  pb.name = std::move(name);
  pb.params = exact->params();
  pb.lo = {0.0, 0.0};
  pb.hi = {1.0, 1.0};
  pb.tags = vertical_sides_clamped(pb.lo, pb.hi);
  pb.sources = manufacture_sources(exact);
  pb.traction = [exact](Point2 x, double t, Vec2 n) { return exact->traction(x, t, n); };
  pb.initial.u = [exact](Point2 x) { return exact->u(x, 0.0); };
  pb.initial.p = [exact](Point2 x) { return exact->p(x, 0.0); };
  pb.initial.T = [exact](Point2 x) { return exact->T(x, 0.0); };
  pb.initial.xi = [exact](Point2 x) { return exact->xi(x, 0.0); };
  pb.boundary.u = [exact](Point2 x, double t) { return exact->u(x, t); };
  pb.boundary.p = [exact](Point2 x, double t) { return exact->p(x, t); };
  pb.boundary.T = [exact](Point2 x, double t) { return exact->T(x, t); };
  pb.exact = std::move(exact);
  return pb;
}

std::shared_ptr<const ExactSolution> example1_exact(const ModelParams& params) {
  return std::make_shared<Example1Solution>(params);
}

Problem example1_problem(const ModelParams& params) {
  return manufactured_problem(example1_exact(params), "example1");
}

Problem patch_problem(const ModelParams& params, int k, int l) {
  return manufactured_problem(std::make_shared<PatchSolution>(params, k, l), "patch");
}

Problem zero_problem(const ModelParams& params) {
  Problem pb;
  pb.name = "zero";
  pb.params = params;
  pb.tags = vertical_sides_clamped(pb.lo, pb.hi);
  pb.sources.f = [](Point2, double) { return Vec2{0.0, 0.0}; };
  pb.sources.g = [](Point2, double) { return 0.0; };
  pb.sources.heat = [](Point2, double) { return 0.0; };
  pb.initial.u = [](Point2) { return Vec2{0.0, 0.0}; };
  pb.initial.p = [](Point2) { return 0.0; };
  pb.initial.T = [](Point2) { return 0.0; };
  pb.initial.xi = [](Point2) { return 0.0; };
  return pb;
}

Scenario example2_scenario(WellSigns signs) {
  ModelParams p = ModelParams::from_young(24.0, 0.499);
  p.a0 = 0.1;
  p.c0 = 1e-3;
  p.b0 = 3e-5;
  p.alpha = 0.25;
  p.beta = 0.001;
  p.K = SPD2::isotropic(3.2e-16 / 3.2e-10);
  p.Theta = SPD2::isotropic(2.6);

  Problem pb = zero_problem(p);
  pb.name = "example2";
  pb.lo = {0.0, 0.0};
  pb.hi = {500.0, 500.0};
  pb.tags = vertical_sides_clamped(pb.lo, pb.hi);

  const double sign = signs == WellSigns::InjectionAt350 ? -1.0 : 1.0;
  const auto wells = [sign](Point2 x, double) {
    const auto bump = [&](double cx, double cy) {
      return 100.0 * std::exp(-0.001 * (x.x - cx) * (x.x - cx) - 0.001 * (x.y - cy) * (x.y - cy));
    };
    return sign * (bump(150.0, 250.0) - bump(350.0, 250.0));
  };
  pb.sources.g = wells;
  pb.sources.heat = wells;

  const double T0 = 100.0;
  pb.initial.T = [T0](Point2) { return T0; };
  pb.initial.xi = [T0, beta = p.beta](Point2) { return beta * T0; };
  return {std::move(pb), 50, 0.01, 1.0};
}

}  // namespace thermoporo
