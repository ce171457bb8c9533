#include "thermoporo/quadrature.hpp"

#include <numbers>
#include <string>

namespace thermoporo {

namespace {

// Symmetric orbit in barycentric form: centroid (a = b = 1/3), S21 (a, a, 1 - 2a)
// or S111 (a, b, 1 - a - b). Weights are normalized to a unit-area triangle.
struct Orbit {
  double a;
  double b;
  double weight;
  enum Kind { Centroid, S21, S111 } kind;
};

// Positive-interior symmetric rules of polynomial degree 5, 6, 8 and 10.
const std::vector<Orbit> kDegree5 = {
    {1.0 / 3.0, 1.0 / 3.0, 0.225, Orbit::Centroid},
    {0.47014206410511508977, 0.0, 0.13239415278850618074, Orbit::S21},
    {0.1012865073234563388, 0.0, 0.1259391805448271526, Orbit::S21},
};
const std::vector<Orbit> kDegree6 = {
    {0.24928674517091042129, 0.0, 0.11678627572637936603, Orbit::S21},
    {0.06308901449150222834, 0.0, 0.050844906370206816921, Orbit::S21},
    {0.053145049844816947353, 0.31035245103378440542, 0.082851075618373575194, Orbit::S111},
};
const std::vector<Orbit> kDegree8 = {
    {1.0 / 3.0, 1.0 / 3.0, 0.14431560767778716825, Orbit::Centroid},
    {0.45929258829272315603, 0.0, 0.095091634267284624794, Orbit::S21},
    {0.17056930775176020662, 0.0, 0.10321737053471825028, Orbit::S21},
    {0.050547228317030975458, 0.0, 0.032458497623198080311, Orbit::S21},
    {0.0083947774099576053372, 0.26311282963463811342, 0.027230314174434994265, Orbit::S111},
};
const std::vector<Orbit> kDegree10 = {
    {1.0 / 3.0, 1.0 / 3.0, 0.090817990382753580095, Orbit::Centroid},
    {0.48557763338365737737, 0.0, 0.036725957756466704717, Orbit::S21},
    {0.1094815754850370548, 0.0, 0.045321059435527934783, Orbit::S21},
    {0.14170721941487995476, 0.30793983876412095017, 0.072757916845420108604, Orbit::S111},
    {0.025003534762686386074, 0.24667256063990269392, 0.028327242531057484837, Orbit::S111},
    {0.0095408154002994575802, 0.066803251012200265774, 0.0094216669637328234599, Orbit::S111},
};

void expand(const Orbit& o, QuadratureRule& rule) {
  const double w = 0.5 * o.weight;
  const auto add = [&](double x, double y) {
    rule.points.push_back({x, y});
    rule.weights.push_back(w);
  };
  switch (o.kind) {
    case Orbit::Centroid:
      add(1.0 / 3.0, 1.0 / 3.0);
      break;
    case Orbit::S21: {
      const double c = 1.0 - 2.0 * o.a;
      add(o.a, o.a);
      add(c, o.a);
      add(o.a, c);
      break;
    }
    case Orbit::S111: {
      const double c = 1.0 - o.a - o.b;
      add(o.a, o.b);
      add(o.b, o.a);
      add(o.b, c);
      add(c, o.b);
      add(o.a, c);
      add(c, o.a);
      break;
    }
  }
}

}  // namespace

LineRule gauss_legendre(int n) {
  if (n < 1) throw InvalidInput("gauss_legendre: need at least one point");
  LineRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton iteration on P_n starting from the Chebyshev-like guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      const double pn = n == 1 ? x : p1;
      const double pn1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pn1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Map [-1, 1] to [0, 1]; order nodes ascending.
    rule.points[n - 1 - i] = 0.5 * (x + 1.0);
    rule.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

QuadratureRule quadrature(int exactness) {
  if (exactness < 0 || exactness > kMaxQuadratureExactness) {
    throw InvalidInput("quadrature: exactness " + std::to_string(exactness) +
                       " outside supported range [0, " +
                       std::to_string(kMaxQuadratureExactness) + "]");
  }
  QuadratureRule rule;
  rule.exactness = exactness;
  if (exactness <= 1) {
    rule.points = {{1.0 / 3.0, 1.0 / 3.0}};
    rule.weights = {0.5};
    rule.exactness = 1;
    return rule;
  }
  if (exactness == 2) {
    rule.points = {{1.0 / 6.0, 1.0 / 6.0}, {2.0 / 3.0, 1.0 / 6.0}, {1.0 / 6.0, 2.0 / 3.0}};
    rule.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
    return rule;
  }
  const std::vector<Orbit>& orbits = exactness <= 5   ? kDegree5
                                    : exactness == 6 ? kDegree6
                                    : exactness <= 8 ? kDegree8
                                                     : kDegree10;
  rule.exactness = exactness <= 5 ? 5 : exactness == 6 ? 6 : exactness <= 8 ? 8 : 10;
  for (const Orbit& o : orbits) expand(o, rule);
  return rule;
}

}  // namespace thermoporo
