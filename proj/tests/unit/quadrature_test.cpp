#include <gtest/gtest.h>

#include <cmath>

#include "support/oracles.hpp"
#include "thermoporo/quadrature.hpp"

namespace tp = thermoporo;

class QuadratureExactness : public ::testing::TestWithParam<int> {};

TEST_P(QuadratureExactness, IntegratesMonomials) {
  const int degree = GetParam();
  const auto rule = tp::quadrature(degree);
  EXPECT_GE(rule.exactness, degree);
  for (int a = 0; a <= degree; ++a) {
    for (int b = 0; a + b <= degree; ++b) {
      double sum = 0.0;
      for (std::size_t q = 0; q < rule.size(); ++q) {
        sum += rule.weights[q] * std::pow(rule.points[q].x, a) * std::pow(rule.points[q].y, b);
      }
      const double exact = oracle::monomial_integral(a, b);
      EXPECT_NEAR(sum, exact, 1e-14 + 1e-13 * exact) << "x^" << a << " y^" << b;
    }
  }
}

TEST_P(QuadratureExactness, PositiveInteriorSymmetric) {
  const auto rule = tp::quadrature(GetParam());
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const auto p = rule.points[q];
    EXPECT_GT(rule.weights[q], 0.0);
    EXPECT_GT(p.x, 0.0);
    EXPECT_GT(p.y, 0.0);
    EXPECT_LT(p.x + p.y, 1.0);
    // Every barycentric permutation of a point carries the same weight.
    const double l[3] = {1.0 - p.x - p.y, p.x, p.y};
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto& pm : perms) {
      const tp::Point2 image{l[pm[1]], l[pm[2]]};
      bool found = false;
      for (std::size_t r = 0; r < rule.size() && !found; ++r) {
        found = std::abs(rule.points[r].x - image.x) < 1e-13 &&
                std::abs(rule.points[r].y - image.y) < 1e-13 &&
                std::abs(rule.weights[r] - rule.weights[q]) < 1e-13;
      }
      EXPECT_TRUE(found) << "missing image of point " << q;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(AllDegrees, QuadratureExactness, ::testing::Range(1, 11));

TEST(Quadrature, RejectsUnsupportedDegree) {
  EXPECT_THROW(tp::quadrature(tp::kMaxQuadratureExactness + 1), tp::InvalidInput);
  EXPECT_THROW(tp::quadrature(-1), tp::InvalidInput);
}

TEST(Quadrature, GaussLegendreOnUnitInterval) {
  for (int n = 1; n <= 8; ++n) {
    const auto rule = tp::gauss_legendre(n);
    ASSERT_EQ(rule.points.size(), static_cast<std::size_t>(n));
    for (int j = 0; j <= 2 * n - 1; ++j) {
      double sum = 0.0;
      for (int q = 0; q < n; ++q) sum += rule.weights[q] * std::pow(rule.points[q], j);
      EXPECT_NEAR(sum, 1.0 / (j + 1), 1e-14) << "n=" << n << " j=" << j;
    }
  }
}
