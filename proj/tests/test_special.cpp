#include <cmath>
#include <vector>

#include <boost/math/special_functions/digamma.hpp>
#include <gtest/gtest.h>

#include "sgweyl/quadrature.hpp"
#include "sgweyl/special.hpp"

using namespace sgweyl;

namespace {

// Psi(x) = -gamma + sum_{k>=1} (1/k - 1/(k + x - 1)); the tail beyond N is
// log((N + x - 1/2) / (N + 1/2)) up to O(N^-3).
double digamma_series(double x, long n = 10'000'000) {
  const double a = x - 1.0;
  double sum = 0.0, carry = 0.0;
  for (long k = n; k >= 1; --k) {
    const double term = 1.0 / k - 1.0 / (k + a);
    const double y = term - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum + std::log((n + 0.5 + a) / (n + 0.5)) - kEulerGamma;
}

}  // namespace

TEST(SphereVolume, LowDimensions) {
  EXPECT_DOUBLE_EQ(sphere_volume(1), 2.0);
  EXPECT_NEAR(sphere_volume(2), 2 * kPi, 1e-14);
  EXPECT_NEAR(sphere_volume(3), 4 * kPi, 1e-14);
  EXPECT_NEAR(sphere_volume(4), 2 * kPi * kPi, 1e-13);
  EXPECT_THROW(sphere_volume(0), ValidationError);
}

TEST(Digamma, SeriesOracle) {
  EXPECT_NEAR(digamma(1.0), -0.5772156649015329, 1e-15);
  EXPECT_NEAR(digamma(0.5), -kEulerGamma - 2 * std::log(2.0), 1e-14);
  EXPECT_NEAR(digamma(2.0), 1 - kEulerGamma, 1e-15);
  for (double x : {1.0, 0.5, 0.25, 1.5, 3.7}) EXPECT_NEAR(digamma(x), digamma_series(x), 1e-12);
}

TEST(Digamma, AgreesWithBoost) {
  for (double x = 0.05; x < 200.0; x *= 1.07)
    EXPECT_NEAR(digamma(x), boost::math::digamma(x), 1e-13 * std::max(1.0, std::abs(digamma(x))));
}

TEST(Digamma, Recurrence) {
  for (double x = 0.1; x <= 50.0; x += 0.0137)
    EXPECT_NEAR(digamma(x + 1) - digamma(x) - 1 / x, 0.0, 1e-12) << x;
}

TEST(Digamma, RejectsNonPositive) {
  EXPECT_THROW(digamma(0.0), ValidationError);
  EXPECT_THROW(digamma(-1.5), ValidationError);
}

TEST(GaussLegendre, ExactForPolynomials) {
  for (int n : {1, 2, 5, 12, 24}) {
    const auto rule = gauss_legendre(n);
    for (int p = 0; p <= 2 * n - 1; ++p) {
      double q = 0.0;
      for (int i = 0; i < n; ++i) q += rule.weights[i] * std::pow(rule.nodes[i], p);
      const double exact = p % 2 == 1 ? 0.0 : 2.0 / (p + 1);
      EXPECT_NEAR(q, exact, 1e-14) << n << " " << p;
    }
  }
}

TEST(SphereRule, MomentsMatchVolume) {
  for (int d = 1; d <= 5; ++d) {
    const auto rule = sphere_rule(d, 1);
    double mass = 0.0, second = 0.0, fourth = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const auto p = rule.point(k);
      mass += rule.weights[k];
      second += rule.weights[k] * p[0] * p[0];
      fourth += rule.weights[k] * std::pow(p[d - 1], 4);
    }
    const double v = sphere_volume(d);
    EXPECT_NEAR(mass, v, 1e-12 * v) << d;
    EXPECT_NEAR(second, v / d, 1e-12 * v) << d;
    EXPECT_NEAR(fourth, 3 * v / (d * (d + 2.0)), 1e-12 * v) << d;
  }
}
