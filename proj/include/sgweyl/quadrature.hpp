#pragma once
//
// Gauss-Legendre rules and product rules on S^{d-1}, d <= 6.
//

#include <algorithm>
#include <cmath>
#include <vector>

#include "sgweyl/core.hpp"

namespace sgweyl {

struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] by Newton iteration on P_n.
inline GaussLegendre gauss_legendre(int n) {
  require(n >= 1, "gauss_legendre: need at least one node");
  GaussLegendre rule{std::vector<double>(n), std::vector<double>(n)};
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = 0.0;
    for (int j = 1; j <= n; ++j) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
    }
    dp = n * (z * p0 - p1) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

/// Quadrature rule on the unit sphere S^{d-1}: node k occupies
/// points[k*d .. k*d+d).
struct SphereRule {
  int dimension = 0;
  std::vector<double> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  std::span<const double> point(std::size_t k) const {
    return {points.data() + k * dimension, static_cast<std::size_t>(dimension)};
  }
};

/// Product rule on S^{d-1} at resolution `level` >= 0.
///   d = 1: the two points of S^0 with unit weights (exact).
///   d = 2: periodic trapezoid with 8 * 2^level angles.
///   d = 3: Gauss-Legendre in cos(polar), 4 * 2^level nodes, times a
///          periodic trapezoid in azimuth with twice as many nodes.
///   d >= 4: a rule in t = cos(polar) with 4 * 2^level nodes, times the
///          rule on S^{d-2} (recursively).
inline SphereRule sphere_rule(int d, int level) {
  require(d >= 1 && d <= 6, "sphere quadrature is implemented for 1 <= d <= 6");
  require(level >= 0 && level <= 10, "sphere_rule: level out of range");
  SphereRule rule;
  rule.dimension = d;
  if (d == 1) {
    rule.points = {1.0, -1.0};
    rule.weights = {1.0, 1.0};
  } else if (d == 2) {
    const int n = 8 << level;
    for (int k = 0; k < n; ++k) {
      const double a = 2.0 * kPi * k / n;
      rule.points.push_back(std::cos(a));
      rule.points.push_back(std::sin(a));
      rule.weights.push_back(2.0 * kPi / n);
    }
  } else if (d == 3) {
    const int n_polar = 4 << level;
    const int n_azimuth = 2 * n_polar;
    const auto gl = gauss_legendre(n_polar);
    for (int i = 0; i < n_polar; ++i) {
      const double z = gl.nodes[i];
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      for (int k = 0; k < n_azimuth; ++k) {
        const double a = 2.0 * kPi * (k + 0.5) / n_azimuth;
        rule.points.push_back(rho * std::cos(a));
        rule.points.push_back(rho * std::sin(a));
        rule.points.push_back(z);
        rule.weights.push_back(gl.weights[i] * 2.0 * kPi / n_azimuth);
      }
    }
  } else {
    // t = cos(phi) carries the weight (1 - t^2)^{(d-3)/2}: a polynomial for
    // odd d (Gauss-Legendre), sqrt(1 - t^2) times a polynomial for even d
    // (Gauss-Chebyshev of the second kind).
    const auto sub = sphere_rule(d - 1, level);
    const int n_polar = 4 << level;
    std::vector<double> nodes(n_polar), weights(n_polar);
    if (d % 2 == 1) {
      const auto gl = gauss_legendre(n_polar);
      for (int i = 0; i < n_polar; ++i) {
        nodes[i] = gl.nodes[i];
        weights[i] = gl.weights[i] * std::pow(1.0 - nodes[i] * nodes[i], (d - 3) / 2);
      }
    } else {
      for (int i = 0; i < n_polar; ++i) {
        const double a = kPi * (i + 1) / (n_polar + 1);
        nodes[i] = std::cos(a);
        weights[i] = kPi / (n_polar + 1) * std::pow(std::sin(a), 2) *
                     std::pow(1.0 - nodes[i] * nodes[i], (d - 4) / 2);
      }
    }
    for (int i = 0; i < n_polar; ++i) {
      const double rho = std::sqrt(std::max(0.0, 1.0 - nodes[i] * nodes[i]));
      for (std::size_t k = 0; k < sub.size(); ++k) {
        for (double c : sub.point(k)) rule.points.push_back(rho * c);
        rule.points.push_back(nodes[i]);
        rule.weights.push_back(weights[i] * sub.weights[k]);
      }
    }
  }
  return rule;
}

}  // namespace sgweyl
