#pragma once
//
// SG principal symbols as triples of evaluable boundary components.
//
// A classical SG symbol of order (m_psi, m_e) has three boundary restrictions:
//   p_psi(x, theta)   fiber infinity, evaluated at unit covariable theta
//   p_e(omega, xi)    base infinity, evaluated at unit variable omega
//   p_psie(omega, theta)  the corner S^{d-1} x S^{d-1}
// All components are positive for an elliptic symbol.
//

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "sgweyl/core.hpp"

namespace sgweyl {

struct SymbolOrders {
  double psi = 1.0;
  double e = 1.0;
};

class PrincipalSymbolTriple {
 public:
  /// (point in R^d or on S^{d-1}, point on S^{d-1} or in R^d) -> value
  using Component =
      std::function<double(std::span<const double>, std::span<const double>)>;

  PrincipalSymbolTriple(int dimension, Component p_psi, Component p_e,
                        Component p_psie, SymbolOrders orders)
      : dimension_(dimension),
        p_psi_(std::move(p_psi)),
        p_e_(std::move(p_e)),
        p_psie_(std::move(p_psie)),
        orders_(orders) {
    require(dimension >= 1, "symbol dimension must be >= 1");
    require(orders.psi > 0.0 && orders.e > 0.0, "symbol orders must be positive");
    require(p_psi_ && p_e_ && p_psie_, "all symbol components must be set");
  }

  int dimension() const noexcept { return dimension_; }
  SymbolOrders orders() const noexcept { return orders_; }

  double psi(std::span<const double> x, std::span<const double> theta) const {
    return p_psi_(x, theta);
  }
  double e(std::span<const double> omega, std::span<const double> xi) const {
    return p_e_(omega, xi);
  }
  double psie(std::span<const double> omega, std::span<const double> theta) const {
    return p_psie_(omega, theta);
  }

  /// Exchange the roles of variables and covariables.
  PrincipalSymbolTriple swapped() const {
    auto psi = p_psi_;
    auto e = p_e_;
    auto psie = p_psie_;
    return PrincipalSymbolTriple(
        dimension_,
        [e](std::span<const double> x, std::span<const double> theta) { return e(theta, x); },
        [psi](std::span<const double> omega, std::span<const double> xi) {
          return psi(xi, omega);
        },
        [psie](std::span<const double> omega, std::span<const double> theta) {
          return psie(theta, omega);
        },
        SymbolOrders{orders_.e, orders_.psi});
  }

 private:
  int dimension_;
  Component p_psi_;
  Component p_e_;
  Component p_psie_;
  SymbolOrders orders_;
};

/// Principal symbol of <x><D> on R^d, orders (1, 1).
inline PrincipalSymbolTriple model_symbol(int d) {
  require(d >= 1, "model_symbol: dimension must be >= 1");
  return PrincipalSymbolTriple(
      d,
      [](std::span<const double> x, std::span<const double>) { return japanese_bracket(x); },
      [](std::span<const double>, std::span<const double> xi) { return japanese_bracket(xi); },
      [](std::span<const double>, std::span<const double>) { return 1.0; },
      SymbolOrders{1.0, 1.0});
}

/// Symbol whose three components are the given constants. Used for checks
/// with hand-computable traces.
inline PrincipalSymbolTriple constant_symbol(int d, double psi, double e, double psie,
                                             SymbolOrders orders = {}) {
  return PrincipalSymbolTriple(
      d, [psi](std::span<const double>, std::span<const double>) { return psi; },
      [e](std::span<const double>, std::span<const double>) { return e; },
      [psie](std::span<const double>, std::span<const double>) { return psie; }, orders);
}

/// Generalized binomial coefficient C(a, j).
inline double binomial(double a, int j) {
  double c = 1.0;
  for (int i = 0; i < j; ++i) c *= (a - i) / (i + 1);
  return c;
}

/// Coefficient of |x|^{1-2j} |xi|^{1-2k} in the corner expansion of <x><xi>.
inline double corner_expansion_coeff(int j, int k) {
  require(j >= 0 && k >= 0, "corner_expansion_coeff: indices must be nonnegative");
  return binomial(0.5, j) * binomial(0.5, k);
}

/// Truncated corner expansion of <x><xi> in the radii |x|, |xi|, using
/// indices j < terms_x and k < terms_xi.
inline double corner_expansion(double abs_x, double abs_xi, int terms_x, int terms_xi) {
  double sum = 0.0;
  for (int j = 0; j < terms_x; ++j)
    for (int k = 0; k < terms_xi; ++k)
      sum += corner_expansion_coeff(j, k) * std::pow(abs_x, 1 - 2 * j) *
             std::pow(abs_xi, 1 - 2 * k);
  return sum;
}

/// Uniform point on S^{d-1} from normalized standard Gaussians.
template <typename Rng>
std::vector<double> sample_sphere(int d, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(d));
  double n = 0.0;
  do {
    for (double& c : v) c = gauss(rng);
    n = norm(v);
  } while (n == 0.0);
  for (double& c : v) c /= n;
  return v;
}

struct PositivityReport {
  std::size_t samples = 0;
  double min_psi = 0.0;
  double min_e = 0.0;
  double min_psie = 0.0;
  bool positive() const { return min_psi > 0.0 && min_e > 0.0 && min_psie > 0.0; }
};

/// Spot-checks ellipticity: evaluates every component at `samples` random
/// points with |x|, |xi| drawn log-uniformly in [1e-3, 1e3].
inline PositivityReport check_positivity(const PrincipalSymbolTriple& sym, std::size_t samples,
                                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_radius(-3.0 * std::log(10.0), 3.0 * std::log(10.0));
  const int d = sym.dimension();
  PositivityReport r{samples, INFINITY, INFINITY, INFINITY};
  for (std::size_t i = 0; i < samples; ++i) {
    auto omega = sample_sphere(d, rng);
    auto theta = sample_sphere(d, rng);
    auto x = omega;
    auto xi = theta;
    const double rx = std::exp(log_radius(rng));
    const double rxi = std::exp(log_radius(rng));
    for (double& c : x) c *= rx;
    for (double& c : xi) c *= rxi;
    r.min_psi = std::min(r.min_psi, sym.psi(x, theta));
    r.min_e = std::min(r.min_e, sym.e(omega, xi));
    r.min_psie = std::min(r.min_psie, sym.psie(omega, theta));
  }
  return r;
}

}  // namespace sgweyl
