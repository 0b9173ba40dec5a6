#pragma once
//
// Special functions needed by the closed-form Weyl coefficients.
//

#include <cmath>

#include "sgweyl/core.hpp"

namespace sgweyl {

/// vol(S^{d-1}) = 2 pi^{d/2} / Gamma(d/2). S^0 has counting measure 2.
inline double sphere_volume(int d) {
  require(d >= 1, "sphere_volume: dimension must be >= 1");
  return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
}

/// Digamma function Psi(x) = d/dx log Gamma(x) for x > 0.
///
/// Shifts x upward with Psi(x) = Psi(x + 1) - 1/x until x >= 10, then uses
/// the asymptotic series
///   Psi(x) ~ log x - 1/(2x) - sum_k B_{2k} / (2k x^{2k}),
/// truncated after x^{-14}; the truncation error at x >= 10 is below 1e-17.
inline double digamma(double x) {
  require(x > 0.0 && std::isfinite(x), "digamma: argument must be positive and finite");
  double shift = 0.0;
  while (x < 10.0) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  const double inv2 = 1.0 / (x * x);
  // B_{2k} / (2k) for k = 1..7
  const double series =
      inv2 * (1.0 / 12 -
              inv2 * (1.0 / 120 -
                      inv2 * (1.0 / 252 -
                              inv2 * (1.0 / 240 -
                                      inv2 * (1.0 / 132 -
                                              inv2 * (691.0 / 32760 - inv2 * (1.0 / 12)))))));
  return shift + std::log(x) - 0.5 / x - series;
}

}  // namespace sgweyl
