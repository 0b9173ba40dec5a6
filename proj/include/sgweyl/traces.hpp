#pragma once
//
// Trace coefficients of SG operators of order (m, m) and the logarithmic
// Weyl coefficients built from them.
//
// All corner and radial integrals carry the (2 pi)^{-d} normalization. The
// log-subtracted radial integrals are evaluated at a sequence of cut-offs
// tau and extrapolated to tau -> infinity in powers of tau^{-2}.
//

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "sgweyl/core.hpp"
#include "sgweyl/quadrature.hpp"
#include "sgweyl/special.hpp"
#include "sgweyl/symbols.hpp"

namespace sgweyl {

enum class TraceMethod { closed_form, quadrature };

struct TraceValue {
  double value = 0.0;
  double estimated_error = 0.0;
  TraceMethod method = TraceMethod::quadrature;
  std::optional<double> truncation;  // largest cut-off tau used, if any
};

struct QuadratureOptions {
  int base_level = 1;  // sphere rule level of the coarse evaluation
  int max_level = 4;   // refinement stops here
  double tolerance = 1e-10;
  int radial_nodes = 24;  // Gauss-Legendre nodes per radial panel
  std::vector<double> tau_sequence = {16, 32, 64, 128, 256, 512, 1024};
};

// ---------------------------------------------------------------------------
// Closed forms for P = <x><D>

inline double gamma2_closed(int d) {
  require(d >= 1, "gamma2_closed: dimension must be >= 1");
  const double v = sphere_volume(d);
  return v * v / std::pow(2.0 * kPi, d) / d;
}

inline double gamma1_closed(int d) {
  require(d >= 1, "gamma1_closed: dimension must be >= 1");
  const double v = sphere_volume(d);
  return v * v / std::pow(2.0 * kPi, d) *
         (digamma(0.5 * d) + kEulerGamma - 1.0 / (static_cast<double>(d) * d));
}

/// gamma_1 through the finite sums for Psi at integers and half integers.
inline double gamma1_finite_sum(int d) {
  require(d >= 1, "gamma1_finite_sum: dimension must be >= 1");
  const double v = sphere_volume(d);
  const double prefactor = v * v / std::pow(2.0 * kPi, d);
  const double inv_d2 = 1.0 / (static_cast<double>(d) * d);
  double sum = 0.0;
  if (d % 2 == 1) {
    for (int k = 1; k <= (d - 1) / 2; ++k) sum += 1.0 / (2 * k - 1);
    return -prefactor * (2.0 * std::log(2.0) + inv_d2 - 2.0 * sum);
  }
  for (int k = 1; k <= d / 2 - 1; ++k) sum += 1.0 / k;
  return -prefactor * (inv_d2 - sum);
}

// ---------------------------------------------------------------------------
// Quadrature

namespace detail {

inline double corner_integral(const PrincipalSymbolTriple& sym, int level, auto&& integrand) {
  const auto rule = sphere_rule(sym.dimension(), level);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    double inner = 0.0;
    for (std::size_t j = 0; j < rule.size(); ++j)
      inner += rule.weights[j] * integrand(sym.psie(rule.point(i), rule.point(j)));
    sum += rule.weights[i] * inner;
  }
  return sum / std::pow(2.0 * kPi, sym.dimension());
}

/// Evaluates the corner integral at increasing sphere levels until two
/// successive levels agree to `tolerance` (relative to max(1, |value|)).
inline TraceValue refined_corner(const PrincipalSymbolTriple& sym, const QuadratureOptions& opt,
                                 auto&& integrand) {
  double previous = corner_integral(sym, opt.base_level, integrand);
  // S^0 is integrated exactly
  if (sym.dimension() == 1) return {previous, 0.0, TraceMethod::quadrature, std::nullopt};
  for (int level = opt.base_level + 1; level <= opt.max_level; ++level) {
    const double current = corner_integral(sym, level, integrand);
    const double err = std::abs(current - previous);
    if (err <= opt.tolerance * std::max(1.0, std::abs(current)))
      return {current, err, TraceMethod::quadrature, std::nullopt};
    previous = current;
  }
  throw ConvergenceError("corner quadrature did not converge at the maximal sphere level");
}

/// Richardson table in h = tau^{-2} (Neville extrapolation to h = 0).
/// Returns the last diagonal entry and its distance to the previous one.
inline std::pair<double, double> extrapolate_tau(const std::vector<double>& taus,
                                                 const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i) h[i] = 1.0 / (taus[i] * taus[i]);
  std::vector<double> row = values;
  double last = values[n - 1];
  double prev = n > 1 ? values[n - 2] : values[0];
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t i = n - 1; i >= k; --i) {
      row[i] = row[i] + (row[i] - row[i - 1]) * h[i] / (h[i - k] - h[i]);
      if (i == k) break;
    }
    prev = last;
    last = row[n - 1];
  }
  return {last, std::abs(last - prev)};
}

/// Cut-off integrals
///   V(tau) = (2pi)^{-d} [ int_{S} int_{|xi| <= tau} p_e(omega, xi)^{-s}
///                        - log(tau) int_S int_S p_psie^{-s} ]
/// for every tau of the sequence, at one sphere level.
inline std::vector<double> truncated_e_integrals(const PrincipalSymbolTriple& sym, double s,
                                                 int level, const QuadratureOptions& opt) {
  const int d = sym.dimension();
  const auto rule = sphere_rule(d, level);
  const auto gl = gauss_legendre(opt.radial_nodes);

  // panel breakpoints: 0, 1, 2, 4, ... merged with the cut-offs
  const double tau_max = opt.tau_sequence.back();
  std::vector<double> breaks = {0.0};
  for (double b = 1.0; b < tau_max; b *= 2.0) breaks.push_back(b);
  for (double t : opt.tau_sequence) breaks.push_back(t);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  std::vector<double> xi(static_cast<std::size_t>(d));
  auto angular = [&](double r) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      double inner = 0.0;
      for (std::size_t j = 0; j < rule.size(); ++j) {
        const auto eta = rule.point(j);
        for (int c = 0; c < d; ++c) xi[c] = r * eta[c];
        inner += rule.weights[j] * std::pow(sym.e(rule.point(i), xi), -s);
      }
      sum += rule.weights[i] * inner;
    }
    return sum;
  };

  double corner = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i)
    for (std::size_t j = 0; j < rule.size(); ++j)
      corner += rule.weights[i] * rule.weights[j] *
                std::pow(sym.psie(rule.point(i), rule.point(j)), -s);

  const double norm = std::pow(2.0 * kPi, d);
  std::vector<double> out;
  double cumulative = 0.0;
  std::size_t next_tau = 0;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p], b = breaks[p + 1];
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    double panel = 0.0;
    for (int q = 0; q < opt.radial_nodes; ++q) {
      const double r = mid + half * gl.nodes[q];
      panel += gl.weights[q] * std::pow(r, d - 1) * angular(r);
    }
    cumulative += half * panel;
    while (next_tau < opt.tau_sequence.size() && opt.tau_sequence[next_tau] == b) {
      out.push_back((cumulative - std::log(b) * corner) / norm);
      ++next_tau;
    }
  }
  return out;
}

}  // namespace detail

/// TR = (2pi)^{-d} int_S int_S p_psie^{-s}.
inline TraceValue tr_corner(const PrincipalSymbolTriple& sym, double s,
                            const QuadratureOptions& opt = {}) {
  return detail::refined_corner(sym, opt, [s](double p) { return std::pow(p, -s); });
}

/// Log-subtracted xi-side trace: the tau -> infinity limit of
/// (2pi)^{-d} [ int_S int_{|xi|<=tau} p_e^{-s} - log(tau) int_S int_S p_psie^{-s} ].
/// `s` defaults to the dimension.
inline TraceValue wtr_e(const PrincipalSymbolTriple& sym, const QuadratureOptions& opt = {},
                        std::optional<double> s = std::nullopt) {
  const auto& taus = opt.tau_sequence;
  require(taus.size() >= 2, "wtr_e: need at least two cut-offs");
  require(taus.front() > 1.0, "wtr_e: cut-offs must exceed 1");
  for (std::size_t i = 1; i < taus.size(); ++i)
    require(taus[i] > taus[i - 1], "wtr_e: cut-offs must be increasing");
  const double exponent = s.value_or(sym.dimension());

  auto at_level = [&](int level) {
    const auto values = detail::truncated_e_integrals(sym, exponent, level, opt);
    return detail::extrapolate_tau(taus, values);
  };

  auto [value, extrap_err] = at_level(opt.base_level);
  double sphere_err = 0.0;
  if (sym.dimension() > 1) {
    const auto [fine, fine_extrap] = at_level(opt.base_level + 1);
    sphere_err = std::abs(fine - value);
    value = fine;
    extrap_err = fine_extrap;
  }
  const double err = extrap_err + sphere_err;
  if (!std::isfinite(value) || err > opt.tolerance * std::max(1.0, std::abs(value)))
    throw ConvergenceError("wtr_e: cut-off extrapolation did not converge (estimated error " +
                           std::to_string(err) + ")");
  return {value, err, TraceMethod::quadrature, taus.back()};
}

/// x-side mirror of wtr_e.
inline TraceValue wtr_psi(const PrincipalSymbolTriple& sym, const QuadratureOptions& opt = {},
                          std::optional<double> s = std::nullopt) {
  return wtr_e(sym.swapped(), opt, s);
}

/// (2pi)^{-d} int_S int_S p_psie^{-s} log(p_psie^{-s}).
inline TraceValue wtr_theta(const PrincipalSymbolTriple& sym, const QuadratureOptions& opt = {},
                            std::optional<double> s = std::nullopt) {
  const double exponent = s.value_or(sym.dimension());
  return detail::refined_corner(sym, opt, [exponent](double p) {
    const double q = std::pow(p, -exponent);
    return q * std::log(q);
  });
}

struct WeylCoefficients {
  TraceValue gamma2;
  TraceValue gamma1;
  TraceValue tr;
  TraceValue wtr_theta;
  TraceValue wtr_psi;
  TraceValue wtr_e;
};

/// Weyl coefficients gamma_2, gamma_1 of an operator of order (m, m) by
/// quadrature:
///   gamma_2 = TR / (m d)
///   gamma_1 = wTR_theta - wTR_psi - wTR_e - TR / d^2
/// with every trace taken of the power -d/m of the principal symbol.
inline WeylCoefficients gamma_coeffs_general(const PrincipalSymbolTriple& sym, double m,
                                             const QuadratureOptions& opt = {}) {
  const auto orders = sym.orders();
  require(m > 0.0, "gamma_coeffs_general: order must be positive");
  require(std::abs(orders.psi - m) <= 1e-12 * m && std::abs(orders.e - m) <= 1e-12 * m,
          "gamma_coeffs_general: requires m = m_psi = m_e");
  const int d = sym.dimension();
  const double s = d / m;

  WeylCoefficients c;
  c.tr = tr_corner(sym, s, opt);
  c.wtr_theta = wtr_theta(sym, opt, s);
  c.wtr_psi = wtr_psi(sym, opt, s);
  c.wtr_e = wtr_e(sym, opt, s);

  const double d2 = static_cast<double>(d) * d;
  c.gamma2 = {c.tr.value / (m * d), c.tr.estimated_error / (m * d), TraceMethod::quadrature,
              std::nullopt};
  c.gamma1 = {c.wtr_theta.value - c.wtr_psi.value - c.wtr_e.value - c.tr.value / d2,
              c.wtr_theta.estimated_error + c.wtr_psi.estimated_error +
                  c.wtr_e.estimated_error + c.tr.estimated_error / d2,
              TraceMethod::quadrature, c.wtr_e.truncation};
  return c;
}

}  // namespace sgweyl
