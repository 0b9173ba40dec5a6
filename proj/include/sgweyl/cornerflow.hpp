#pragma once
//
// Hamiltonian flow of the corner symbol |x||xi| on S^{d-1} x S^{d-1}.
//
// With omega = x/|x| and theta = xi/|xi| the flow reads
//   d/dt omega = -c omega + theta
//   d/dt theta = -omega + c theta,     c = <omega, theta> (conserved),
// which splits into d copies of the 2x2 system v' = A v, A = [[-c, 1], [-1, c]].
// A has eigenvalues +-i sqrt(1 - c^2), so every non-degenerate orbit is
// periodic with period 2 pi / sqrt(1 - c^2).
//

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "sgweyl/core.hpp"
#include "sgweyl/symbols.hpp"

namespace sgweyl {

/// Point (omega, theta) of the corner S^{d-1} x S^{d-1}.
class CornerState {
 public:
  static constexpr double kUnitTolerance = 1e-12;

  /// Validates unit length of both components.
  CornerState(std::vector<double> omega, std::vector<double> theta)
      : omega_(std::move(omega)), theta_(std::move(theta)) {
    require(!omega_.empty() && omega_.size() == theta_.size(),
            "CornerState: omega and theta must have the same positive dimension");
    require(std::abs(norm(omega_) - 1.0) <= kUnitTolerance &&
                std::abs(norm(theta_) - 1.0) <= kUnitTolerance,
            "CornerState: omega and theta must be unit vectors");
  }

  /// Normalizes both components first.
  static CornerState normalized(std::vector<double> omega, std::vector<double> theta) {
    require(omega.size() == theta.size(), "CornerState: dimension mismatch");
    normalize(omega);
    normalize(theta);
    return CornerState(std::move(omega), std::move(theta));
  }

  /// Does not check the unit-norm invariant. Numeric flow output only.
  static CornerState unchecked(std::vector<double> omega, std::vector<double> theta) {
    CornerState z;
    z.omega_ = std::move(omega);
    z.theta_ = std::move(theta);
    return z;
  }

  int dimension() const { return static_cast<int>(omega_.size()); }
  const std::vector<double>& omega() const { return omega_; }
  const std::vector<double>& theta() const { return theta_; }

 private:
  CornerState() = default;
  std::vector<double> omega_;
  std::vector<double> theta_;
};

/// Sup-norm distance over both components.
inline double distance(const CornerState& a, const CornerState& b) {
  double m = 0.0;
  for (int i = 0; i < a.dimension(); ++i) {
    m = std::max(m, std::abs(a.omega()[i] - b.omega()[i]));
    m = std::max(m, std::abs(a.theta()[i] - b.theta()[i]));
  }
  return m;
}

inline double conserved_angle(const CornerState& z) {
  return std::clamp(dot(z.omega(), z.theta()), -1.0, 1.0);
}

/// 1 - c^2 below this is treated as the degenerate case c = +-1.
inline constexpr double kDegenerateTolerance = 1e-14;

inline bool is_degenerate(double c) { return 1.0 - c * c <= kDegenerateTolerance; }

struct FlowVelocity {
  std::vector<double> d_omega;
  std::vector<double> d_theta;
};

inline FlowVelocity hamiltonian_rhs(const CornerState& z) {
  const double c = conserved_angle(z);
  FlowVelocity v{std::vector<double>(z.omega().size()), std::vector<double>(z.theta().size())};
  for (std::size_t i = 0; i < v.d_omega.size(); ++i) {
    v.d_omega[i] = -c * z.omega()[i] + z.theta()[i];
    v.d_theta[i] = -z.omega()[i] + c * z.theta()[i];
  }
  return v;
}

/// Exact flow: exp(tA) applied to each pair (omega_i, theta_i).
inline CornerState flow_closed(const CornerState& z, double t) {
  const double c = conserved_angle(z);
  const double one_minus_c2 = 1.0 - c * c;
  double a = 1.0, b = t;  // exp(tA) = a I + b A
  if (one_minus_c2 > 0.0) {
    const double w = std::sqrt(one_minus_c2);
    a = std::cos(t * w);
    b = std::sin(t * w) / w;
  }
  std::vector<double> omega(z.omega().size()), theta(z.theta().size());
  for (std::size_t i = 0; i < omega.size(); ++i) {
    const double o = z.omega()[i], th = z.theta()[i];
    omega[i] = a * o + b * (-c * o + th);
    theta[i] = a * th + b * (-o + c * th);
  }
  return CornerState::unchecked(std::move(omega), std::move(theta));
}

struct ReturnTime {
  double period = 0.0;
  bool fixed_point = false;  // c = +-1: stationary, period reported as 0
};

inline ReturnTime return_time(const CornerState& z) {
  const double c = conserved_angle(z);
  if (is_degenerate(c)) return {0.0, true};
  return {2.0 * kPi / std::sqrt(1.0 - c * c), false};
}

/// Adaptive Dormand-Prince 5(4) integration of the flow. The vector field
/// uses the conserved c of the start state: recomputing c from the current
/// state makes the unit-norm manifold unstable (|theta|^2 - 1 grows like
/// e^{2ct}). Norms and c along the solution are not re-imposed, so their
/// drift measures the integration error.
inline CornerState flow_numeric(const CornerState& z, double t, double tol = 1e-9) {
  require(tol > 0.0, "flow_numeric: tolerance must be positive");
  require(std::isfinite(t), "flow_numeric: time must be finite");
  const std::size_t d = z.omega().size();
  std::vector<double> state(2 * d);
  std::copy(z.omega().begin(), z.omega().end(), state.begin());
  std::copy(z.theta().begin(), z.theta().end(), state.begin() + d);
  if (t == 0.0) return z;

  const double c = conserved_angle(z);
  auto rhs = [d, c](const std::vector<double>& y, std::vector<double>& dy, double) {
    for (std::size_t i = 0; i < d; ++i) {
      dy[i] = -c * y[i] + y[d + i];
      dy[d + i] = -y[i] + c * y[d + i];
    }
  };
  namespace ode = boost::numeric::odeint;
  using stepper_type = ode::runge_kutta_dopri5<std::vector<double>>;
  const double dt0 = std::copysign(std::min(0.01, std::abs(t)), t);
  try {
    ode::integrate_adaptive(ode::make_controlled<stepper_type>(tol, tol), rhs, state, 0.0, t,
                            dt0);
  } catch (const std::exception& e) {
    throw ConvergenceError(std::string("flow_numeric: step size control failed: ") + e.what());
  }
  return CornerState::unchecked(std::vector<double>(state.begin(), state.begin() + d),
                                std::vector<double>(state.begin() + d, state.end()));
}

/// First return of the numeric flow to the start, searched near the closed
/// form period: the distance to the start is minimized by golden-section
/// search on [0.5 Pi, 1.5 Pi]. Returns 0 for fixed points.
inline double numeric_return_time(const CornerState& z, double tol = 1e-9) {
  const auto rt = return_time(z);
  if (rt.fixed_point) return 0.0;
  auto f = [&](double t) { return distance(flow_numeric(z, t, tol), z); };
  double lo = 0.5 * rt.period, hi = 1.5 * rt.period;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > 1e-7 * rt.period) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  return 0.5 * (lo + hi);
}

template <typename Rng>
CornerState sample_corner_state(int d, Rng& rng) {
  return CornerState(sample_sphere(d, rng), sample_sphere(d, rng));
}

struct MeasureEstimate {
  double fraction = 0.0;
  std::size_t samples = 0;
  std::size_t periodic = 0;
  std::size_t fixed_points = 0;  // counted as periodic (period 0)
};

/// Fraction of sampled states whose orbit returns to within `tol` of the
/// start at its candidate period t <= t_max.
///   sampler()           -> CornerState
///   flow(z, t)          -> CornerState
///   period_candidate(z) -> ReturnTime
template <typename Sampler, typename Flow, typename Period>
MeasureEstimate periodic_fraction(Sampler&& sampler, Flow&& flow, Period&& period_candidate,
                                  std::size_t n_samples, double t_max, double tol) {
  require(n_samples >= 1, "periodic_fraction: need at least one sample");
  require(tol > 0.0, "periodic_fraction: tolerance must be positive");
  require(t_max > 0.0, "periodic_fraction: t_max must be positive");
  MeasureEstimate m;
  m.samples = n_samples;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const CornerState z = sampler();
    const ReturnTime rt = period_candidate(z);
    if (rt.fixed_point) {
      ++m.fixed_points;
      ++m.periodic;
      continue;
    }
    if (rt.period > 0.0 && rt.period <= t_max && distance(flow(z, rt.period), z) <= tol)
      ++m.periodic;
  }
  m.fraction = static_cast<double>(m.periodic) / static_cast<double>(n_samples);
  return m;
}

/// Periodic-point fraction of the model corner flow under the uniform
/// product measure on S^{d-1} x S^{d-1}.
inline MeasureEstimate periodic_measure_estimate(int d, std::uint64_t seed, std::size_t n_samples,
                                                 double t_max = std::numeric_limits<double>::infinity(),
                                                 double tol = 1e-8) {
  require(d >= 1, "periodic_measure_estimate: dimension must be >= 1");
  std::mt19937_64 rng(seed);
  return periodic_fraction([&] { return sample_corner_state(d, rng); },
                           [](const CornerState& z, double t) { return flow_closed(z, t); },
                           [](const CornerState& z) { return return_time(z); }, n_samples, t_max,
                           tol);
}

}  // namespace sgweyl
