#pragma once
//
// Log-polyhomogeneous Weyl fits, partial zeta sums and the Laurent
// dictionary between the two.
//
// A fit with exponent a = d/m models
//   N(lambda) ~ sum_{k, j} w_{jk} lambda^{a - k} (log lambda)^j,
// k = 0 (leading level) and optionally k = 1; j in {0, 1}.
//

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sgweyl/core.hpp"

namespace sgweyl {

/// Basis function lambda^{a - k} (log lambda)^j.
struct BasisTag {
  int k = 0;
  int j = 0;
  friend auto operator<=>(const BasisTag&, const BasisTag&) = default;
};

inline std::string key(BasisTag t) {
  return "w_" + std::to_string(t.j) + "_" + std::to_string(t.k);
}

struct FitPoint {
  double lambda = 0.0;
  double count = 0.0;
};

struct WeylFit {
  double d_over_m = 1.0;
  std::map<BasisTag, double> coefficients;
  double window_min = 0.0;
  double window_max = 0.0;
  double residual_sup = 0.0;
  double condition = 0.0;  // 2-norm condition number of the column-scaled design
  int n_points = 0;

  std::optional<double> coefficient(int j, int k) const {
    auto it = coefficients.find({k, j});
    if (it == coefficients.end()) return std::nullopt;
    return it->second;
  }

  double evaluate(double lambda) const {
    double sum = 0.0;
    for (const auto& [tag, w] : coefficients)
      sum += w * basis_value(tag, lambda);
    return sum;
  }

  double basis_value(BasisTag tag, double lambda) const {
    return std::pow(lambda, d_over_m - tag.k) * (tag.j == 1 ? std::log(lambda) : 1.0);
  }
};

/// Standard basis: level 0 is {lambda^a log lambda, lambda^a}, level 1 adds
/// {lambda^{a-1} log lambda, lambda^{a-1}}.
inline std::vector<BasisTag> weyl_basis(int n_levels) {
  require(n_levels == 1 || n_levels == 2, "number of levels must be 1 or 2");
  std::vector<BasisTag> tags = {{0, 1}, {0, 0}};
  if (n_levels == 2) {
    tags.push_back({1, 1});
    tags.push_back({1, 0});
  }
  return tags;
}

inline constexpr double kMaxCondition = 1e12;

/// Weighted least squares in an explicit basis. Columns are scaled by their
/// sup norm before an SVD solve; the condition number of the scaled design
/// is reported.
inline WeylFit fit_weyl_basis(std::span<const FitPoint> points, double d_over_m,
                              std::span<const BasisTag> basis,
                              std::span<const double> weights = {}) {
  require(d_over_m > 0.0, "fit exponent d/m must be positive");
  require(!basis.empty(), "fit basis must not be empty");
  require(points.size() >= 4 * basis.size(), "need at least 4 points per fitted coefficient");
  require(weights.empty() || weights.size() == points.size(), "one weight per point required");
  for (auto t : basis)
    require(t.k >= 0 && t.k <= 1 && (t.j == 0 || t.j == 1), "basis tags must have k, j in {0, 1}");

  WeylFit fit;
  fit.d_over_m = d_over_m;
  fit.n_points = static_cast<int>(points.size());
  fit.window_min = INFINITY;
  fit.window_max = -INFINITY;
  for (const auto& p : points) {
    require(p.lambda > 1.0 && std::isfinite(p.lambda), "fit points need lambda > 1");
    fit.window_min = std::min(fit.window_min, p.lambda);
    fit.window_max = std::max(fit.window_max, p.lambda);
  }
  require(fit.window_min < fit.window_max, "fit window is empty");

  const Eigen::Index rows = static_cast<Eigen::Index>(points.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd design(rows, cols);
  Eigen::VectorXd rhs(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double sw = weights.empty() ? 1.0 : std::sqrt(weights[i]);
    for (Eigen::Index c = 0; c < cols; ++c)
      design(i, c) = sw * fit.basis_value(basis[c], points[i].lambda);
    rhs(i) = sw * points[i].count;
  }
  Eigen::VectorXd scale(cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    scale(c) = design.col(c).cwiseAbs().maxCoeff();
    require(scale(c) > 0.0, "fit basis column vanishes on the window");
    design.col(c) /= scale(c);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  fit.condition = sv(0) / sv(cols - 1);
  if (!(sv(cols - 1) > 0.0) || fit.condition > kMaxCondition)
    throw RankDeficientError("fit design is rank deficient (condition " +
                             std::to_string(fit.condition) + "); widen the window");
  const Eigen::VectorXd solution = svd.solve(rhs);
  for (Eigen::Index c = 0; c < cols; ++c) fit.coefficients[basis[c]] = solution(c) / scale(c);

  for (const auto& p : points)
    fit.residual_sup = std::max(fit.residual_sup, std::abs(fit.evaluate(p.lambda) - p.count));
  return fit;
}

inline WeylFit fit_log_weyl(std::span<const FitPoint> points, double d_over_m, int n_levels) {
  const auto basis = weyl_basis(n_levels);
  return fit_weyl_basis(points, d_over_m, basis);
}

/// Counting-function samples at midpoints between consecutive eigenvalues,
/// where N is unambiguous: N((l_i + l_{i+1}) / 2) = i + 1 (0-based i).
/// Uses indices first <= i < last - 1.
inline std::vector<FitPoint> midpoint_samples(std::span<const double> eigenvalues,
                                              std::size_t first, std::size_t last) {
  require(first <= last && last <= eigenvalues.size(), "midpoint_samples: bad index range");
  std::vector<FitPoint> out;
  for (std::size_t i = first; i + 1 < last; ++i) {
    if (eigenvalues[i + 1] == eigenvalues[i]) continue;
    out.push_back({0.5 * (eigenvalues[i] + eigenvalues[i + 1]), static_cast<double>(i + 1)});
  }
  return out;
}

/// Default window: the upper two thirds of the given (trusted) eigenvalues.
inline std::vector<FitPoint> default_fit_points(std::span<const double> trusted) {
  return midpoint_samples(trusted, trusted.size() / 3, trusted.size());
}

/// Points whose lambda lies in [lo, hi].
inline std::vector<FitPoint> restrict_window(std::span<const FitPoint> points, double lo,
                                             double hi) {
  std::vector<FitPoint> out;
  for (const auto& p : points)
    if (p.lambda >= lo && p.lambda <= hi) out.push_back(p);
  return out;
}

// ---------------------------------------------------------------------------
// Zeta function

namespace detail {
/// int_{cut}^inf lambda^{-s} d(lambda^a (log lambda)^j), for s > a.
inline double tail_integral(double a, int j, double s, double cut) {
  const double b = s - a;
  const double base = std::pow(cut, -b);
  if (j == 0) return a * base / b;
  const double lg = std::log(cut);
  return a * base * (lg / b + 1.0 / (b * b)) + base / b;
}
}  // namespace detail

/// Partial sum sum_j lambda_j^{-s} over the given eigenvalues, plus, when a
/// fit is given, the tail int_{lambda_last}^inf lambda^{-s} dN_fit(lambda).
/// `abscissa` is the convergence abscissa; with a fit it defaults to d/m.
inline double zeta_partial(std::span<const double> eigenvalues, double s,
                           std::optional<double> abscissa, const WeylFit* tail = nullptr) {
  require(abscissa || tail, "zeta_partial: convergence abscissa unknown");
  const double a = abscissa.value_or(tail ? tail->d_over_m : 0.0);
  require(s > a, "zeta_partial: s = " + std::to_string(s) +
                     " is not above the convergence abscissa " + std::to_string(a));
  double sum = 0.0;
  // smallest terms first
  for (auto it = eigenvalues.rbegin(); it != eigenvalues.rend(); ++it) sum += std::pow(*it, -s);
  if (tail) {
    require(s > tail->d_over_m, "zeta_partial: s must exceed the fit exponent for the tail");
    require(!eigenvalues.empty(), "zeta_partial: tail needs at least one eigenvalue");
    const double cut = eigenvalues.back();
    for (const auto& [tag, w] : tail->coefficients)
      sum += w * detail::tail_integral(tail->d_over_m - tag.k, tag.j, s, cut);
  }
  return sum;
}

struct LaurentData {
  int k = 0;
  double A2 = 0.0;
  double A1 = 0.0;
};

/// Laurent coefficients of zeta at s = d - k from the Weyl coefficients:
///   A_{2,k} = (d - k) w_{1k},   A_{1,k} = w_{1k} + (d - k) w_{0k}.
inline LaurentData laurent_from_weyl(const WeylFit& fit, int d, int k) {
  require(d >= 1, "laurent_from_weyl: dimension must be >= 1");
  require(k == 0 || k == 1, "laurent_from_weyl: level must be 0 or 1");
  const auto w1 = fit.coefficient(1, k);
  const auto w0 = fit.coefficient(0, k);
  require(w1.has_value() && w0.has_value(),
          "laurent_from_weyl: fit lacks the level-" + std::to_string(k) + " coefficients");
  const double dk = d - k;
  return {k, dk * *w1, *w1 + dk * *w0};
}

/// Diagnostic only: fits (s - a)^2 zeta(s) ~ A2 + A1 (s - a) + c (s - a)^2
/// on a mesh of s values above a.
template <typename Zeta>
LaurentData laurent_diagnostic(Zeta&& zeta, double a, std::span<const double> offsets, int k = 0) {
  require(offsets.size() >= 3, "laurent_diagnostic: need at least 3 mesh points");
  Eigen::MatrixXd design(static_cast<Eigen::Index>(offsets.size()), 3);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(offsets.size()));
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    const double e = offsets[i];
    require(e > 0.0, "laurent_diagnostic: offsets must be positive");
    design.row(static_cast<Eigen::Index>(i)) << 1.0, e, e * e;
    rhs(static_cast<Eigen::Index>(i)) = e * e * zeta(a + e);
  }
  const Eigen::Vector3d c = design.colPivHouseholderQr().solve(rhs);
  return {k, c(0), c(1)};
}

struct PoleCandidate {
  double s = 0.0;
  int max_order = 1;
};

/// Candidate poles (d - j)/m_psi and (d - k)/m_e, j, k < count, sorted in
/// decreasing s; order 2 where the two families coincide.
inline std::vector<PoleCandidate> pole_locations(int d, double m_psi, double m_e, int count) {
  require(d >= 1, "pole_locations: dimension must be >= 1");
  require(m_psi > 0.0 && m_e > 0.0, "pole_locations: orders must be positive");
  require(count >= 1, "pole_locations: count must be >= 1");
  std::vector<double> psi, e;
  for (int j = 0; j < count; ++j) {
    psi.push_back((d - j) / m_psi);
    e.push_back((d - j) / m_e);
  }
  auto same = [](double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
  };
  std::vector<PoleCandidate> out;
  auto add = [&](double s, int order) {
    for (auto& p : out)
      if (same(p.s, s)) {
        p.max_order = std::max(p.max_order, order);
        return;
      }
    out.push_back({s, order});
  };
  for (double a : psi) {
    bool coincident = std::any_of(e.begin(), e.end(), [&](double b) { return same(a, b); });
    add(a, coincident ? 2 : 1);
  }
  for (double b : e) {
    bool coincident = std::any_of(psi.begin(), psi.end(), [&](double a) { return same(a, b); });
    add(b, coincident ? 2 : 1);
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.s > y.s; });
  return out;
}

}  // namespace sgweyl
