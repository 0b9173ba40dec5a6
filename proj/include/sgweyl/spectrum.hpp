#pragma once
//
// Finite-difference spectra of Q = (1 + |x|^2)(1 - Delta) on R^d, d = 1, 2.
//
// The eigenproblem Q u = lambda u is solved as the symmetric-definite pencil
//   a(u, v) = int (c0 u v + grad u . grad v) dx,   m(u, v) = int w u v dx
// with c0 = 1, w = <x>^{-2}, on a Dirichlet box [-L, L]^d. The discrete
// pencil (K, M) with diagonal M is reduced to the symmetric matrix
//   A = M^{-1/2} K M^{-1/2},
// which on a uniform grid is exactly <x> (1 - Delta_h) <x>.
//
// A sinh-mapped grid x = sinh(y), uniform in y, is also available. It
// resolves the hyperbolic classical region <x><xi> <= mu with O(log mu)
// points per wavelength budget instead of O(mu), and is the mapping that
// certifies several hundred eigenvalues in d = 1.
//
// Test operators replace (c0, w): `unit_weight` gives 1 - Delta and
// `harmonic` gives -Delta + |x|^2.
//

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <lapacke.h>

#include "sgweyl/core.hpp"

namespace sgweyl {

enum class Mapping { uniform, sinh };
enum class OperatorKind { model, unit_weight, harmonic };

inline std::string to_string(Mapping m) { return m == Mapping::uniform ? "uniform" : "sinh"; }
inline std::string to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::model: return "model";
    case OperatorKind::unit_weight: return "unit_weight";
    case OperatorKind::harmonic: return "harmonic";
  }
  return "?";
}
inline Mapping parse_mapping(const std::string& s) {
  if (s == "uniform") return Mapping::uniform;
  if (s == "sinh") return Mapping::sinh;
  throw ValidationError("unknown mapping '" + s + "' (expected uniform or sinh)");
}
inline OperatorKind parse_operator(const std::string& s) {
  if (s == "model") return OperatorKind::model;
  if (s == "unit_weight") return OperatorKind::unit_weight;
  if (s == "harmonic") return OperatorKind::harmonic;
  throw ValidationError("unknown operator '" + s + "' (expected model, unit_weight or harmonic)");
}

struct DiscretizationConfig {
  int dimension = 1;
  double half_width = 12.0;  // L, in x units for both mappings
  int grid_points = 256;     // interior points per axis
  int scheme_order = 2;
  Mapping mapping = Mapping::uniform;
  OperatorKind op = OperatorKind::model;

  friend bool operator==(const DiscretizationConfig&, const DiscretizationConfig&) = default;
};

inline void validate(const DiscretizationConfig& cfg) {
  require(cfg.dimension == 1 || cfg.dimension == 2,
          "discretization supports dimension 1 or 2 only");
  require(cfg.half_width > 0.0 && std::isfinite(cfg.half_width), "half-width L must be positive");
  require(cfg.grid_points >= 8, "grid needs at least 8 points per axis");
  require(cfg.scheme_order == 2 || cfg.scheme_order == 4, "scheme order must be 2 or 4");
  require(cfg.scheme_order == 2 || cfg.mapping == Mapping::uniform,
          "the fourth-order scheme is available on the uniform mapping only");
}

/// For the model operator an eigenfunction with eigenvalue lambda of Q
/// concentrates in <x> <= sqrt(lambda). The box is accepted for a window
/// reaching lambda_max when <L> >= 2 sqrt(lambda_max).
inline void check_confinement(const DiscretizationConfig& cfg, double lambda_max) {
  if (cfg.op != OperatorKind::model) return;
  const double bracket = std::sqrt(1.0 + cfg.half_width * cfg.half_width);
  if (bracket < 2.0 * std::sqrt(lambda_max))
    throw ValidationError("confinement violated: <L> = " + std::to_string(bracket) +
                          " < 2 sqrt(lambda_max) = " + std::to_string(2.0 * std::sqrt(lambda_max)) +
                          "; increase --half-width to at least " +
                          std::to_string(std::sqrt(std::max(0.0, 4.0 * lambda_max - 1.0))));
}

namespace detail {

struct Axis {
  int n = 0;
  double h = 0.0;
  std::vector<double> x;       // physical coordinate at nodes
  std::vector<double> jac;     // dx/dy at nodes
  std::vector<double> jac_half;  // dx/dy at the n+1 half points
};

inline Axis make_axis(const DiscretizationConfig& cfg) {
  Axis a;
  a.n = cfg.grid_points;
  const double y_max = cfg.mapping == Mapping::sinh ? std::asinh(cfg.half_width) : cfg.half_width;
  a.h = 2.0 * y_max / (a.n + 1);
  for (int i = 0; i < a.n; ++i) {
    const double y = -y_max + (i + 1) * a.h;
    a.x.push_back(cfg.mapping == Mapping::sinh ? std::sinh(y) : y);
    a.jac.push_back(cfg.mapping == Mapping::sinh ? std::cosh(y) : 1.0);
  }
  for (int k = 0; k <= a.n; ++k) {
    const double y = -y_max + (k + 0.5) * a.h;
    a.jac_half.push_back(cfg.mapping == Mapping::sinh ? std::cosh(y) : 1.0);
  }
  return a;
}

inline double potential(OperatorKind op, double r2) {
  return op == OperatorKind::harmonic ? r2 : 1.0;
}
inline double inverse_weight(OperatorKind op, double r2) {
  return op == OperatorKind::model ? 1.0 + r2 : 1.0;
}

struct Pencil {
  std::vector<Eigen::Triplet<double>> stiffness;  // upper triangle incl. diagonal
  std::vector<double> scale;                      // M^{-1/2}
  std::vector<double> mass;
  int size = 0;
};

inline Pencil assemble_pencil(const DiscretizationConfig& cfg) {
  validate(cfg);
  const Axis ax = make_axis(cfg);
  const int n = ax.n;
  const double h2 = ax.h * ax.h;
  Pencil p;
  if (cfg.dimension == 1) {
    p.size = n;
    for (int i = 0; i < n; ++i) {
      const double r2 = ax.x[i] * ax.x[i];
      double diag = potential(cfg.op, r2) * ax.jac[i];
      if (cfg.scheme_order == 2) {
        diag += (1.0 / ax.jac_half[i] + 1.0 / ax.jac_half[i + 1]) / h2;
        if (i + 1 < n) p.stiffness.emplace_back(i, i + 1, -1.0 / (ax.jac_half[i + 1] * h2));
      } else {
        // odd reflection u_{-1} = -u_1 at the Dirichlet wall keeps fourth order
        diag += (30.0 - (i == 0) - (i == n - 1)) / (12.0 * h2);
        if (i + 1 < n) p.stiffness.emplace_back(i, i + 1, -16.0 / (12.0 * h2));
        if (i + 2 < n) p.stiffness.emplace_back(i, i + 2, 1.0 / (12.0 * h2));
      }
      p.stiffness.emplace_back(i, i, diag);
      p.mass.push_back(ax.jac[i] / inverse_weight(cfg.op, r2));
      p.scale.push_back(std::sqrt(inverse_weight(cfg.op, r2) / ax.jac[i]));
    }
    return p;
  }
  p.size = n * n;
  auto index = [n](int i, int j) { return i + n * j; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int row = index(i, j);
      const double r2 = ax.x[i] * ax.x[i] + ax.x[j] * ax.x[j];
      const double jac = ax.jac[i] * ax.jac[j];
      double diag = potential(cfg.op, r2) * jac;
      if (cfg.scheme_order == 2) {
        diag += (ax.jac[j] * (1.0 / ax.jac_half[i] + 1.0 / ax.jac_half[i + 1]) +
                 ax.jac[i] * (1.0 / ax.jac_half[j] + 1.0 / ax.jac_half[j + 1])) /
                h2;
        if (i + 1 < n)
          p.stiffness.emplace_back(row, index(i + 1, j), -ax.jac[j] / (ax.jac_half[i + 1] * h2));
        if (j + 1 < n)
          p.stiffness.emplace_back(row, index(i, j + 1), -ax.jac[i] / (ax.jac_half[j + 1] * h2));
      } else {
        diag += (60.0 - (i == 0) - (i == n - 1) - (j == 0) - (j == n - 1)) / (12.0 * h2);
        if (i + 1 < n) p.stiffness.emplace_back(row, index(i + 1, j), -16.0 / (12.0 * h2));
        if (i + 2 < n) p.stiffness.emplace_back(row, index(i + 2, j), 1.0 / (12.0 * h2));
        if (j + 1 < n) p.stiffness.emplace_back(row, index(i, j + 1), -16.0 / (12.0 * h2));
        if (j + 2 < n) p.stiffness.emplace_back(row, index(i, j + 2), 1.0 / (12.0 * h2));
      }
      p.stiffness.emplace_back(row, row, diag);
      p.mass.push_back(jac / inverse_weight(cfg.op, r2));
      p.scale.push_back(std::sqrt(inverse_weight(cfg.op, r2) / jac));
    }
  }
  return p;
}

}  // namespace detail

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Symmetric matrix A = M^{-1/2} K M^{-1/2}. Each off-diagonal value is
/// computed once and stored at (i, j) and (j, i), so A is exactly symmetric.
inline SparseMatrix assemble_model_matrix(const DiscretizationConfig& cfg) {
  const auto p = detail::assemble_pencil(cfg);
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(2 * p.stiffness.size());
  for (const auto& t : p.stiffness) {
    const double v = t.value() * p.scale[t.row()] * p.scale[t.col()];
    entries.emplace_back(t.row(), t.col(), v);
    if (t.row() != t.col()) entries.emplace_back(t.col(), t.row(), v);
  }
  SparseMatrix a(p.size, p.size);
  a.setFromTriplets(entries.begin(), entries.end());
  return a;
}

/// Non-symmetric direct discretization M^{-1} K, which on a uniform grid is
/// <x>^2 (1 - Delta_h). Similar to assemble_model_matrix(cfg).
inline SparseMatrix assemble_direct_matrix(const DiscretizationConfig& cfg) {
  const auto p = detail::assemble_pencil(cfg);
  std::vector<Eigen::Triplet<double>> entries;
  for (const auto& t : p.stiffness) {
    entries.emplace_back(t.row(), t.col(), t.value() / p.mass[t.row()]);
    if (t.row() != t.col()) entries.emplace_back(t.col(), t.row(), t.value() / p.mass[t.col()]);
  }
  SparseMatrix a(p.size, p.size);
  a.setFromTriplets(entries.begin(), entries.end());
  return a;
}

// ---------------------------------------------------------------------------
// Eigensolvers

/// Lowest `count` eigenvalues of a symmetric banded matrix (bandwidth 1 or 2
/// below the diagonal), via LAPACK bisection.
inline std::vector<double> banded_lowest(const SparseMatrix& a, int bandwidth, int count) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  if (count == 0) return {};
  std::vector<double> w(static_cast<std::size_t>(n));
  lapack_int found = 0;
  lapack_int info = 0;
  if (bandwidth == 1) {
    std::vector<double> diag(n), off(std::max<lapack_int>(n - 1, 1));
    for (lapack_int i = 0; i < n; ++i) diag[i] = a.coeff(i, i);
    for (lapack_int i = 0; i + 1 < n; ++i) off[i] = a.coeff(i + 1, i);
    lapack_int nsplit = 0;
    std::vector<lapack_int> iblock(n), isplit(n);
    info = LAPACKE_dstebz('I', 'E', n, 0.0, 0.0, 1, count, 0.0, diag.data(), off.data(), &found,
                          &nsplit, w.data(), iblock.data(), isplit.data());
  } else {
    const lapack_int ldab = bandwidth + 1;
    std::vector<double> ab(static_cast<std::size_t>(ldab) * n, 0.0);
    for (lapack_int j = 0; j < n; ++j)
      for (lapack_int k = 0; k <= bandwidth && j + k < n; ++k)
        ab[k + j * ldab] = a.coeff(j + k, j);
    std::vector<double> q(1), z(1);
    std::vector<lapack_int> ifail(n);
    info = LAPACKE_dsbevx(LAPACK_COL_MAJOR, 'N', 'I', 'L', n, bandwidth, ab.data(), ldab, q.data(),
                          1, 0.0, 0.0, 1, count, 2.0 * LAPACKE_dlamch('S'), &found, w.data(),
                          z.data(), 1, ifail.data());
  }
  if (info != 0 || found != count)
    throw ConvergenceError("banded eigensolver failed (info " + std::to_string(info) + ")");
  w.resize(static_cast<std::size_t>(count));
  std::sort(w.begin(), w.end());
  return w;
}

/// Lowest `count` eigenvalues of a sparse symmetric positive definite matrix
/// by block Lanczos on S = (A - shift)^{-1} with full reorthogonalization.
/// The block size 4 resolves eigenvalues of multiplicity up to 4, which the
/// square-box symmetries produce. Ritz pairs are accepted on their true
/// residual |S y - theta y| <= tol |theta|. Small matrices are solved densely.
inline std::vector<double> lanczos_lowest(const SparseMatrix& a, int count, double shift = 0.0,
                                          double tol = 1e-11) {
  const Eigen::Index n = a.rows();
  require(count >= 0 && count <= n, "lanczos_lowest: count exceeds matrix dimension");
  if (count == 0) return {};
  if (n <= 1500) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(a), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed");
    const auto& ev = es.eigenvalues();
    return std::vector<double>(ev.data(), ev.data() + count);
  }

  SparseMatrix shifted = a;
  if (shift != 0.0) {
    SparseMatrix id(n, n);
    id.setIdentity();
    shifted -= shift * id;
  }
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(shifted);
  if (ldlt.info() != Eigen::Success) throw ConvergenceError("shifted factorization failed");

  constexpr Eigen::Index kBlock = 4;
  Eigen::Index max_dim = std::min<Eigen::Index>(n, 2 * count + 64);
  while (true) {
    Eigen::MatrixXd v(n, max_dim), sv(n, max_dim);
    Eigen::Index built = 0;
    // appends w to the basis if it is not (numerically) in its span
    auto append = [&](Eigen::VectorXd w) {
      const double w0 = w.norm();
      for (int pass = 0; pass < 2; ++pass)
        w -= v.leftCols(built) * (v.leftCols(built).transpose() * w);
      const double wn = w.norm();
      if (built == max_dim || !(wn > 1e-10 * w0)) return false;
      v.col(built++) = w / wn;
      return true;
    };

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (Eigen::Index c = 0; c < kBlock; ++c) {
      Eigen::VectorXd w(n);
      for (Eigen::Index i = 0; i < n; ++i) w(i) = u(rng);
      append(std::move(w));
    }
    Eigen::Index block_begin = 0;
    bool invariant = false;
    while (block_begin < built) {
      const Eigen::Index block_end = built;
      for (Eigen::Index c = block_begin; c < block_end; ++c) sv.col(c) = ldlt.solve(v.col(c));
      if (built == max_dim) break;
      bool grew = false;
      for (Eigen::Index c = block_begin; c < block_end; ++c) grew = append(sv.col(c)) || grew;
      block_begin = block_end;
      if (!grew) invariant = built < max_dim;
    }

    Eigen::MatrixXd t = v.leftCols(built).transpose() * sv.leftCols(built);
    t = 0.5 * (t + t.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(t);
    if (ritz.info() != Eigen::Success) throw ConvergenceError("Ritz eigensolver failed");
    const auto& theta = ritz.eigenvalues();  // ascending; largest <-> lowest of A
    bool converged = built >= count;
    for (int i = 0; i < count && converged; ++i) {
      const Eigen::Index col = built - 1 - i;
      const Eigen::VectorXd y = ritz.eigenvectors().col(col);
      const double residual =
          (sv.leftCols(built) * y - theta(col) * (v.leftCols(built) * y)).norm();
      if (residual > tol * std::abs(theta(col))) converged = false;
    }
    if (converged) {
      std::vector<double> out;
      for (int i = 0; i < count; ++i) out.push_back(shift + 1.0 / theta(built - 1 - i));
      std::sort(out.begin(), out.end());
      return out;
    }
    if (invariant || max_dim >= n) throw ConvergenceError("Lanczos iteration did not converge");
    max_dim = std::min<Eigen::Index>(n, 2 * max_dim);
  }
}

/// Lowest `count` eigenvalues of the discretization described by cfg.
inline std::vector<double> discrete_eigenvalues(const DiscretizationConfig& cfg, int count) {
  validate(cfg);
  const auto a = assemble_model_matrix(cfg);
  require(count >= 0 && count <= a.rows(), "requested eigenvalue count exceeds matrix dimension");
  if (cfg.dimension == 1) return banded_lowest(a, cfg.scheme_order == 2 ? 1 : 2, count);
  return lanczos_lowest(a, count);
}

// ---------------------------------------------------------------------------
// Spectral data and counting

struct SpectralData {
  std::vector<double> eigenvalues;  // ascending
  DiscretizationConfig config;
  int trusted_count = 0;

  std::span<const double> trusted() const {
    return {eigenvalues.data(), static_cast<std::size_t>(trusted_count)};
  }
};

inline void validate(const SpectralData& s) {
  require(s.trusted_count >= 0 && s.trusted_count <= static_cast<int>(s.eigenvalues.size()),
          "trusted_count exceeds the number of eigenvalues");
  require(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()),
          "eigenvalues must be sorted ascending");
}

inline constexpr double kTrustTolerance = 1e-3;

/// Leading eigenvalues whose relative change between the coarse and refined
/// runs stays within tolerance.
inline int trusted_prefix(std::span<const double> coarse, std::span<const double> fine,
                          double tolerance = kTrustTolerance) {
  const std::size_t n = std::min(coarse.size(), fine.size());
  std::size_t k = 0;
  while (k < n && std::abs(coarse[k] - fine[k]) <= tolerance * std::abs(fine[k])) ++k;
  return static_cast<int>(k);
}

/// Eigenvalues on cfg, certified against the grid with twice the points per
/// axis and the same box.
inline SpectralData compute_spectrum(const DiscretizationConfig& cfg, int count) {
  validate(cfg);
  require(count >= 0, "count must be nonnegative");
  SpectralData out{{}, cfg, 0};
  if (count == 0) return out;
  out.eigenvalues = discrete_eigenvalues(cfg, count);
  auto refined = cfg;
  refined.grid_points = 2 * cfg.grid_points;
  const auto fine = discrete_eigenvalues(refined, count);
  out.trusted_count = trusted_prefix(out.eigenvalues, fine);
  return out;
}

/// #{ j : lambda_j < lambda } over a sorted list.
inline std::size_t count_below(std::span<const double> sorted, double lambda) {
  return static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), lambda) -
                                  sorted.begin());
}

/// Gaussian-smoothed counting function (N * rho_T)(lambda) with
/// rho_T(t) = T rho(T t), rho the standard normal density:
///   sum_j Phi(T (lambda - lambda_j)).
inline double smoothed_count(std::span<const double> eigenvalues, double width, double lambda) {
  require(width > 0.0, "smoothing width T must be positive");
  double sum = 0.0;
  for (double l : eigenvalues) sum += 0.5 * std::erfc(-width * (lambda - l) / std::sqrt(2.0));
  return sum;
}

namespace detail {
inline void check_window(const SpectralData& spec, double lambda) {
  if (spec.trusted_count == 0) {
    require(spec.eigenvalues.empty(), "spectrum has no trusted eigenvalues");
    return;
  }
  const double top = spec.eigenvalues[spec.trusted_count - 1];
  if (!(lambda <= top))
    throw ValidationError("query lambda = " + std::to_string(lambda) +
                          " lies beyond the trusted window (max " + std::to_string(top) + ")");
}
}  // namespace detail

/// N(lambda) = #{ j <= trusted_count : lambda_j < lambda }.
inline std::size_t counting_function(const SpectralData& spec, double lambda) {
  detail::check_window(spec, lambda);
  return count_below(spec.trusted(), lambda);
}

inline double smoothed_counting(const SpectralData& spec, double width, double lambda) {
  detail::check_window(spec, lambda);
  return smoothed_count(spec.trusted(), width, lambda);
}

/// Eigenvalues raised to a power, e.g. 0.5 maps the spectrum of Q to the
/// normalization of <x><D>.
inline std::vector<double> rescaled(std::span<const double> eigenvalues, double power) {
  std::vector<double> out;
  out.reserve(eigenvalues.size());
  for (double l : eigenvalues) out.push_back(std::pow(l, power));
  return out;
}

}  // namespace sgweyl
