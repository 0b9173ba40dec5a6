#pragma once
//
// Shared error types, constants and small vector helpers.
//

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgweyl {

/// Euler-Mascheroni constant, 20 significant digits.
inline constexpr double kEulerGamma = 0.57721566490153286061;

inline constexpr double kPi = std::numbers::pi;

/// Base of all library errors. `exit_code()` follows the CLI taxonomy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept = 0;
};

/// A precondition on user input was violated.
class ValidationError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

/// A numerical procedure failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

/// Least-squares design matrix is numerically rank deficient.
class RankDeficientError : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

class IoError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 4; }
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

/// <z> = sqrt(1 + |z|^2)
inline double japanese_bracket(std::span<const double> z) {
  return std::sqrt(1.0 + dot(z, z));
}

inline void normalize(std::span<double> a) {
  const double n = norm(a);
  if (!(n > 0.0)) throw ValidationError("cannot normalize a zero vector");
  for (double& v : a) v /= n;
}

}  // namespace sgweyl
