#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace levyheat {

using Vec = std::vector<double>;

inline constexpr double kPi = std::numbers::pi;

/// Base class for every error raised by the library.
class LevyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid model parameters or configuration keys.
class ConfigError : public LevyError {
 public:
  using LevyError::LevyError;
};

/// A quadrature or iteration did not reach its tolerance.
class NumericalError : public LevyError {
 public:
  NumericalError(const std::string& what, double achieved = NAN)
      : LevyError(what), achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

/// The exponential moment integral over |y| > 1 does not converge.
class DivergentMoment : public LevyError {
 public:
  using LevyError::LevyError;
};

/// Argument outside the range of a generalized inverse.
class OutOfRange : public LevyError {
 public:
  using LevyError::LevyError;
};

/// Grid too small or too coarse for the requested field.
class GridError : public LevyError {
 public:
  using LevyError::LevyError;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) {
  double big = 0.0;
  for (double v : a) big = std::max(big, std::abs(v));
  if (big == 0.0 || !std::isfinite(big)) return big;
  double s = 0.0;
  for (double v : a) s += (v / big) * (v / big);
  return big * std::sqrt(s);
}

inline Vec scaled(std::span<const double> a, double c) {
  Vec out(a.begin(), a.end());
  for (double& v : out) v *= c;
  return out;
}

/// Unit vector in direction `a`; throws on the zero vector.
inline Vec unit(std::span<const double> a) {
  const double n = norm(a);
  if (!(n > 0.0)) throw ConfigError("direction must be nonzero");
  return scaled(a, 1.0 / n);
}

/// Runs `body(i)` for i in [0, n) on up to `jobs` threads. Every index writes
/// its own output slot, so results do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  unsigned jobs = 0);

/// Default worker count (hardware concurrency, at least 1).
unsigned default_jobs();
void set_default_jobs(unsigned jobs);

}  // namespace levyheat
