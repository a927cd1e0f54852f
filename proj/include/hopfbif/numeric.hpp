#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace hopfbif {

/// Absolute floor used by every mixed relative/absolute comparison.
inline constexpr double kScaleFloor = 1e-300;

/// Default absolute tolerance on algebraic residuals.
inline constexpr double kDefaultAbsTol = 1e-12;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// |a - b| <= rel * max(|a|, |b|, floor) or |a - b| <= abs.
inline bool nearly_equal(double a, double b, double rel, double abs = 0.0) {
  const double diff = std::fabs(a - b);
  if (diff <= abs) return true;
  return diff <= rel * std::max({std::fabs(a), std::fabs(b), kScaleFloor});
}

/// Real cube root, also defined for negative arguments.
inline double real_cbrt(double x) { return std::cbrt(x); }

/// Wraps an angle to [0, 2π).
inline double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0) t += kTwoPi;
  return t;
}

/// Smallest signed separation of two angles, in [-π, π].
inline double angle_diff(double a, double b) {
  double d = std::fmod(a - b, kTwoPi);
  if (d > kPi) d -= kTwoPi;
  if (d < -kPi) d += kTwoPi;
  return d;
}

/// Bisection on a bracketing interval [lo, hi] (f(lo) and f(hi) of opposite
/// sign). Stops when the bracket is narrower than `xtol` or after 200 halvings.
double bisect(const std::function<double(double)>& f, double lo, double hi, double xtol);

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double x);

/// Runs `fn(i)` for i in [0, n) over `threads` workers (0 = hardware concurrency).
/// Results are written by index, so output order is independent of scheduling.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace hopfbif
