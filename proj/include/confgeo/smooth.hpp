#pragma once

#include <cmath>

namespace confgeo {

/// C-infinity bump profile with peak 1 at s=0 and support [-1,1]:
/// b(s) = exp(1 - 1/(1-s^2)) for |s| < 1, 0 otherwise.
inline double bump(double s) {
  const double s2 = s * s;
  if (s2 >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s2));
}

/// d/ds of bump().
inline double bump_derivative(double s) {
  const double s2 = s * s;
  if (s2 >= 1.0) return 0.0;
  const double q = 1.0 - s2;
  return bump(s) * (-2.0 * s / (q * q));
}

namespace detail {
inline double exp_ramp(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }
}  // namespace detail

/// C-infinity step: 0 for u <= 0, 1 for u >= 1, strictly increasing between.
inline double smooth_step(double u) {
  const double a = detail::exp_ramp(u);
  const double b = detail::exp_ramp(1.0 - u);
  return a / (a + b);
}

/// C-infinity plateau profile: 1 on [0, flat], 0 beyond 1 (s is |x|/radius).
inline double plateau(double s, double flat = 0.5) {
  s = std::fabs(s);
  if (s <= flat) return 1.0;
  if (s >= 1.0) return 0.0;
  return smooth_step((1.0 - s) / (1.0 - flat));
}

}  // namespace confgeo
