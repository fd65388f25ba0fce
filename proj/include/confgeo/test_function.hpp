#pragma once

#include <functional>
#include <utility>

#include "confgeo/geometry.hpp"
#include "confgeo/smooth.hpp"
#include "confgeo/vec.hpp"

namespace confgeo {

/// Smooth compactly supported scalar test function with its gradient.
struct CompactTestFunction {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  Ball support;

  double operator()(const Vec& x) const { return value(x); }
};

/// amplitude * bump(|x - center| / radius); peak value = amplitude.
inline CompactTestFunction bump_test_function(Ball support, double amplitude = 1.0) {
  const Vec c = support.center;
  const double r = support.radius;
  CompactTestFunction f;
  f.support = support;
  f.value = [c, r, amplitude](const Vec& x) { return amplitude * bump(dist(x, c) / r); };
  f.gradient = [c, r, amplitude](const Vec& x) {
    const double d = dist(x, c);
    Vec g = zeros(static_cast<int>(x.size()));
    if (d == 0.0 || d >= r) return g;
    const double scale = amplitude * bump_derivative(d / r) / (r * d);
    axpy(g, scale, sub(x, c));
    return g;
  };
  return f;
}

}  // namespace confgeo
