#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "confgeo/configuration.hpp"
#include "confgeo/test_function.hpp"
#include "confgeo/vec.hpp"
#include "confgeo/vector_field.hpp"

namespace confgeo {

/// u(gamma) = F(<f_1,gamma>, ..., <f_n,gamma>) for a smooth bounded outer F
/// and compactly supported smooth inner functions.
struct CylinderFunction {
  std::vector<CompactTestFunction> inner;
  std::function<double(const Vec&)> outer;
  std::function<Vec(const Vec&)> outer_gradient;
  double outer_bound = 1.0;
  double outer_gradient_bound = 1.0;
};

/// F(s) = scale * tanh(w . s + b); smooth and bounded with exact gradient.
inline CylinderFunction tanh_cylinder(std::vector<CompactTestFunction> inner, Vec weights, double bias,
                                      double scale = 1.0) {
  if (weights.size() != inner.size()) throw std::invalid_argument("confgeo: one weight per inner function");
  CylinderFunction u;
  u.inner = std::move(inner);
  u.outer_bound = std::fabs(scale);
  u.outer_gradient_bound = std::fabs(scale) * norm(weights);
  u.outer = [weights, bias, scale](const Vec& s) { return scale * std::tanh(dot(weights, s) + bias); };
  u.outer_gradient = [weights, bias, scale](const Vec& s) {
    const double t = std::tanh(dot(weights, s) + bias);
    return scaled(weights, scale * (1.0 - t * t));
  };
  return u;
}

/// F(s) = exp(-(w . s)); bounded on the range actually attained when the inner
/// functions are nonnegative and w >= 0.
inline CylinderFunction exp_decay_cylinder(std::vector<CompactTestFunction> inner, Vec weights) {
  if (weights.size() != inner.size()) throw std::invalid_argument("confgeo: one weight per inner function");
  CylinderFunction u;
  u.inner = std::move(inner);
  u.outer_bound = 1.0;
  u.outer_gradient_bound = norm(weights);
  u.outer = [weights](const Vec& s) { return std::exp(-dot(weights, s)); };
  u.outer_gradient = [weights](const Vec& s) { return scaled(weights, -std::exp(-dot(weights, s))); };
  return u;
}

/// Inner sums (<f_1,gamma>, ..., <f_n,gamma>).
inline Vec inner_sums(const CylinderFunction& u, const Configuration& gamma) {
  Vec s(u.inner.size(), 0.0);
  for (std::size_t i = 0; i < u.inner.size(); ++i) s[i] = integrate(u.inner[i], gamma);
  return s;
}

inline double eval_cylinder(const CylinderFunction& u, const Configuration& gamma) {
  return u.outer(inner_sums(u, gamma));
}

/// Tangent vector at a configuration: one vector per point, in point order.
struct TangentVector {
  std::vector<Vec> at_points;

  double norm_sq() const {
    double s = 0;
    for (const Vec& v : at_points) s += confgeo::norm_sq(v);
    return s;
  }
  double norm() const { return std::sqrt(norm_sq()); }
};

/// Gradient of a cylinder function: at each point x of gamma,
/// sum_i dF_i(inner sums) * grad f_i(x).
inline TangentVector gradient_cylinder(const CylinderFunction& u, const Configuration& gamma) {
  const Vec s = inner_sums(u, gamma);
  const Vec df = u.outer_gradient(s);
  TangentVector grad;
  grad.at_points.reserve(gamma.points.size());
  for (const Vec& x : gamma.points) {
    Vec g = zeros(gamma.dim);
    for (std::size_t i = 0; i < u.inner.size(); ++i) axpy(g, df[i], u.inner[i].gradient(x));
    grad.at_points.push_back(std::move(g));
  }
  return grad;
}

/// <grad, V>_gamma = sum over points of grad(x) . V(x).
inline double pair_with_field(const TangentVector& grad, const CompactVectorField& v,
                              const Configuration& gamma) {
  if (grad.at_points.size() != gamma.points.size())
    throw std::invalid_argument("confgeo: tangent vector does not match the configuration");
  double s = 0;
  for (std::size_t i = 0; i < gamma.points.size(); ++i) s += dot(grad.at_points[i], v.eval(gamma.points[i]));
  return s;
}

}  // namespace confgeo
