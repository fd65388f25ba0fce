#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "confgeo/configuration.hpp"
#include "confgeo/geometry.hpp"
#include "confgeo/smooth.hpp"
#include "confgeo/vec.hpp"

namespace confgeo {

/// Smooth vector field vanishing outside a ball, with coarse regularity data.
/// lipschitz_bound and sup_norm are either exact for the builders below or
/// estimated by sampling (estimate_field_bounds).
struct CompactVectorField {
  std::function<Vec(const Vec&)> eval;
  Ball support;
  double lipschitz_bound = 1.0;
  double sup_norm = 1.0;

  Vec operator()(const Vec& x) const { return eval(x); }
};

inline constexpr double kDefaultFlowStep = 1e-3;

/// V(x) = direction * plateau(|x - center|/radius); equals `direction` exactly
/// on the inner ball of radius flat*radius.
inline CompactVectorField constant_bump_field(Ball support, Vec direction, double flat = 0.5) {
  if (static_cast<int>(direction.size()) != support.dim())
    throw std::invalid_argument("confgeo: field direction dimension mismatch");
  const Vec c = support.center;
  const double r = support.radius;
  CompactVectorField v;
  v.support = support;
  v.eval = [c, r, flat, direction](const Vec& x) { return scaled(direction, plateau(dist(x, c) / r, flat)); };
  v.sup_norm = norm(direction);
  // slope of the plateau ramp, measured on the smooth step
  v.lipschitz_bound = 4.0 * v.sup_norm / (r * (1.0 - flat));
  return v;
}

/// V(x) = coeff * (x - center) * plateau(|x - center|/radius); linear with
/// slope coeff on the inner ball.
inline CompactVectorField linear_bump_field(Ball support, double coeff, double flat = 0.5) {
  const Vec c = support.center;
  const double r = support.radius;
  CompactVectorField v;
  v.support = support;
  v.eval = [c, r, flat, coeff](const Vec& x) {
    return scaled(sub(x, c), coeff * plateau(dist(x, c) / r, flat));
  };
  v.sup_norm = std::fabs(coeff) * r;
  v.lipschitz_bound = std::fabs(coeff) * (1.0 + 4.0 / (1.0 - flat));
  return v;
}

/// Pointwise sum; the support is a ball enclosing all terms.
inline CompactVectorField sum_field(std::vector<CompactVectorField> terms) {
  if (terms.empty()) throw std::invalid_argument("confgeo: sum_field needs at least one term");
  Ball hull = terms[0].support;
  for (const auto& t : terms) {
    const double need = dist(t.support.center, hull.center) + t.support.radius;
    hull.radius = std::max(hull.radius, need);
  }
  CompactVectorField v;
  v.support = hull;
  for (const auto& t : terms) {
    v.sup_norm = (&t == &terms[0]) ? t.sup_norm : v.sup_norm + t.sup_norm;
  }
  v.lipschitz_bound = 0;
  for (const auto& t : terms) v.lipschitz_bound += t.lipschitz_bound;
  auto parts = std::move(terms);
  v.eval = [parts](const Vec& x) {
    Vec r = parts[0].eval(x);
    for (std::size_t i = 1; i < parts.size(); ++i) axpy(r, 1.0, parts[i].eval(x));
    return r;
  };
  return v;
}

/// Refines sup_norm and lipschitz_bound by sampling point pairs in the support.
inline void estimate_field_bounds(CompactVectorField& v, int samples = 2000, std::uint64_t seed = 12345) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const int d = v.support.dim();
  double sup = 0, lip = 0;
  Vec prev_x, prev_val;
  for (int k = 0; k < samples; ++k) {
    Vec x = v.support.center;
    for (int i = 0; i < d; ++i) x[i] += v.support.radius * unif(rng);
    Vec val = v.eval(x);
    sup = std::max(sup, norm(val));
    if (k > 0) {
      const double dx = dist(x, prev_x);
      if (dx > 1e-9) lip = std::max(lip, dist(val, prev_val) / dx);
    }
    prev_x = std::move(x);
    prev_val = std::move(val);
  }
  v.sup_norm = std::max(sup, 1e-12);
  v.lipschitz_bound = std::max(lip, 1e-12);
}

/// Fixed-step classical RK4 solution of xdot = V(x) at time t (t may be
/// negative). Throws std::domain_error if the field evaluates non-finite.
inline Vec flow_point(const CompactVectorField& v, Vec x, double t, double step = kDefaultFlowStep) {
  if (!(step > 0)) throw std::invalid_argument("confgeo: flow step must be positive");
  if (t == 0.0) return x;
  const int steps = std::max(1, static_cast<int>(std::ceil(std::fabs(t) / step)));
  const double h = t / steps;
  Vec k1, k2, k3, k4, y;
  for (int s = 0; s < steps; ++s) {
    k1 = v.eval(x);
    y = x;
    axpy(y, 0.5 * h, k1);
    k2 = v.eval(y);
    y = x;
    axpy(y, 0.5 * h, k2);
    k3 = v.eval(y);
    y = x;
    axpy(y, h, k3);
    k4 = v.eval(y);
    for (std::size_t i = 0; i < x.size(); ++i)
      x[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!all_finite(x)) throw std::domain_error("confgeo: flow left the finite domain");
  }
  return x;
}

/// Moves every point of gamma along the flow of V for time t.
inline Configuration pushforward(const CompactVectorField& v, const Configuration& gamma, double t,
                                 double step = kDefaultFlowStep) {
  Configuration out = gamma;
  for (Vec& p : out.points) p = flow_point(v, p, t, step);
  return out;
}

/// ||V||_gamma^2 = sum over points of |V(x)|^2.
inline double tangent_norm_sq(const CompactVectorField& v, const Configuration& gamma) {
  double s = 0;
  for (const Vec& p : gamma.points) s += norm_sq(v.eval(p));
  return s;
}

inline double tangent_norm(const CompactVectorField& v, const Configuration& gamma) {
  return std::sqrt(tangent_norm_sq(v, gamma));
}

}  // namespace confgeo
