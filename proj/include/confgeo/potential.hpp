#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "confgeo/configuration.hpp"
#include "confgeo/geometry.hpp"
#include "confgeo/smooth.hpp"
#include "confgeo/vec.hpp"

namespace confgeo {

/// Even two-body interaction phi(x) on displacement vectors: zero beyond
/// support_radius, +infinity strictly inside the hard core.
struct PairPotential {
  std::function<double(const Vec&)> value;
  double support_radius = 1.0;
  double hard_core_radius = 0.0;
  std::function<Vec(const Vec&)> gradient;  // may be empty

  double operator()(const Vec& dx) const { return value(dx); }
};

inline PairPotential zero_potential() {
  PairPotential p;
  p.support_radius = 1.0;
  p.value = [](const Vec&) { return 0.0; };
  p.gradient = [](const Vec& dx) { return zeros(static_cast<int>(dx.size())); };
  return p;
}

inline PairPotential hard_core_potential(double core_radius) {
  if (!(core_radius > 0)) throw std::invalid_argument("confgeo: hard core radius must be positive");
  PairPotential p;
  p.support_radius = core_radius;
  p.hard_core_radius = core_radius;
  p.value = [core_radius](const Vec& dx) {
    return norm(dx) < core_radius ? std::numeric_limits<double>::infinity() : 0.0;
  };
  return p;
}

/// Smooth repulsive-core / attractive-well potential
///   phi(x) = strength * (bump(|x|/r1) - well_ratio * bump(|x|/r2)),  r1 < r2,
/// optionally with a hard core. Compactly supported and smooth away from the
/// core, with an analytic gradient.
inline PairPotential smooth_well_potential(double strength, double r1, double r2, double well_ratio,
                                           double hard_core = 0.0) {
  if (!(0 < r1 && r1 < r2)) throw std::invalid_argument("confgeo: smooth well needs 0 < r1 < r2");
  if (hard_core < 0 || hard_core >= r1) throw std::invalid_argument("confgeo: hard core must lie in [0, r1)");
  PairPotential p;
  p.support_radius = r2;
  p.hard_core_radius = hard_core;
  p.value = [=](const Vec& dx) {
    const double r = norm(dx);
    if (r < hard_core) return std::numeric_limits<double>::infinity();
    return strength * (bump(r / r1) - well_ratio * bump(r / r2));
  };
  p.gradient = [=](const Vec& dx) {
    const double r = norm(dx);
    Vec g = zeros(static_cast<int>(dx.size()));
    if (r <= hard_core || r == 0.0 || r >= r2) return g;
    const double radial = strength * (bump_derivative(r / r1) / r1 - well_ratio * bump_derivative(r / r2) / r2);
    axpy(g, radial / r, dx);
    return g;
  };
  return p;
}

/// Conditional energy of gamma inside the region: the ordered double sum of
/// phi(x - y) over pairs of distinct points with x in the region. Pairs with
/// both endpoints inside are counted twice, mixed pairs once.
inline double conditional_energy(const Configuration& gamma, const Region& region, const PairPotential& phi) {
  const int n = gamma.size();
  double total = 0;
  for (int i = 0; i < n; ++i) {
    if (!region.contains(gamma.points[i])) continue;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double term = phi(sub(gamma.points[i], gamma.points[j]));
      if (!std::isfinite(term)) return std::numeric_limits<double>::infinity();
      total += term;
    }
  }
  return total;
}

/// Cross energy W(gamma1 | gamma2) = sum over cross pairs of phi(x - y).
inline double interaction_energy(const Configuration& gamma1, const Configuration& gamma2,
                                 const PairPotential& phi) {
  if (gamma1.dim != gamma2.dim) throw std::invalid_argument("confgeo: interaction energy dimension mismatch");
  double total = 0;
  for (const Vec& x : gamma1.points)
    for (const Vec& y : gamma2.points) {
      const double term = phi(sub(x, y));
      if (!std::isfinite(term)) return std::numeric_limits<double>::infinity();
      total += term;
    }
  return total;
}

struct BoundReport {
  double lhs = 0;
  double rhs = 0;
  bool holds = true;
};

/// Evaluates both sides of the quadratic lower bound
/// E_{Lambda_N}(gamma_{Lambda_N}) >= sum_r [A gamma(Q_r)^2 - B gamma(Q_r)]
/// for this particular configuration.
inline BoundReport superstability_report(const Configuration& gamma, int n_box, double a, double b,
                                         const PairPotential& phi) {
  if (!(a > 0) || b < 0) throw std::invalid_argument("confgeo: superstability needs A > 0, B >= 0");
  const Region window = Region::centered_box(gamma.dim, static_cast<double>(n_box));
  const Configuration inside = restrict_to(gamma, window);
  BoundReport rep;
  rep.lhs = conditional_energy(inside, window, phi);
  for (const auto& [cube, c] : cube_counts(inside, n_box)) {
    const double cd = static_cast<double>(c);
    rep.rhs += a * cd * cd - b * cd;
  }
  rep.holds = !(rep.lhs < rep.rhs - 1e-9 * (1.0 + std::fabs(rep.rhs)));
  return rep;
}

/// Union of unit lattice cubes, used for the lower-regularity diagnostic.
struct CubeUnion {
  std::set<LatticeCube> cubes;

  bool contains(const Vec& x) const { return cubes.count(LatticeCube::containing(x)) > 0; }
  bool disjoint_from(const CubeUnion& other) const {
    for (const auto& q : cubes)
      if (other.cubes.count(q)) return false;
    return true;
  }
};

/// Evaluates W(gamma_{L1} | gamma_{L2}) against the lower-regularity bound
/// -sum a(|r'-r''|_inf) gamma(Q_{r'}) gamma(Q_{r''}) for a decreasing a.
inline BoundReport lower_regularity_report(const Configuration& gamma, const CubeUnion& part1,
                                           const CubeUnion& part2, const std::function<double(int)>& decay,
                                           const PairPotential& phi) {
  if (!part1.disjoint_from(part2))
    throw std::invalid_argument("confgeo: lower regularity needs disjoint cube unions");
  Configuration g1 = Configuration::empty(gamma.dim), g2 = Configuration::empty(gamma.dim);
  for (const Vec& p : gamma.points) {
    if (part1.contains(p)) g1.points.push_back(p);
    else if (part2.contains(p)) g2.points.push_back(p);
  }
  BoundReport rep;
  rep.lhs = interaction_energy(g1, g2, phi);

  std::map<LatticeCube, long> c1, c2;
  for (const Vec& p : g1.points) ++c1[LatticeCube::containing(p)];
  for (const Vec& p : g2.points) ++c2[LatticeCube::containing(p)];
  double bound = 0;
  for (const auto& [q1, n1] : c1)
    for (const auto& [q2, n2] : c2)
      bound += decay(static_cast<int>(cube_distance(q1, q2))) * static_cast<double>(n1) * static_cast<double>(n2);
  rep.rhs = -bound;
  rep.holds = !(rep.lhs < rep.rhs - 1e-9 * (1.0 + std::fabs(rep.rhs)));
  return rep;
}

}  // namespace confgeo
