#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "confgeo/geometry.hpp"
#include "confgeo/test_function.hpp"
#include "confgeo/vec.hpp"

namespace confgeo {

/// A finite point configuration in R^d; repeated points are allowed and count
/// with multiplicity.
struct Configuration {
  int dim = 1;
  std::vector<Vec> points;

  static Configuration empty(int dim) { return Configuration{dim, {}}; }

  static Configuration of(int dim, std::vector<Vec> pts) {
    Configuration g{dim, std::move(pts)};
    for (const Vec& p : g.points) {
      if (static_cast<int>(p.size()) != dim) throw std::invalid_argument("confgeo: point dimension mismatch");
      if (!all_finite(p)) throw std::invalid_argument("confgeo: non-finite point coordinate");
    }
    return g;
  }

  /// Convenience for d = 1.
  static Configuration line(std::vector<double> xs) {
    Configuration g{1, {}};
    g.points.reserve(xs.size());
    for (double x : xs) g.points.push_back(Vec{x});
    return g;
  }

  int size() const { return static_cast<int>(points.size()); }
  bool is_empty() const { return points.empty(); }

  /// True iff no point occurs twice.
  bool is_simple() const {
    std::vector<Vec> sorted = points;
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  }
};

inline bool same_point_multiset(const Configuration& a, const Configuration& b) {
  if (a.dim != b.dim || a.points.size() != b.points.size()) return false;
  std::vector<Vec> x = a.points, y = b.points;
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x == y;
}

inline Configuration restrict_to(const Configuration& gamma, const Region& region) {
  Configuration out = Configuration::empty(gamma.dim);
  for (const Vec& p : gamma.points)
    if (region.contains(p)) out.points.push_back(p);
  return out;
}

/// Number of points inside the region, with multiplicity.
inline int count_in(const Configuration& gamma, const Region& region) {
  int n = 0;
  for (const Vec& p : gamma.points)
    if (region.contains(p)) ++n;
  return n;
}

inline Configuration shift(const Configuration& gamma, const Vec& by) {
  if (static_cast<int>(by.size()) != gamma.dim) throw std::invalid_argument("confgeo: shift dimension mismatch");
  Configuration out = gamma;
  for (Vec& p : out.points) p = add(p, by);
  return out;
}

inline double integrate(const CompactTestFunction& f, const Configuration& gamma) {
  double s = 0;
  for (const Vec& p : gamma.points) s += f(p);
  return s;
}

/// Truncated comparison metric for the vague topology:
/// sum_{i<=n} 2^{-i} min(1, |<f_i,gamma> - <f_i,omega>|).
inline double vague_metric(const Configuration& gamma, const Configuration& omega,
                           const std::vector<CompactTestFunction>& fs) {
  if (fs.empty()) throw std::invalid_argument("confgeo: vague_metric needs at least one test function");
  double total = 0, w = 1;
  for (const CompactTestFunction& f : fs) {
    w *= 0.5;
    total += w * std::min(1.0, std::fabs(integrate(f, gamma) - integrate(f, omega)));
  }
  return total;
}

/// Counts per unit cube Q_r for r in [-N, N]^d; cubes with zero count are
/// omitted from the map.
inline std::map<LatticeCube, long> cube_counts(const Configuration& gamma, int n_box) {
  if (n_box < 0) throw std::invalid_argument("confgeo: cube_counts needs N >= 0");
  std::map<LatticeCube, long> counts;
  for (const Vec& p : gamma.points) {
    LatticeCube q = LatticeCube::containing(p);
    if (q.sup_norm() <= n_box) ++counts[q];
  }
  return counts;
}

struct TemperednessReport {
  bool ok = true;
  int first_violation = -1;  // smallest N violating the bound, -1 if none
  double lhs = 0, rhs = 0;   // sides at the first violation (or at N_max)
};

/// Checks sum_{r in Lambda_N} gamma(Q_r)^2 <= n^2 (2N+1)^d for all N <= N_max.
inline TemperednessReport temperedness_check(const Configuration& gamma, int n, int n_max) {
  if (n <= 0 || n_max < 0) throw std::invalid_argument("confgeo: temperedness_check needs n > 0, N_max >= 0");
  TemperednessReport rep;
  const std::map<LatticeCube, long> counts = cube_counts(gamma, n_max);
  for (int N = 0; N <= n_max; ++N) {
    double lhs = 0;
    for (const auto& [cube, c] : counts)
      if (cube.sup_norm() <= N) lhs += static_cast<double>(c) * static_cast<double>(c);
    const double rhs = static_cast<double>(n) * n * std::pow(2.0 * N + 1.0, gamma.dim);
    rep.lhs = lhs;
    rep.rhs = rhs;
    if (lhs > rhs) {
      rep.ok = false;
      rep.first_violation = N;
      return rep;
    }
  }
  return rep;
}

}  // namespace confgeo
