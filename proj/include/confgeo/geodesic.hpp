#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "confgeo/configuration.hpp"
#include "confgeo/coupling.hpp"
#include "confgeo/vec.hpp"
#include "confgeo/vector_field.hpp"

namespace confgeo {

/// Displacement interpolation: point i of the result is (1-t) x_i + t y_i over
/// the matched pairs. Requires a perfect matching (no exits, full coverage).
inline Configuration interpolate(const Configuration& gamma, const Configuration& omega, const Matching& m,
                                 double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("confgeo: interpolation time must lie in [0,1]");
  if (gamma.dim != omega.dim) throw std::invalid_argument("confgeo: interpolate dimension mismatch");
  const int n = gamma.size();
  if (omega.size() != n || static_cast<int>(m.pairs.size()) != n || !m.exits.empty())
    throw std::invalid_argument("confgeo: interpolate needs a perfect matching");
  std::vector<char> gseen(n, 0), oseen(n, 0);
  for (const auto& [gi, oi] : m.pairs) {
    if (gi < 0 || gi >= n || oi < 0 || oi >= n || gseen[gi] || oseen[oi])
      throw std::invalid_argument("confgeo: interpolate needs a perfect matching");
    gseen[gi] = oseen[oi] = 1;
  }
  Configuration out = Configuration::empty(gamma.dim);
  out.points.reserve(n);
  for (const auto& [gi, oi] : m.pairs) {
    Vec p = scaled(gamma.points[gi], 1.0 - t);
    axpy(p, t, omega.points[oi]);
    out.points.push_back(std::move(p));
  }
  return out;
}

/// Order-preserving matching of two d=1 configurations of equal size; its cost
/// is the optimal transport cost on the line.
inline Matching monotone_matching_1d(const Configuration& gamma, const Configuration& omega) {
  if (gamma.dim != 1 || omega.dim != 1)
    throw std::invalid_argument("confgeo: monotone matching is for dimension 1");
  if (gamma.size() != omega.size())
    throw std::invalid_argument("confgeo: monotone matching needs equal point counts");
  const int n = gamma.size();
  std::vector<int> gi(n), oi(n);
  std::iota(gi.begin(), gi.end(), 0);
  std::iota(oi.begin(), oi.end(), 0);
  std::stable_sort(gi.begin(), gi.end(),
                   [&](int a, int b) { return gamma.points[a][0] < gamma.points[b][0]; });
  std::stable_sort(oi.begin(), oi.end(),
                   [&](int a, int b) { return omega.points[a][0] < omega.points[b][0]; });
  Matching m;
  for (int k = 0; k < n; ++k) m.pairs.emplace_back(gi[k], oi[k]);
  std::sort(m.pairs.begin(), m.pairs.end());
  for (const auto& [a, b] : m.pairs) m.squared_cost += dist_sq(gamma.points[a], omega.points[b]);
  return m;
}

/// A rho-continuous path of configurations on [a, b].
struct ConfigurationPath {
  std::function<Configuration(double)> at;
  double a = 0, b = 1;
  std::vector<double> sample_times;
};

inline ConfigurationPath interpolation_path(Configuration gamma, Configuration omega, Matching m) {
  ConfigurationPath path;
  path.a = 0;
  path.b = 1;
  path.sample_times = {0.0, 0.5, 1.0};
  path.at = [gamma = std::move(gamma), omega = std::move(omega), m = std::move(m)](double t) {
    return interpolate(gamma, omega, m, t);
  };
  return path;
}

inline ConfigurationPath flow_path(CompactVectorField v, Configuration gamma, double a = 0, double b = 1,
                                   double step = kDefaultFlowStep) {
  ConfigurationPath path;
  path.a = a;
  path.b = b;
  path.sample_times = {a, 0.5 * (a + b), b};
  path.at = [v = std::move(v), gamma = std::move(gamma), step](double t) {
    return pushforward(v, gamma, t, step);
  };
  return path;
}

/// Partition sum (1/2) sum rho(xi_{t_i}, xi_{t_{i-1}})^2 / dt at the dyadic
/// partition of [a, b] of the given level; infinite if any step distance is.
inline ExtendedDistance curve_energy(const ConfigurationPath& xi, double a, double b, int depth) {
  if (!(a < b)) throw std::invalid_argument("confgeo: curve_energy needs a < b");
  if (depth < 0 || depth > 24) throw std::invalid_argument("confgeo: curve_energy depth out of range");
  const long pieces = 1L << depth;
  const double dt = (b - a) / static_cast<double>(pieces);
  double total = 0;
  Configuration prev = xi.at(a);
  for (long i = 1; i <= pieces; ++i) {
    Configuration cur = xi.at(a + dt * static_cast<double>(i));
    const ExtendedDistance step = transport_distance_value(prev, cur);
    if (step.is_infinite()) return ExtendedDistance::infinite();
    total += 0.5 * step.value() * step.value() / dt;
    prev = std::move(cur);
  }
  return ExtendedDistance::finite(total);
}

/// (1/2) integral over [a,b] of ||V||^2 along the flow of V started at gamma,
/// by composite Simpson quadrature with quad_points panels.
inline double flow_energy(const CompactVectorField& v, const Configuration& gamma, double a, double b,
                          int quad_points, double step = kDefaultFlowStep) {
  if (quad_points < 2) throw std::invalid_argument("confgeo: flow_energy needs quad_points >= 2");
  if (!(a < b)) throw std::invalid_argument("confgeo: flow_energy needs a < b");
  const int panels = quad_points + (quad_points % 2);  // Simpson needs an even count
  const double h = (b - a) / panels;
  auto f = [&](double t) { return 0.5 * tangent_norm_sq(v, pushforward(v, gamma, t, step)); };
  double total = f(a) + f(b);
  for (int i = 1; i < panels; ++i) total += (i % 2 == 1 ? 4.0 : 2.0) * f(a + h * i);
  return total * h / 3.0;
}

struct GronwallReport {
  double lhs = 0;        // rho between the two flow images
  double rhs = 0;        // L t e^{Lt} ||V-W||_inf sqrt(gamma(A))
  double sup_diff = 0;   // sampled sup of |V - W|
  double lipschitz = 0;  // Lipschitz bound of V used as the constant
  int points_in_support = 0;
};

/// Flow-comparison bound in flat space: the distance between the time-t images
/// of gamma under the flows of V and W, against the Gronwall-type right side.
inline GronwallReport gronwall_gap(const CompactVectorField& v, const CompactVectorField& w,
                                   const Configuration& gamma, double t, double step = kDefaultFlowStep,
                                   int sup_samples = 4096) {
  if (!(t > 0)) throw std::invalid_argument("confgeo: gronwall_gap needs t > 0");
  GronwallReport rep;
  rep.lipschitz = v.lipschitz_bound;

  // sampled sup of |V - W| over the union of supports
  std::mt19937_64 rng(853177u);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (const Ball& support : {v.support, w.support}) {
    const int d = support.dim();
    for (int k = 0; k < sup_samples / 2; ++k) {
      Vec x = support.center;
      for (int i = 0; i < d; ++i) x[i] += support.radius * unif(rng);
      rep.sup_diff = std::max(rep.sup_diff, dist(v.eval(x), w.eval(x)));
    }
  }

  for (const Vec& p : gamma.points)
    if (v.support.contains(p) || w.support.contains(p)) ++rep.points_in_support;

  const ExtendedDistance lhs = transport_distance_value(pushforward(v, gamma, t, step),
                                                        pushforward(w, gamma, t, step));
  rep.lhs = lhs.value();
  const double l = rep.lipschitz;
  rep.rhs = l * t * std::exp(l * t) * rep.sup_diff * std::sqrt(static_cast<double>(rep.points_in_support));
  return rep;
}

struct FlowStage {
  CompactVectorField field;
  double duration = 0;
};

struct StagedFlow1D {
  std::vector<FlowStage> stages;
  bool complete = true;  // false when the stage cap was hit before finishing
};

namespace detail {

// Static 1D velocity profile: constant value on each closed block, smooth
// ramps inside the open gaps between blocks, zero outside the outermost
// blocks. At a zero-width gap the shared endpoint takes the value of the side
// whose trajectory starts there (`owner_right`).
struct PiecewiseVelocity {
  std::vector<double> lo, hi, val;  // blocks, strictly increasing, may touch
  std::vector<char> owner_right;    // per interior boundary: shared point owned by right block
  double ramp = 0.05;               // ramp half-width used in positive gaps and at the ends

  double operator()(double x) const {
    const std::size_t k = val.size();
    if (k == 0) return 0.0;
    if (x <= lo[0]) {
      const double gap = lo[0] - x;
      return gap >= 2.0 * ramp ? 0.0 : val[0] * smooth_step(1.0 - gap / (2.0 * ramp));
    }
    if (x >= hi[k - 1]) {
      const double gap = x - hi[k - 1];
      return gap >= 2.0 * ramp ? 0.0 : val[k - 1] * smooth_step(1.0 - gap / (2.0 * ramp));
    }
    for (std::size_t b = 0; b < k; ++b) {
      if (x < lo[b]) {  // inside the gap (hi[b-1], lo[b])
        const double g = lo[b] - hi[b - 1];
        const double mid = 0.5 * (hi[b - 1] + lo[b]);
        const double w = std::min(ramp, 0.5 * g);
        if (x <= mid - w) return val[b - 1];
        if (x >= mid + w) return val[b];
        const double s = smooth_step((x - (mid - w)) / (2.0 * w));
        return val[b - 1] + (val[b] - val[b - 1]) * s;
      }
      if (x < hi[b]) return val[b];
      if (x == hi[b]) {
        if (b + 1 < k && lo[b + 1] == hi[b]) return owner_right[b] ? val[b + 1] : val[b];
        return val[b];
      }
    }
    return 0.0;
  }
};

}  // namespace detail

/// Staged transport of a d=1 simple configuration onto another along the
/// monotone matching: a finite list of (compactly supported field, duration)
/// whose composed flows move gamma to within transport distance eps of omega.
/// Each stage field is constant along every moving block and the stage ends
/// when a block would run into another block's stage-start position. Stages
/// are capped at 4 n^2; `complete` reports whether the construction finished.
inline StagedFlow1D staged_flow_1d(const Configuration& gamma, const Configuration& omega, double eps) {
  if (gamma.dim != 1 || omega.dim != 1) throw std::invalid_argument("confgeo: staged flow is for dimension 1");
  if (gamma.size() != omega.size()) throw std::invalid_argument("confgeo: staged flow needs equal point counts");
  if (!(eps > 0)) throw std::invalid_argument("confgeo: staged flow needs eps > 0");
  if (!gamma.is_simple() || !omega.is_simple())
    throw std::invalid_argument("confgeo: staged flow needs simple configurations");

  const int n = gamma.size();
  StagedFlow1D out;
  if (n == 0) return out;

  std::vector<double> q(n), y(n);
  {
    std::vector<double> xs(n), ys(n);
    for (int i = 0; i < n; ++i) xs[i] = gamma.points[i][0];
    for (int i = 0; i < n; ++i) ys[i] = omega.points[i][0];
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    q = xs;
    y = ys;
  }
  std::vector<double> vel(n);
  for (int i = 0; i < n; ++i) vel[i] = y[i] - q[i];

  const int stage_cap = 4 * n * n;
  double t_cur = 0;
  const double t_tol = 1e-12;

  while (t_cur < 1.0 - t_tol) {
    double remaining_sq = 0;
    for (int i = 0; i < n; ++i) {
      const double rest = (1.0 - t_cur) * vel[i];
      remaining_sq += rest * rest;
    }
    if (std::sqrt(remaining_sq) <= 0.5 * eps) break;
    if (static_cast<int>(out.stages.size()) >= stage_cap) {
      out.complete = false;
      break;
    }

    const double t_rem = 1.0 - t_cur;
    // first time two swept blocks would touch; blocks moving at the same
    // velocity are merged and cannot collide
    double dt = t_rem;
    for (int i = 0; i + 1 < n; ++i) {
      if (vel[i] == vel[i + 1]) continue;
      const double closing = std::max(vel[i], 0.0) - std::min(vel[i + 1], 0.0);
      if (closing <= 0) continue;
      const double touch = (q[i + 1] - q[i]) / closing;
      if (touch > t_tol) dt = std::min(dt, touch);
    }

    // build the stage profile from merged same-velocity runs
    detail::PiecewiseVelocity profile;
    double min_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n;) {
      int j = i;
      while (j + 1 < n && vel[j + 1] == vel[i]) ++j;
      profile.lo.push_back(std::min(q[i], q[i] + vel[i] * dt));
      profile.hi.push_back(std::max(q[j], q[j] + vel[i] * dt));
      profile.val.push_back(vel[i]);
      i = j + 1;
    }
    for (std::size_t b = 0; b + 1 < profile.val.size(); ++b) {
      // blocks may touch but never overlap
      profile.lo[b + 1] = std::max(profile.lo[b + 1], profile.hi[b]);
      const double g = profile.lo[b + 1] - profile.hi[b];
      if (g > 0) min_gap = std::min(min_gap, g);
      // shared endpoint belongs to the block whose motion starts there
      profile.owner_right.push_back(profile.val[b + 1] > 0 ? 1 : 0);
    }
    profile.ramp = 0.25 * std::min(eps, std::isfinite(min_gap) ? 0.5 * min_gap : eps);
    profile.ramp = std::max(profile.ramp, 1e-9);

    const double span_lo = profile.lo.front() - 4.0 * profile.ramp - 1.0;
    const double span_hi = profile.hi.back() + 4.0 * profile.ramp + 1.0;
    CompactVectorField field;
    field.support = Ball{Vec{0.5 * (span_lo + span_hi)}, 0.5 * (span_hi - span_lo)};
    double vmax = 0, vlip = 0;
    for (double value : profile.val) vmax = std::max(vmax, std::fabs(value));
    for (std::size_t b = 0; b + 1 < profile.val.size(); ++b)
      vlip = std::max(vlip, std::fabs(profile.val[b + 1] - profile.val[b]) / std::max(2.0 * profile.ramp, 1e-12));
    field.sup_norm = vmax;
    field.lipschitz_bound = std::max(vlip, vmax / (2.0 * profile.ramp));
    field.eval = [profile](const Vec& x) { return Vec{profile(x[0])}; };

    out.stages.push_back(FlowStage{std::move(field), dt});
    for (int i = 0; i < n; ++i) q[i] += vel[i] * dt;
    t_cur += dt;
  }
  return out;
}

/// Executes the composed stage flows on gamma with the RK4 integrator.
inline Configuration run_staged_flow(const StagedFlow1D& flow, Configuration gamma,
                                     double step = kDefaultFlowStep) {
  for (const FlowStage& stage : flow.stages)
    gamma = pushforward(stage.field, gamma, stage.duration, step);
  return gamma;
}

}  // namespace confgeo
