#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "confgeo/analysis.hpp"
#include "confgeo/configuration.hpp"
#include "confgeo/coupling.hpp"
#include "confgeo/cylinder.hpp"
#include "confgeo/geodesic.hpp"
#include "confgeo/gibbs.hpp"
#include "confgeo/potential.hpp"
#include "confgeo/vector_field.hpp"

namespace confgeo::verify {

struct CheckResult {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// ---------------------------------------------------------------------------
// deterministic instance generators
// ---------------------------------------------------------------------------

inline Configuration random_configuration(std::mt19937_64& rng, int dim, int n, double half_width) {
  std::uniform_real_distribution<double> unif(-half_width, half_width);
  Configuration g = Configuration::empty(dim);
  g.points.reserve(n);
  for (int k = 0; k < n; ++k) {
    Vec p(dim);
    for (double& c : p) c = unif(rng);
    g.points.push_back(std::move(p));
  }
  return g;
}

/// Sum of one or two direction bumps; amplitudes >= radii keep the Lipschitz
/// bound of every generated field at 1 or above.
inline CompactVectorField random_bump_field(std::mt19937_64& rng, int dim, double amp_lo, double amp_hi,
                                            double radius_lo = 1.0, double radius_hi = 2.0) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<int> nterms(1, 2);
  std::vector<CompactVectorField> terms;
  const int k = nterms(rng);
  for (int t = 0; t < k; ++t) {
    Vec center(dim), direction(dim);
    for (double& c : center) c = -1.0 + 2.0 * unif(rng);
    double dn = 0;
    while (dn == 0) {
      for (double& c : direction) c = -1.0 + 2.0 * unif(rng);
      dn = norm(direction);
    }
    const double amp = amp_lo + (amp_hi - amp_lo) * unif(rng);
    direction = scaled(direction, amp / dn);
    const double radius = radius_lo + (radius_hi - radius_lo) * unif(rng);
    terms.push_back(constant_bump_field(Ball{center, radius}, direction));
  }
  return k == 1 ? terms[0] : sum_field(std::move(terms));
}

inline CylinderFunction random_cylinder(std::mt19937_64& rng, int dim) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<int> ninner(1, 3);
  const int k = ninner(rng);
  std::vector<CompactTestFunction> inner;
  Vec weights;
  for (int i = 0; i < k; ++i) {
    Vec center(dim);
    for (double& c : center) c = -1.5 + 3.0 * unif(rng);
    inner.push_back(bump_test_function(Ball{center, 0.8 + 1.2 * unif(rng)}, 0.3 + 1.2 * unif(rng)));
    weights.push_back(-1.0 + 2.0 * unif(rng));
  }
  return tanh_cylinder(std::move(inner), std::move(weights), -0.3 + 0.6 * unif(rng), 1.0 + unif(rng));
}

namespace detail {

inline double recomputed_squared_cost(const Configuration& g, const Configuration& w, const Matching& m) {
  double s = 0;
  for (const auto& [gi, oi] : m.pairs) s += dist_sq(g.points[gi], w.points[oi]);
  for (const auto& [gi, target] : m.exits) s += dist_sq(g.points[gi], target);
  return s;
}

inline std::string fmt(double x) {
  std::ostringstream ss;
  ss.precision(3);
  ss << std::scientific << x;
  return ss.str();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// acceptance criteria
// ---------------------------------------------------------------------------

/// 1: rho and the localized distance agree with their brute-force oracles.
inline CheckResult criterion_oracle_equivalence(std::uint64_t seed) {
  CheckResult res{"1 oracle-equivalence", true, ""};
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> small_n(0, 7), tiny_n(0, 6);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst = 0;
  long checked = 0;
  for (int dim = 1; dim <= 3 && res.pass; ++dim) {
    for (int k = 0; k < 500 && res.pass; ++k) {
      const int ng = small_n(rng);
      const int nw = (unif(rng) < 0.7) ? ng : small_n(rng);
      const Configuration g = random_configuration(rng, dim, ng, 2.0);
      const Configuration w = random_configuration(rng, dim, nw, 2.0);

      const TransportResult fast = transport_distance(g, w);
      const TransportResult slow = transport_distance_bruteforce(g, w);
      if (fast.distance.is_finite() != slow.distance.is_finite()) res.pass = false;
      if (res.pass && fast.distance.is_finite()) {
        const double gap = std::fabs(fast.distance.value() - slow.distance.value());
        worst = std::max(worst, gap);
        if (gap > 1e-9) res.pass = false;
        const double wit = detail::recomputed_squared_cost(g, w, *fast.matching);
        if (std::fabs(wit - fast.matching->squared_cost) > 1e-9) res.pass = false;
        if (std::fabs(std::sqrt(wit) - fast.distance.value()) > 1e-9) res.pass = false;
        if (fast.matching->pairs != slow.matching->pairs) {
          // disagreement is only acceptable for an exact cost tie
          const double alt = detail::recomputed_squared_cost(g, w, *slow.matching);
          if (std::fabs(alt - wit) > 1e-9) res.pass = false;
        }
      }

      Vec center(dim);
      for (double& c : center) c = -1.0 + 2.0 * unif(rng);
      const Ball ball{center, 0.5 + 2.5 * unif(rng)};
      const Configuration w2 = random_configuration(rng, dim, tiny_n(rng), 2.0);
      const TransportResult lf = localized_distance(g, w2, ball);
      const TransportResult ls = localized_distance_bruteforce(g, w2, ball);
      if (lf.distance.is_finite() != ls.distance.is_finite()) res.pass = false;
      if (res.pass && lf.distance.is_finite()) {
        const double gap = std::fabs(lf.distance.value() - ls.distance.value());
        worst = std::max(worst, gap);
        if (gap > 1e-9) res.pass = false;
        const double wit = detail::recomputed_squared_cost(g, w2, *lf.matching);
        if (std::fabs(wit - lf.matching->squared_cost) > 1e-9) res.pass = false;
        if (std::fabs(std::sqrt(wit) - lf.distance.value()) > 1e-9) res.pass = false;
      }
      checked += 2;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= 30.0) res.pass = false;
  res.detail = std::to_string(checked) + " comparisons, max |gap| = " + detail::fmt(worst) + ", " +
               detail::fmt(secs) + " s";
  return res;
}

/// 2: symmetry (exact), triangle inequality (1e-9), infinite iff counts differ.
inline CheckResult criterion_metric_axioms(std::uint64_t seed) {
  CheckResult res{"2 metric-axioms", true, ""};
  std::mt19937_64 rng(seed + 1);
  std::uniform_int_distribution<int> size(1, 6);
  double worst_triangle = 0;
  for (int k = 0; k < 500 && res.pass; ++k) {
    const int dim = 1 + k % 3;
    const int n = size(rng);
    const Configuration a = random_configuration(rng, dim, n, 2.0);
    const Configuration b = random_configuration(rng, dim, n, 2.0);
    const Configuration c = random_configuration(rng, dim, n, 2.0);
    const double ab = transport_distance_value(a, b).value();
    const double ba = transport_distance_value(b, a).value();
    if (ab != ba) res.pass = false;
    const double ac = transport_distance_value(a, c).value();
    const double bc = transport_distance_value(b, c).value();
    worst_triangle = std::max(worst_triangle, ac - (ab + bc));
    if (ac > ab + bc + 1e-9) res.pass = false;
    if (transport_distance_value(a, a).value() != 0.0) res.pass = false;

    const Configuration d = random_configuration(rng, dim, n + 1, 2.0);
    if (!transport_distance_value(a, d).is_infinite()) res.pass = false;
  }
  res.detail = "500 triples, max triangle slack = " + detail::fmt(worst_triangle);
  return res;
}

/// 3: localized distance is nondecreasing in the radius, equals rho once the
/// ball encloses everything, and is infinite exactly on count deficit.
inline CheckResult criterion_localization(std::uint64_t seed) {
  CheckResult res{"3 localization", true, ""};
  std::mt19937_64 rng(seed + 2);
  std::uniform_int_distribution<int> ng_dist(0, 7), nw_dist(0, 5);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst_eq = 0;
  for (int k = 0; k < 150 && res.pass; ++k) {
    const int dim = 1 + k % 3;
    const int nw = nw_dist(rng);
    const int ngam = (unif(rng) < 0.7) ? nw : ng_dist(rng);
    const Configuration g = random_configuration(rng, dim, ngam, 2.0);
    const Configuration w = random_configuration(rng, dim, nw, 2.0);
    double enclose = 2.5;
    for (const auto& cfg : {g, w})
      for (const Vec& p : cfg.points) enclose = std::max(enclose, norm(p) + 0.5);
    const std::vector<double> radii{0.3, 0.8, 1.5, 2.2, enclose};
    ExtendedDistance prev = ExtendedDistance::finite(0.0);
    for (std::size_t i = 0; i < radii.size(); ++i) {
      const Ball ball{zeros(dim), radii[i]};
      const ExtendedDistance v = localized_distance(g, w, ball).distance;
      const bool deficit = g.size() < count_in(w, Region::ball(ball));
      if (v.is_infinite() != deficit) res.pass = false;
      if (i > 0) {
        if (prev.is_infinite() && v.is_finite()) res.pass = false;
        if (prev.is_finite() && v.is_finite() && v.value() < prev.value() - 1e-9) res.pass = false;
      }
      prev = v;
    }
    if (ngam == nw) {
      const double rho = transport_distance_value(g, w).value();
      const double loc = localized_distance(g, w, Ball{zeros(dim), enclose}).distance.value();
      worst_eq = std::max(worst_eq, std::fabs(rho - loc));
      if (std::fabs(rho - loc) > 1e-9) res.pass = false;
    }
  }
  res.detail = "150 nested-radius instances, max |rho_loc - rho| at enclosure = " + detail::fmt(worst_eq);
  return res;
}

/// 4: the 1D monotone matching is optimal and no transposition improves any
/// returned optimal matching.
inline CheckResult criterion_monotone_1d(std::uint64_t seed) {
  CheckResult res{"4 monotone-1d", true, ""};
  std::mt19937_64 rng(seed + 3);
  std::uniform_int_distribution<int> size(0, 7);
  double worst = 0;
  for (int k = 0; k < 500 && res.pass; ++k) {
    const int n = size(rng);
    const Configuration g = random_configuration(rng, 1, n, 3.0);
    const Configuration w = random_configuration(rng, 1, n, 3.0);
    const Matching mono = monotone_matching_1d(g, w);
    const TransportResult bf = transport_distance_bruteforce(g, w);
    const double opt = bf.distance.value();
    worst = std::max(worst, std::fabs(mono.squared_cost - opt * opt));
    if (std::fabs(mono.squared_cost - opt * opt) > 1e-9) res.pass = false;

    for (const Matching& m : {mono, *transport_distance(g, w).matching}) {
      for (std::size_t i = 0; i < m.pairs.size() && res.pass; ++i)
        for (std::size_t j = i + 1; j < m.pairs.size(); ++j) {
          const auto [g1, o1] = m.pairs[i];
          const auto [g2, o2] = m.pairs[j];
          const double own = dist_sq(g.points[g1], w.points[o1]) + dist_sq(g.points[g2], w.points[o2]);
          const double swapped = dist_sq(g.points[g1], w.points[o2]) + dist_sq(g.points[g2], w.points[o1]);
          if (swapped < own - 1e-12) {
            res.pass = false;
            break;
          }
        }
    }
  }
  res.detail = "500 instances, max |monotone cost^2 - opt^2| = " + detail::fmt(worst);
  return res;
}

/// 5: dyadic curve energy at depth 8 matches the quadrature flow energy, and
/// geodesic interpolation has energy rho^2 / 2.
inline CheckResult criterion_energy_identity(std::uint64_t seed) {
  CheckResult res{"5 energy-identity", true, ""};
  std::mt19937_64 rng(seed + 4);
  std::uniform_int_distribution<int> size(1, 10);
  double worst = 0;
  const double step = 2e-3;
  for (int k = 0; k < 50 && res.pass; ++k) {
    const int dim = 1 + k % 2;
    const Configuration g = random_configuration(rng, dim, size(rng), 1.5);
    const CompactVectorField v = random_bump_field(rng, dim, 0.2, 0.6);
    const double fe = flow_energy(v, g, 0.0, 1.0, 256, step);
    const ExtendedDistance ce = curve_energy(flow_path(v, g, 0.0, 1.0, step), 0.0, 1.0, 8);
    if (ce.is_infinite()) {
      res.pass = false;
      break;
    }
    const double gap = std::fabs(ce.value() - fe);
    worst = std::max(worst, gap / (1.0 + fe));
    if (gap > 1e-3 * (1.0 + fe)) res.pass = false;
  }
  std::uniform_int_distribution<int> gsize(1, 8);
  for (int k = 0; k < 20 && res.pass; ++k) {
    const int dim = 1 + k % 2;
    const int n = gsize(rng);
    const Configuration g = random_configuration(rng, dim, n, 2.0);
    const Configuration w = random_configuration(rng, dim, n, 2.0);
    const TransportResult tr = transport_distance(g, w);
    const double target = 0.5 * tr.distance.value() * tr.distance.value();
    const ExtendedDistance ce = curve_energy(interpolation_path(g, w, *tr.matching), 0.0, 1.0, 8);
    const double gap = std::fabs(ce.value() - target);
    worst = std::max(worst, gap / (1.0 + target));
    if (gap > 1e-3 * (1.0 + target)) res.pass = false;
  }
  res.detail = "50 flows + 20 geodesics, max relative gap = " + detail::fmt(worst);
  return res;
}

/// 6: flow-comparison bound lhs <= rhs on random field pairs.
inline CheckResult criterion_gronwall(std::uint64_t seed) {
  CheckResult res{"6 gronwall", true, ""};
  std::mt19937_64 rng(seed + 5);
  std::uniform_int_distribution<int> size(1, 6);
  std::uniform_real_distribution<double> tdist(0.1, 1.0);
  double worst_ratio = 0;
  for (int k = 0; k < 100 && res.pass; ++k) {
    const int dim = 1 + k % 2;
    const Configuration g = random_configuration(rng, dim, size(rng), 2.0);
    const CompactVectorField v = random_bump_field(rng, dim, 1.0, 2.5);
    const CompactVectorField w = random_bump_field(rng, dim, 1.0, 2.5);
    const GronwallReport rep = gronwall_gap(v, w, g, tdist(rng));
    if (rep.rhs > 0) worst_ratio = std::max(worst_ratio, rep.lhs / rep.rhs);
    if (rep.lhs > rep.rhs + 1e-12) res.pass = false;
  }
  res.detail = "100 instances, max lhs/rhs = " + detail::fmt(worst_ratio);
  return res;
}

/// 7: finite differences match the cylinder gradient at second order, and the
/// clipped set distance obeys the gradient-norm bound.
inline CheckResult criterion_gradient_bounds(std::uint64_t seed) {
  CheckResult res{"7 gradient-bounds", true, ""};
  std::mt19937_64 rng(seed + 6);
  std::uniform_int_distribution<int> size(1, 12), setsize(1, 3);
  double worst_err = 0, worst_ratio = 0;
  for (int k = 0; k < 60 && res.pass; ++k) {
    const int dim = 1 + k % 2;
    const Configuration g = random_configuration(rng, dim, size(rng), 2.0);
    const CylinderFunction u = random_cylinder(rng, dim);
    const CompactVectorField v = random_bump_field(rng, dim, 0.3, 1.0);
    const double exact = pair_with_field(gradient_cylinder(u, g), v, g);
    const ConfigurationFunctional eval = [&u](const Configuration& c) { return eval_cylinder(u, c); };
    const double e1 = std::fabs(directional_derivative_fd(eval, g, v, 1e-3) - exact);
    const double e2 = std::fabs(directional_derivative_fd(eval, g, v, 5e-4) - exact);
    worst_err = std::max(worst_err, e1);
    if (e1 > 1e-4) res.pass = false;
    if (e1 > 1e-8 && e2 > 0 && std::log2(e1 / e2) < 1.9) res.pass = false;
  }
  for (int k = 0; k < 100 && res.pass; ++k) {
    const int dim = 1 + k % 2;
    const int n = size(rng) % 6 + 1;
    const Configuration g = random_configuration(rng, dim, n, 2.0);
    std::vector<Configuration> set;
    for (int s = 0; s < setsize(rng); ++s) set.push_back(random_configuration(rng, dim, n, 2.0));
    const CompactVectorField v = random_bump_field(rng, dim, 0.3, 1.0);
    const ConfigurationFunctional u = [&set](const Configuration& c) {
      return clipped_set_distance(c, set, 1.0);
    };
    const double fd = std::fabs(directional_derivative_fd(u, g, v, 1e-3));
    const double bound = tangent_norm(v, g) * 1.01 + 1e-3;
    if (bound > 0) worst_ratio = std::max(worst_ratio, fd / bound);
    if (fd > bound) res.pass = false;
  }
  res.detail = "60 gradient + 100 bound trials, max fd error = " + detail::fmt(worst_err) +
               ", max bound ratio = " + detail::fmt(worst_ratio);
  return res;
}

/// 8: the clipped localized family attains rho for large clip and radius, and
/// every member audits as 1-Lipschitz.
inline CheckResult criterion_intrinsic_metric(std::uint64_t seed) {
  CheckResult res{"8 intrinsic-metric", true, ""};
  std::mt19937_64 rng(seed + 7);
  std::uniform_int_distribution<int> size(1, 6);
  double worst_gap = 0, worst_lip = 0;
  for (int k = 0; k < 20 && res.pass; ++k) {
    const int dim = 1 + k % 2;
    const int n = size(rng);
    const Configuration g = random_configuration(rng, dim, n, 1.5);
    const Configuration w = random_configuration(rng, dim, n, 1.5);
    double enclose = 2.5;
    for (const auto& cfg : {g, w})
      for (const Vec& p : cfg.points) enclose = std::max(enclose, norm(p) + 1.0);
    const double rho = transport_distance_value(g, w).value();
    const double clip = rho + 1.0;
    const IntrinsicReport rep =
        intrinsic_metric_gap(g, w, zeros(dim), {0.5, 1.2, 2.0, enclose}, clip, 2, seed + k);
    worst_gap = std::max(worst_gap, std::fabs(rep.gap));
    if (std::fabs(rep.gap) > 1e-9) res.pass = false;
    for (const IntrinsicRow& row : rep.rows)
      if (row.fd_ratio > 1.02) res.pass = false;

    // pairwise Lipschitz audit of each family member
    std::vector<std::pair<Configuration, Configuration>> pairs;
    for (int p = 0; p < 10; ++p)
      pairs.emplace_back(random_configuration(rng, dim, n, 2.0), random_configuration(rng, dim, n, 2.0));
    pairs.emplace_back(g, w);
    for (const IntrinsicRow& row : rep.rows) {
      const Ball ball{zeros(dim), row.radius};
      const ConfigurationFunctional u = [&w, &ball, clip](const Configuration& c) {
        return localized_distance(c, w, ball).distance.clipped(clip);
      };
      const LipschitzAudit audit = lipschitz_audit(u, pairs);
      worst_lip = std::max(worst_lip, audit.constant);
      if (audit.constant > 1.0 + 1e-9) res.pass = false;
    }
  }
  res.detail = "20 pairs, max |gap| = " + detail::fmt(worst_gap) +
               ", max audited Lipschitz = " + detail::fmt(worst_lip);
  return res;
}

/// 9: Gibbs sampler sanity for the zero potential, hard-core exclusion, and
/// the partition-function lower bound.
inline CheckResult criterion_gibbs_sanity(std::uint64_t seed) {
  CheckResult res{"9 gibbs-sanity", true, ""};
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream detail;

  {  // phi = 0: the chain must reproduce Poisson(z vol) statistics (thin 100)
    GibbsSpec spec;
    spec.window = Region::box(Vec{0.0, 0.0}, Vec{1.5, 1.5});
    spec.activity = 2.0;
    spec.potential = zero_potential();
    spec.boundary = Configuration::empty(2);
    const long n_samples = 10000, thin = 100, burn = 20000;
    const GibbsChain chain = gibbs_mcmc(spec, burn + n_samples * thin, burn, thin, seed + 8);
    const double lambda = spec.activity * spec.window.box_volume();
    double mean = 0, m2 = 0, empty = 0;
    for (const Configuration& s : chain.samples) {
      mean += s.size();
      m2 += static_cast<double>(s.size()) * s.size();
      if (s.is_empty()) empty += 1;
    }
    mean /= n_samples;
    const double var = m2 / n_samples - mean * mean;
    empty /= n_samples;
    const double sd_mean = 3.0 * std::sqrt(lambda / n_samples);
    const double sd_var = 3.0 * std::sqrt((lambda + 2.0 * lambda * lambda) / n_samples);
    const double p_empty = std::exp(-lambda);
    const double sd_empty = 3.0 * std::sqrt(p_empty * (1.0 - p_empty) / n_samples);
    if (std::fabs(mean - lambda) > sd_mean) res.pass = false;
    if (std::fabs(var - lambda) > sd_var) res.pass = false;
    if (std::fabs(empty - p_empty) > sd_empty) res.pass = false;
    const EmptyProbabilityReport erep = empty_probability_check(spec, chain.samples);
    if (!erep.holds) res.pass = false;
    if (std::fabs(chain_energy(spec, chain.final_state) - chain.final_energy) > 1e-9) res.pass = false;
    detail << "zero-potential: mean " << mean << " (want " << lambda << " +- " << sd_mean << "), var " << var
           << ", empty " << empty << " (bound " << erep.bound << ")";
  }

  {  // hard core: no emitted sample violates the core
    GibbsSpec spec;
    spec.window = Region::box(Vec{0.0, 0.0}, Vec{2.0, 2.0});
    spec.activity = 1.5;
    spec.potential = hard_core_potential(0.25);
    spec.boundary = Configuration::empty(2);
    const GibbsChain chain = gibbs_mcmc(spec, 5000 + 2000 * 20, 5000, 20, seed + 9);
    for (const Configuration& s : chain.samples)
      for (int i = 0; i < s.size(); ++i)
        for (int j = i + 1; j < s.size(); ++j)
          if (dist(s.points[i], s.points[j]) < 0.25) res.pass = false;
    if (std::fabs(chain_energy(spec, chain.final_state) - chain.final_energy) > 1e-9) res.pass = false;
  }

  {  // partition function lower bound  Z >= e^{-z m} (1 + z m) - 3 se
    for (int variant = 0; variant < 3 && res.pass; ++variant) {
      GibbsSpec spec;
      spec.window = Region::box(Vec{0.0, 0.0}, Vec{1.0, 1.0});
      spec.activity = variant == 0 ? 2.0 : 1.0;
      spec.potential = variant == 0   ? zero_potential()
                       : variant == 1 ? hard_core_potential(0.3)
                                      : smooth_well_potential(1.0, 0.3, 0.6, 0.5);
      spec.boundary = Configuration::empty(2);
      const auto [est, se] = partition_function_mc(spec, 4000, seed + 10 + variant);
      const double zm = spec.activity * spec.window.box_volume();
      const double bound = std::exp(-zm) * (1.0 + zm);
      if (variant == 0 && std::fabs(est - 1.0) > 1e-12) res.pass = false;
      if (est < bound - 3.0 * se) res.pass = false;
    }
  }

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= 120.0) res.pass = false;
  detail << ", " << detail::fmt(secs) << " s";
  res.detail = detail.str();
  return res;
}

/// 10: spatial ergodic averages of a cylinder function under Poisson approach
/// the closed-form expectation, with non-increasing median deviation.
inline CheckResult criterion_ergodic_average(std::uint64_t seed) {
  CheckResult res{"10 ergodic-average", true, ""};
  const double z = 1.0, half_width = 33.0;
  const std::vector<double> sizes{2.0, 8.0, 30.0};
  const CompactTestFunction f = bump_test_function(Ball{Vec{0.0}, 2.0}, 1.0);
  const CylinderFunction u = exp_decay_cylinder({f}, Vec{1.0});

  // E exp(-<f,gamma>) = exp(-z * integral of (1 - e^{-f})) for a Poisson field
  double integral = 0;
  {
    const int panels = 4000;
    const double a = -2.0, b = 2.0, h = (b - a) / panels;
    auto fn = [&](double x) { return 1.0 - std::exp(-f(Vec{x})); };
    integral = fn(a) + fn(b);
    for (int i = 1; i < panels; ++i) integral += (i % 2 == 1 ? 4.0 : 2.0) * fn(a + i * h);
    integral *= h / 3.0;
  }
  const double expectation = std::exp(-z * integral);

  const int reps = 20;
  std::vector<std::vector<double>> devs(sizes.size());
  std::vector<double> largest;
  const Region window = Region::centered_box(1, half_width);
  for (int r = 0; r < reps; ++r) {
    std::mt19937_64 rng(seed + 11 + r);
    const Configuration g = sample_poisson(z, window, rng);
    const std::vector<double> avg = ergodic_average(g, half_width, u, sizes, 0.25);
    for (std::size_t i = 0; i < sizes.size(); ++i) devs[i].push_back(std::fabs(avg[i] - expectation));
    largest.push_back(avg.back());
  }
  double mean = 0;
  for (double v : largest) mean += v;
  mean /= reps;
  double var = 0;
  for (double v : largest) var += (v - mean) * (v - mean);
  const double se = std::sqrt(var / (reps - 1) / reps);
  if (std::fabs(mean - expectation) > 3.0 * se) res.pass = false;

  std::vector<double> medians;
  for (auto& d : devs) {
    std::sort(d.begin(), d.end());
    medians.push_back(0.5 * (d[reps / 2 - 1] + d[reps / 2]));
  }
  for (std::size_t i = 1; i < medians.size(); ++i)
    if (medians[i] > medians[i - 1]) res.pass = false;

  std::ostringstream detail;
  detail << "mean(V_30) = " << mean << " vs " << expectation << " +- " << 3.0 * se << "; medians";
  for (double m : medians) detail << " " << m;
  res.detail = detail.str();
  return res;
}

/// 11: the lattice example's truncated distances grow without bound
/// (monotone-matching cost^2 is exactly N).
inline CheckResult criterion_lattice_divergence() {
  CheckResult res{"11 lattice-divergence", true, ""};
  double prev = -1;
  for (int n_box = 1; n_box <= 50; ++n_box) {
    Configuration omega = Configuration::empty(1), gamma = Configuration::empty(1);
    for (int z = -n_box; z <= n_box; ++z) {
      if (z != n_box) omega.points.push_back(Vec{static_cast<double>(z)});
      if (z != 0) gamma.points.push_back(Vec{static_cast<double>(z)});
    }
    const Matching m = monotone_matching_1d(gamma, omega);
    if (std::fabs(m.squared_cost - static_cast<double>(n_box)) > 1e-9) res.pass = false;
    if (m.squared_cost <= prev) res.pass = false;
    prev = m.squared_cost;
    if (n_box <= 3) {
      const double bf = transport_distance_bruteforce(gamma, omega).distance.value();
      if (std::fabs(bf * bf - m.squared_cost) > 1e-9) res.pass = false;
    }
  }
  res.detail = "cost^2(N) = N for N = 1..50, strictly increasing";
  return res;
}

// ---------------------------------------------------------------------------
// suites
// ---------------------------------------------------------------------------

inline std::vector<std::string> suite_names() {
  return {"metric", "energy", "gradient", "gibbs-poisson", "ergodic", "all"};
}

inline SuiteReport run_suite(const std::string& name, std::uint64_t seed) {
  SuiteReport rep;
  rep.suite = name;
  rep.seed = seed;
  const bool all = name == "all";
  if (all || name == "metric") {
    rep.checks.push_back(criterion_oracle_equivalence(seed));
    rep.checks.push_back(criterion_metric_axioms(seed));
    rep.checks.push_back(criterion_localization(seed));
    rep.checks.push_back(criterion_monotone_1d(seed));
    rep.checks.push_back(criterion_lattice_divergence());
  }
  if (all || name == "energy") {
    rep.checks.push_back(criterion_energy_identity(seed));
    rep.checks.push_back(criterion_gronwall(seed));
  }
  if (all || name == "gradient") {
    rep.checks.push_back(criterion_gradient_bounds(seed));
    rep.checks.push_back(criterion_intrinsic_metric(seed));
  }
  if (all || name == "gibbs-poisson") rep.checks.push_back(criterion_gibbs_sanity(seed));
  if (all || name == "ergodic") rep.checks.push_back(criterion_ergodic_average(seed));
  if (rep.checks.empty()) throw std::invalid_argument("confgeo: unknown suite \"" + name + "\"");
  return rep;
}

}  // namespace confgeo::verify
