#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "confgeo/configuration.hpp"
#include "confgeo/geometry.hpp"
#include "confgeo/potential.hpp"
#include "confgeo/vec.hpp"

namespace confgeo {

/// Homogeneous Poisson sample on an axis box: count ~ Poisson(intensity * vol),
/// points i.i.d. uniform.
inline Configuration sample_poisson(double intensity, const Region& window, std::mt19937_64& rng) {
  if (!(intensity > 0)) throw std::invalid_argument("confgeo: Poisson intensity must be positive");
  if (!window.is_box()) throw std::invalid_argument("confgeo: Poisson sampling needs a box window");
  const double mean = intensity * window.box_volume();
  std::poisson_distribution<int> count_dist(mean);
  const int count = count_dist(rng);
  Configuration out = Configuration::empty(window.dim());
  out.points.reserve(count);
  const Vec& lo = window.box_lo();
  const Vec& hi = window.box_hi();
  for (int k = 0; k < count; ++k) {
    Vec p(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i)
      p[i] = std::uniform_real_distribution<double>(lo[i], hi[i])(rng);
    out.points.push_back(std::move(p));
  }
  return out;
}

/// Mixed Poisson: draw an intensity from the discrete mixture, then sample;
/// intensity 0 yields the empty configuration.
inline Configuration sample_mixed_poisson(const std::vector<std::pair<double, double>>& mixture,
                                          const Region& window, std::mt19937_64& rng) {
  if (mixture.empty()) throw std::invalid_argument("confgeo: mixture must be nonempty");
  double wsum = 0;
  for (const auto& [s, w] : mixture) {
    if (s < 0 || w < 0) throw std::invalid_argument("confgeo: mixture entries must be nonnegative");
    wsum += w;
  }
  if (!(std::fabs(wsum - 1.0) < 1e-9)) throw std::invalid_argument("confgeo: mixture weights must sum to 1");
  double all_zero = 0;
  for (const auto& [s, w] : mixture)
    if (s == 0.0) all_zero += w;
  if (all_zero >= 1.0) throw std::invalid_argument("confgeo: mixture must put mass on a positive intensity");

  double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double s_drawn = mixture.back().first;
  for (const auto& [s, w] : mixture) {
    if (u < w) {
      s_drawn = s;
      break;
    }
    u -= w;
  }
  if (s_drawn == 0.0) return Configuration::empty(window.dim());
  return sample_poisson(s_drawn, window, rng);
}

/// Grand-canonical specification in a box window: activity, pair potential and
/// a frozen boundary configuration outside the window.
struct GibbsSpec {
  Region window = Region::centered_box(1, 1.0);
  double activity = 1.0;
  PairPotential potential = zero_potential();
  Configuration boundary = Configuration::empty(1);
  double gaussian_step_fraction = 0.1;  // move proposal sd = fraction * max side

  void validate() const {
    if (!window.is_box()) throw std::invalid_argument("confgeo: Gibbs window must be an axis box");
    if (!(activity > 0)) throw std::invalid_argument("confgeo: activity must be positive");
    if (boundary.dim != window.dim()) throw std::invalid_argument("confgeo: boundary dimension mismatch");
    for (const Vec& p : boundary.points)
      if (window.contains(p)) throw std::invalid_argument("confgeo: boundary point inside the window");
  }
};

namespace detail {

// Energy of the in-window points against themselves (ordered double count)
// plus single-counted interaction with the frozen boundary.
inline double window_energy(const std::vector<Vec>& pts, const Configuration& boundary,
                            const PairPotential& phi) {
  double total = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double term = phi(sub(pts[i], pts[j]));
      if (!std::isfinite(term)) return std::numeric_limits<double>::infinity();
      total += 2.0 * term;
    }
  for (const Vec& x : pts)
    for (const Vec& b : boundary.points) {
      const double term = phi(sub(x, b));
      if (!std::isfinite(term)) return std::numeric_limits<double>::infinity();
      total += term;
    }
  return total;
}

// Energy increment of inserting x into pts.
inline double insertion_energy(const Vec& x, const std::vector<Vec>& pts, const Configuration& boundary,
                               const PairPotential& phi) {
  double total = 0;
  for (const Vec& y : pts) {
    const double term = phi(sub(x, y));
    if (!std::isfinite(term)) return std::numeric_limits<double>::infinity();
    total += 2.0 * term;
  }
  for (const Vec& b : boundary.points) {
    const double term = phi(sub(x, b));
    if (!std::isfinite(term)) return std::numeric_limits<double>::infinity();
    total += term;
  }
  return total;
}

}  // namespace detail

struct ChainStats {
  long births_proposed = 0, births_accepted = 0;
  long deaths_proposed = 0, deaths_accepted = 0;
  long moves_proposed = 0, moves_accepted = 0;
  long steps = 0;
  std::uint64_t seed = 0;
};

struct GibbsChain {
  std::vector<Configuration> samples;
  ChainStats stats;
  Configuration final_state;
  double final_energy = 0;
};

/// Metropolis birth/death/move sampler for the grand-canonical specification,
/// started from the empty configuration. Moves are proposed with probability
/// 1/3 each; the energy is tracked incrementally.
inline GibbsChain gibbs_mcmc(const GibbsSpec& spec, long steps, long burn_in, long thin,
                             std::uint64_t seed) {
  spec.validate();
  if (!(steps > burn_in) || burn_in < 0 || thin < 1)
    throw std::invalid_argument("confgeo: need steps > burn_in >= 0 and thin >= 1");

  const Vec& lo = spec.window.box_lo();
  const Vec& hi = spec.window.box_hi();
  const double volume = spec.window.box_volume();
  double max_side = 0;
  for (std::size_t i = 0; i < lo.size(); ++i) max_side = std::max(max_side, hi[i] - lo[i]);
  const double move_sd = spec.gaussian_step_fraction * max_side;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto uniform_point = [&]() {
    Vec p(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i) p[i] = lo[i] + (hi[i] - lo[i]) * unit(rng);
    return p;
  };

  GibbsChain chain;
  chain.stats.seed = seed;
  std::vector<Vec> pts;
  double energy = 0;

  for (long step = 1; step <= steps; ++step) {
    const double which = unit(rng);
    const int n = static_cast<int>(pts.size());
    if (which < 1.0 / 3.0) {
      ++chain.stats.births_proposed;
      Vec x = uniform_point();
      const double de = detail::insertion_energy(x, pts, spec.boundary, spec.potential);
      const double log_ratio = std::log(spec.activity * volume / (n + 1.0)) - de;
      if (std::isfinite(de) && std::log(unit(rng)) < log_ratio) {
        pts.push_back(std::move(x));
        energy += de;
        ++chain.stats.births_accepted;
      }
    } else if (which < 2.0 / 3.0) {
      ++chain.stats.deaths_proposed;
      if (n > 0) {
        const int k = std::uniform_int_distribution<int>(0, n - 1)(rng);
        Vec x = pts[k];
        std::swap(pts[k], pts.back());
        pts.pop_back();
        const double gain = detail::insertion_energy(x, pts, spec.boundary, spec.potential);
        const double de = -gain;
        const double log_ratio = std::log(n / (spec.activity * volume)) - de;
        if (std::isfinite(de) && std::log(unit(rng)) < log_ratio) {
          energy += de;
          ++chain.stats.deaths_accepted;
        } else {
          pts.push_back(std::move(x));
          std::swap(pts[k], pts.back());
        }
      }
    } else {
      ++chain.stats.moves_proposed;
      if (n > 0) {
        const int k = std::uniform_int_distribution<int>(0, n - 1)(rng);
        Vec proposal = pts[k];
        for (double& c : proposal) c += move_sd * gauss(rng);
        if (spec.window.contains(proposal)) {
          Vec old = pts[k];
          std::swap(pts[k], pts.back());
          pts.pop_back();
          const double e_old = detail::insertion_energy(old, pts, spec.boundary, spec.potential);
          const double e_new = detail::insertion_energy(proposal, pts, spec.boundary, spec.potential);
          const double de = e_new - e_old;
          if (std::isfinite(e_new) && std::log(unit(rng)) < -de) {
            pts.push_back(std::move(proposal));
            energy += de;
            ++chain.stats.moves_accepted;
          } else {
            pts.push_back(std::move(old));
          }
          std::swap(pts[k], pts.back());
        }
      }
    }
    if (step > burn_in && (step - burn_in) % thin == 0) {
      Configuration snap = Configuration::empty(spec.window.dim());
      snap.points = pts;
      chain.samples.push_back(std::move(snap));
    }
  }
  chain.stats.steps = steps;
  chain.final_state = Configuration::empty(spec.window.dim());
  chain.final_state.points = pts;
  chain.final_energy = energy;
  return chain;
}

/// Recomputed window energy of a chain state; the incremental tracking in
/// gibbs_mcmc must agree with this.
inline double chain_energy(const GibbsSpec& spec, const Configuration& state) {
  return detail::window_energy(state.points, spec.boundary, spec.potential);
}

/// Monte-Carlo estimate of the partition function: mean and standard error of
/// exp(-E(boundary + omega)) over Poisson(activity) draws omega in the window.
inline std::pair<double, double> partition_function_mc(const GibbsSpec& spec, int n_samples,
                                                       std::uint64_t seed) {
  spec.validate();
  if (n_samples < 100) throw std::invalid_argument("confgeo: partition function MC needs >= 100 samples");
  std::mt19937_64 rng(seed);
  double sum = 0, sum_sq = 0;
  for (int k = 0; k < n_samples; ++k) {
    const Configuration omega = sample_poisson(spec.activity, spec.window, rng);
    const double e = detail::window_energy(omega.points, spec.boundary, spec.potential);
    const double w = std::isfinite(e) ? std::exp(-e) : 0.0;
    sum += w;
    sum_sq += w * w;
  }
  const double mean = sum / n_samples;
  const double var = std::max(0.0, sum_sq / n_samples - mean * mean);
  return {mean, std::sqrt(var / n_samples)};
}

struct EmptyProbabilityReport {
  double frequency = 0;
  double bound = 0;  // 1 / (1 + activity * volume)
  double stderr_freq = 0;
  bool holds = true;
  long samples = 0;
};

/// Empirical frequency of the empty configuration in a chain, against the
/// 1/(1 + z vol) bound (valid for chains with empty boundary).
inline EmptyProbabilityReport empty_probability_check(const GibbsSpec& spec,
                                                      const std::vector<Configuration>& chain) {
  if (!spec.boundary.is_empty())
    throw std::invalid_argument("confgeo: empty-probability bound needs an empty boundary");
  EmptyProbabilityReport rep;
  rep.samples = static_cast<long>(chain.size());
  if (chain.empty()) throw std::invalid_argument("confgeo: empty chain");
  long hits = 0;
  for (const Configuration& s : chain)
    if (s.is_empty()) ++hits;
  rep.frequency = static_cast<double>(hits) / static_cast<double>(chain.size());
  rep.bound = 1.0 / (1.0 + spec.activity * spec.window.box_volume());
  rep.stderr_freq = std::sqrt(std::max(rep.frequency * (1.0 - rep.frequency), 1e-12) /
                              static_cast<double>(chain.size()));
  rep.holds = rep.frequency <= rep.bound + 3.0 * rep.stderr_freq;
  return rep;
}

}  // namespace confgeo
