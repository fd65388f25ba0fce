#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "confgeo/configuration.hpp"
#include "confgeo/coupling.hpp"
#include "confgeo/cylinder.hpp"
#include "confgeo/vec.hpp"
#include "confgeo/vector_field.hpp"

namespace confgeo {

using ConfigurationFunctional = std::function<double(const Configuration&)>;

/// Central difference (u(psi_h gamma) - u(psi_{-h} gamma)) / (2h) along the
/// flow of V.
inline double directional_derivative_fd(const ConfigurationFunctional& u, const Configuration& gamma,
                                        const CompactVectorField& v, double h,
                                        double flow_step = kDefaultFlowStep) {
  if (h == 0.0) throw std::invalid_argument("confgeo: finite-difference step must be nonzero");
  const double step = std::min(flow_step, std::fabs(h));
  const double up = u(pushforward(v, gamma, h, step));
  const double dn = u(pushforward(v, gamma, -h, step));
  if (!std::isfinite(up) || !std::isfinite(dn))
    throw std::domain_error("confgeo: functional evaluated non-finite along the flow");
  return (up - dn) / (2.0 * h);
}

struct LipschitzAudit {
  double constant = 0;       // max |u(a)-u(b)| / rho(a,b) over usable pairs
  std::size_t worst = 0;     // index of the pair attaining it
  int skipped_infinite = 0;  // pairs at infinite distance, skipped
};

/// Empirical Lipschitz constant of a functional over given configuration pairs.
inline LipschitzAudit lipschitz_audit(const ConfigurationFunctional& u,
                                      const std::vector<std::pair<Configuration, Configuration>>& pairs) {
  LipschitzAudit audit;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const ExtendedDistance d = transport_distance_value(pairs[k].first, pairs[k].second);
    if (d.is_infinite()) {
      ++audit.skipped_infinite;
      continue;
    }
    if (d.value() <= 0) continue;
    const double ratio = std::fabs(u(pairs[k].first) - u(pairs[k].second)) / d.value();
    if (ratio > audit.constant) {
      audit.constant = ratio;
      audit.worst = k;
    }
  }
  return audit;
}

/// McShane extension of sampled values: sup over samples of
/// value - C * rho(sample, gamma), with infinite distances excluded and 0 when
/// every sample is excluded.
inline double mcshane_extend(const std::vector<std::pair<Configuration, double>>& samples, double lip,
                             const Configuration& gamma) {
  if (samples.empty()) throw std::invalid_argument("confgeo: McShane extension needs samples");
  if (!(lip > 0)) throw std::invalid_argument("confgeo: McShane constant must be positive");
  bool any = false;
  double best = 0;
  for (const auto& [omega, value] : samples) {
    const ExtendedDistance d = transport_distance_value(omega, gamma);
    if (d.is_infinite()) continue;
    const double candidate = value - lip * d.value();
    if (!any || candidate > best) best = candidate;
    any = true;
  }
  return any ? best : 0.0;
}

struct IntrinsicRow {
  double radius = 0;
  ExtendedDistance local_distance;  // rho_{omega,r}(gamma)
  double value = 0;                 // min(clip, rho_{omega,r}(gamma)) = u_r(gamma) - u_r(omega)
  double fd_ratio = 0;              // max |directional FD| / ||V||_gamma over the probes
};

struct IntrinsicReport {
  std::vector<IntrinsicRow> rows;
  ExtendedDistance rho;
  double best_value = 0;
  double gap = 0;  // rho - best value (when rho is finite)
};

/// Evaluates the clipped localized distances u_r = clip ^ rho_{omega,r} over a
/// family of radii around a base point, together with a finite-difference
/// bound check on their gradient norms; the supremum of u_r(gamma) - u_r(omega)
/// approaches rho(gamma, omega) for large clip and radius.
inline IntrinsicReport intrinsic_metric_gap(const Configuration& gamma, const Configuration& omega,
                                            const Vec& base, const std::vector<double>& radii, double clip,
                                            int fd_probes = 3, std::uint64_t seed = 97) {
  if (!(clip > 0)) throw std::invalid_argument("confgeo: clip constant must be positive");
  if (radii.empty()) throw std::invalid_argument("confgeo: need at least one radius");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1])) throw std::invalid_argument("confgeo: radii must be increasing");

  IntrinsicReport report;
  report.rho = transport_distance_value(gamma, omega);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);

  for (double r : radii) {
    const Ball ball{base, r};
    IntrinsicRow row;
    row.radius = r;
    row.local_distance = localized_distance(gamma, omega, ball).distance;
    row.value = row.local_distance.clipped(clip);

    const ConfigurationFunctional u = [&omega, &ball, clip](const Configuration& g) {
      return localized_distance(g, omega, ball).distance.clipped(clip);
    };
    for (int probe = 0; probe < fd_probes; ++probe) {
      if (gamma.is_empty()) break;
      Vec center = gamma.points[static_cast<std::size_t>(probe) % gamma.points.size()];
      Vec direction(center.size());
      for (double& c : direction) c = unif(rng);
      if (norm(direction) == 0.0) direction[0] = 1.0;
      direction = scaled(direction, 1.0 / norm(direction));
      const CompactVectorField v = constant_bump_field(Ball{center, 1.0 + 0.5 * probe}, direction);
      const double vn = tangent_norm(v, gamma);
      if (vn <= 1e-12) continue;
      const double fd = directional_derivative_fd(u, gamma, v, 1e-4);
      row.fd_ratio = std::max(row.fd_ratio, std::fabs(fd) / vn);
    }
    report.best_value = std::max(report.best_value, row.value);
    report.rows.push_back(std::move(row));
  }
  if (report.rho.is_finite()) report.gap = report.rho.value() - report.best_value;
  return report;
}

/// Monte-Carlo Dirichlet energy: mean and standard error of the squared
/// gradient norm of a cylinder function over sampler draws.
inline std::pair<double, double> dirichlet_energy_mc(const CylinderFunction& u,
                                                     const std::function<Configuration(std::mt19937_64&)>& sampler,
                                                     int n, std::uint64_t seed) {
  if (n < 100) throw std::invalid_argument("confgeo: Dirichlet energy MC needs >= 100 draws");
  std::mt19937_64 rng(seed);
  double sum = 0, sum_sq = 0;
  for (int k = 0; k < n; ++k) {
    const Configuration gamma = sampler(rng);
    const double g = gradient_cylinder(u, gamma).norm_sq();
    sum += g;
    sum_sq += g * g;
  }
  const double mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - mean * mean);
  return {mean, std::sqrt(var / n)};
}

/// Spatial averages (1/|V_n|) integral over V_n of u(shift(gamma, -x)) dx on a
/// midpoint grid, for each box half-width n in box_sizes. gamma must extend
/// beyond the largest box by the reach of the inner functions.
inline std::vector<double> ergodic_average(const Configuration& gamma, double sample_half_width,
                                           const CylinderFunction& u, const std::vector<double>& box_sizes,
                                           double grid_step) {
  if (!(grid_step > 0)) throw std::invalid_argument("confgeo: grid step must be positive");
  if (box_sizes.empty()) throw std::invalid_argument("confgeo: need at least one box size");
  double reach = 0;
  for (const CompactTestFunction& f : u.inner) {
    double c = 0;
    for (double x : f.support.center) c = std::max(c, std::fabs(x));
    reach = std::max(reach, c + f.support.radius);
  }
  const double n_max = *std::max_element(box_sizes.begin(), box_sizes.end());
  if (sample_half_width < n_max + reach - 1e-9)
    throw std::invalid_argument("confgeo: sampled window too small for the requested averages");

  const int d = gamma.dim;
  std::vector<double> averages;
  averages.reserve(box_sizes.size());
  for (double n : box_sizes) {
    const int cells = std::max(1, static_cast<int>(std::ceil(2.0 * n / grid_step)));
    const double h = 2.0 * n / cells;
    std::vector<int> idx(d, 0);
    double sum = 0;
    long count = 0;
    for (;;) {
      Vec x(d);
      for (int i = 0; i < d; ++i) x[i] = -n + (idx[i] + 0.5) * h;
      sum += eval_cylinder(u, shift(gamma, scaled(x, -1.0)));
      ++count;
      int i = 0;
      while (i < d && ++idx[i] == cells) idx[i++] = 0;
      if (i == d) break;
    }
    averages.push_back(sum / static_cast<double>(count));
  }
  return averages;
}

}  // namespace confgeo
