#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace confgeo;

TEST_CASE("test-function gradients match finite differences") {
  std::mt19937_64 rng(397);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  const CompactTestFunction f = bump_test_function(Ball{Vec{0.3, -0.2}, 1.4}, 1.7);
  for (int k = 0; k < 100; ++k) {
    const Vec x{unif(rng), unif(rng)};
    const Vec g = f.gradient(x);
    const double h = 1e-5;
    for (int i = 0; i < 2; ++i) {
      Vec hi = x, lo = x;
      hi[i] += h;
      lo[i] -= h;
      CHECK(g[i] == Catch::Approx((f(hi) - f(lo)) / (2 * h)).margin(1e-6));
    }
    if (dist(x, f.support.center) >= f.support.radius) {
      CHECK(f(x) == 0.0);
      CHECK(norm(g) == 0.0);
    }
  }
}

TEST_CASE("cylinder evaluation") {
  const CompactTestFunction f = bump_test_function(Ball{Vec{0.0}, 1.0}, 1.0);
  const CylinderFunction u = tanh_cylinder({f}, Vec{1.0}, 0.0);
  CHECK(eval_cylinder(u, Configuration::empty(1)) == Catch::Approx(std::tanh(0.0)));
  // single point at distance 0.5 from the bump center
  const double fv = f(Vec{0.5});
  CHECK(eval_cylinder(u, Configuration::line({0.5})) == Catch::Approx(std::tanh(fv)));
  // inner sums are additive over points
  CHECK(eval_cylinder(u, Configuration::line({0.5, -0.5})) == Catch::Approx(std::tanh(2 * fv)));
}

TEST_CASE("cylinder gradient: zero off support and chain rule") {
  const CompactTestFunction f = bump_test_function(Ball{Vec{0.0}, 1.0}, 1.0);
  const CylinderFunction u = tanh_cylinder({f}, Vec{1.0}, 0.0);
  const TangentVector far = gradient_cylinder(u, Configuration::line({5.0, -7.0}));
  CHECK(far.norm() == 0.0);

  const Configuration g = Configuration::line({0.4});
  const TangentVector grad = gradient_cylinder(u, g);
  const double s = f(Vec{0.4});
  const double expected = (1.0 - std::tanh(s) * std::tanh(s)) * f.gradient(Vec{0.4})[0];
  CHECK(grad.at_points[0][0] == Catch::Approx(expected));
}

TEST_CASE("finite-difference directional derivatives match the gradient formula") {
  std::mt19937_64 rng(401);
  for (int k = 0; k < 30; ++k) {
    const int d = 1 + k % 2;
    const Configuration g = ct::rand_config(rng, d, 1 + k % 10);
    const CylinderFunction u = verify::random_cylinder(rng, d);
    const CompactVectorField v = verify::random_bump_field(rng, d, 0.3, 1.0);
    const double exact = pair_with_field(gradient_cylinder(u, g), v, g);
    const auto eval = [&u](const Configuration& c) { return eval_cylinder(u, c); };
    const double e1 = std::fabs(directional_derivative_fd(eval, g, v, 1e-3) - exact);
    const double e2 = std::fabs(directional_derivative_fd(eval, g, v, 5e-4) - exact);
    CHECK(e1 <= 1e-4);
    if (e1 > 1e-8 && e2 > 0) CHECK(std::log2(e1 / e2) >= 1.9);
  }
  const auto constant = [](const Configuration&) { return 3.0; };
  std::mt19937_64 rng2(402);
  CHECK(directional_derivative_fd(constant, ct::rand_config(rng2, 1, 3),
                                  verify::random_bump_field(rng2, 1, 0.3, 1.0), 1e-3) == 0.0);
}

TEST_CASE("lipschitz audit") {
  std::mt19937_64 rng(409);
  std::vector<Configuration> set{ct::rand_config(rng, 1, 3), ct::rand_config(rng, 1, 3)};
  const auto u = [&set](const Configuration& c) { return clipped_set_distance(c, set, 2.0); };
  std::vector<std::pair<Configuration, Configuration>> pairs;
  for (int k = 0; k < 40; ++k) pairs.emplace_back(ct::rand_config(rng, 1, 3), ct::rand_config(rng, 1, 3));
  pairs.emplace_back(ct::rand_config(rng, 1, 2), ct::rand_config(rng, 1, 3));  // infinite pair, skipped
  const LipschitzAudit audit = lipschitz_audit(u, pairs);
  CHECK(audit.constant <= 1.0 + 1e-9);
  CHECK(audit.skipped_infinite == 1);

  const auto constant_fn = [](const Configuration&) { return 1.0; };
  CHECK(lipschitz_audit(constant_fn, pairs).constant == 0.0);

  const auto scaled_fn = [&u](const Configuration& c) { return 2.5 * u(c); };
  CHECK(lipschitz_audit(scaled_fn, pairs).constant ==
        Catch::Approx(2.5 * audit.constant).margin(1e-12));
}

TEST_CASE("McShane extension: values and Lipschitz property") {
  std::mt19937_64 rng(419);
  const Configuration w0 = ct::rand_config(rng, 1, 3);
  // single sample, gamma at rho = 0.25 from it
  Configuration g = w0;
  g.points[0][0] += 0.25;
  CHECK(mcshane_extend({{w0, 1.0}}, 1.0, g) == Catch::Approx(1.0 - 0.25 * 1.0).margin(1e-12));
  CHECK(mcshane_extend({{w0, 1.0}}, 1.0, w0) == Catch::Approx(1.0));

  // all samples at infinite distance: extension is 0
  CHECK(mcshane_extend({{ct::rand_config(rng, 1, 5), 3.0}}, 1.0, ct::rand_config(rng, 1, 2)) == 0.0);

  // C-Lipschitz samples: the extension reproduces them and audits at <= C
  const double lip = 2.0;
  std::vector<Configuration> anchor{ct::rand_config(rng, 1, 3)};
  std::vector<std::pair<Configuration, double>> samples;
  for (int k = 0; k < 12; ++k) {
    const Configuration c = ct::rand_config(rng, 1, 3);
    samples.emplace_back(c, lip * clipped_set_distance(c, anchor, 1.5));
  }
  for (const auto& [c, value] : samples)
    CHECK(mcshane_extend(samples, lip, c) == Catch::Approx(value).margin(1e-9));
  const auto ext = [&samples, lip](const Configuration& c) { return mcshane_extend(samples, lip, c); };
  std::vector<std::pair<Configuration, Configuration>> pairs;
  for (int k = 0; k < 40; ++k) pairs.emplace_back(ct::rand_config(rng, 1, 3), ct::rand_config(rng, 1, 3));
  CHECK(lipschitz_audit(ext, pairs).constant <= lip + 1e-9);
}

TEST_CASE("intrinsic metric report") {
  std::mt19937_64 rng(421);
  const Configuration g = ct::rand_config(rng, 1, 4, 1.5);
  const Configuration w = ct::rand_config(rng, 1, 4, 1.5);
  double enclose = 2.0;
  for (const auto& cfg : {g, w})
    for (const Vec& p : cfg.points) enclose = std::max(enclose, norm(p) + 1.0);
  const double rho = transport_distance_value(g, w).value();

  const IntrinsicReport rep = intrinsic_metric_gap(g, w, Vec{0.0}, {1.0, enclose}, rho + 1.0);
  CHECK(rep.gap == Catch::Approx(0.0).margin(1e-9));
  for (const IntrinsicRow& row : rep.rows) CHECK(row.fd_ratio <= 1.02);

  // identical configurations: all values 0
  const IntrinsicReport same = intrinsic_metric_gap(g, g, Vec{0.0}, {1.0, enclose}, 1.0);
  for (const IntrinsicRow& row : same.rows) CHECK(row.value == 0.0);
  CHECK(same.gap == 0.0);

  // small clip: the maximum is the clip and the gap is rho - clip
  if (rho > 0.2) {
    const double c = 0.5 * rho;
    const IntrinsicReport clipped = intrinsic_metric_gap(g, w, Vec{0.0}, {enclose}, c);
    CHECK(clipped.best_value == Catch::Approx(c));
    CHECK(clipped.gap == Catch::Approx(rho - c));
  }
}

TEST_CASE("Dirichlet energy Monte Carlo matches the Campbell formula") {
  const double z = 1.5;
  const Region box = Region::centered_box(1, 3.0);
  const CompactTestFunction f = bump_test_function(Ball{Vec{0.0}, 1.0}, 1.0);
  // nearly linear outer: scale * tanh(s / scale) has derivative ~ 1 for |s| << scale
  const double big = 100.0;
  const CylinderFunction u = tanh_cylinder({f}, Vec{1.0 / big}, 0.0, big);

  const auto sampler = [&](std::mt19937_64& rng) { return sample_poisson(z, box, rng); };
  const auto [estimate, se] = dirichlet_energy_mc(u, sampler, 4000, 12345);

  double grad_sq = 0;  // z * integral of |f'|^2
  const int panels = 2000;
  const double h = 2.0 / panels;
  for (int i = 0; i <= panels; ++i) {
    const double x = -1.0 + i * h;
    const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    grad_sq += w * norm_sq(f.gradient(Vec{x}));
  }
  grad_sq *= h / 3.0;
  CHECK(std::fabs(estimate - z * grad_sq) <= 3.0 * se + 2e-3);

  const CylinderFunction constant = tanh_cylinder({f}, Vec{0.0}, 0.3);
  CHECK(dirichlet_energy_mc(constant, sampler, 200, 1).first == 0.0);
}

TEST_CASE("ergodic averages: constants, margins, shift bound") {
  const CompactTestFunction f = bump_test_function(Ball{Vec{0.0}, 2.0}, 1.0);
  const CylinderFunction constant = tanh_cylinder({f}, Vec{0.0}, 0.5);  // == tanh(0.5) everywhere
  std::mt19937_64 rng(431);
  const Configuration g = sample_poisson(1.0, Region::centered_box(1, 12.0), rng);
  const std::vector<double> avg = ergodic_average(g, 12.0, constant, {2.0, 5.0}, 0.5);
  for (double a : avg) CHECK(a == Catch::Approx(std::tanh(0.5)));

  CHECK_THROWS_AS(ergodic_average(g, 12.0, constant, {11.0}, 0.5), std::invalid_argument);

  // lattice shift inside the margin changes the average by at most the
  // boundary-band fraction times max |u|
  const CylinderFunction u = exp_decay_cylinder({f}, Vec{1.0});
  const Configuration big = sample_poisson(1.0, Region::centered_box(1, 20.0), rng);
  const double n = 6.0, step = 0.25;
  const double base = ergodic_average(big, 20.0, u, {n}, step)[0];
  const double shifted = ergodic_average(shift(big, Vec{1.0}), 21.0, u, {n}, step)[0];
  const double band_fraction = 1.0 / (2.0 * n);  // |shift| / box side
  CHECK(std::fabs(base - shifted) <= band_fraction * 1.0 + 1e-9);
}

TEST_CASE("ergodic averages approach the Poisson expectation") {
  const double z = 1.0;
  const CompactTestFunction f = bump_test_function(Ball{Vec{0.0}, 2.0}, 1.0);
  const CylinderFunction u = exp_decay_cylinder({f}, Vec{1.0});
  double integral = 0;
  const int panels = 2000;
  const double h = 4.0 / panels;
  for (int i = 0; i <= panels; ++i) {
    const double x = -2.0 + i * h;
    const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    integral += w * (1.0 - std::exp(-f(Vec{x})));
  }
  integral *= h / 3.0;
  const double expectation = std::exp(-z * integral);

  const int reps = 12;
  double mean = 0, m2 = 0;
  for (int r = 0; r < reps; ++r) {
    std::mt19937_64 rng(500 + r);
    const Configuration g = sample_poisson(z, Region::centered_box(1, 26.0), rng);
    const double avg = ergodic_average(g, 26.0, u, {24.0}, 0.25)[0];
    mean += avg;
    m2 += avg * avg;
  }
  mean /= reps;
  const double se = std::sqrt(std::max(0.0, m2 / reps - mean * mean) / (reps - 1));
  CHECK(std::fabs(mean - expectation) <= 3.0 * se + 1e-3);
}
