#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace confgeo;

namespace {

PairPotential unit_step_potential() {
  // phi = 1 on |x| <= 1, 0 beyond (test helper, not smooth)
  PairPotential p;
  p.support_radius = 1.0;
  p.value = [](const Vec& dx) { return norm(dx) <= 1.0 ? 1.0 : 0.0; };
  return p;
}

}  // namespace

TEST_CASE("conditional energy: ordered double count") {
  const Region window = Region::centered_box(1, 2.0);
  const PairPotential phi = unit_step_potential();
  CHECK(conditional_energy(Configuration::empty(1), window, phi) == 0.0);
  CHECK(conditional_energy(Configuration::line({0.3}), window, phi) == 0.0);
  CHECK(conditional_energy(Configuration::line({0.0, 0.5}), window, phi) == 2.0);

  // one point in the window, one outside: single-counted cross pair
  const Region small = Region::centered_box(1, 0.25);
  CHECK(conditional_energy(Configuration::line({0.0, 0.5}), small, phi) == 1.0);

  const PairPotential hc = hard_core_potential(0.4);
  CHECK(std::isinf(conditional_energy(Configuration::line({0.0, 0.3}), window, hc)));
}

TEST_CASE("conditional energy: locality and reflection symmetry") {
  std::mt19937_64 rng(307);
  const PairPotential phi = smooth_well_potential(0.8, 0.4, 1.0, 0.6);
  const Region window = Region::centered_box(2, 3.0);
  for (int k = 0; k < 30; ++k) {
    Configuration g = ct::rand_config(rng, 2, 5, 2.0);
    const double base = conditional_energy(g, window, phi);

    Configuration extended = g;
    extended.points.push_back(Vec{50.0, 50.0});  // farther than the support from everything
    const Region big = Region::centered_box(2, 100.0);
    CHECK(conditional_energy(extended, big, phi) == Catch::Approx(conditional_energy(g, big, phi)));

    Configuration reflected = g;
    for (Vec& p : reflected.points) p = scaled(p, -1.0);
    CHECK(conditional_energy(reflected, window, phi) == Catch::Approx(base).margin(1e-12));
  }
}

TEST_CASE("interaction energy") {
  const PairPotential phi = unit_step_potential();
  const Configuration a = Configuration::line({0.0});
  const Configuration b = Configuration::line({5.0});
  CHECK(interaction_energy(a, b, phi) == 0.0);

  PairPotential well;
  well.support_radius = 1.0;
  well.value = [](const Vec& dx) { return norm(dx) <= 1.0 ? -0.3 : 0.0; };
  CHECK(interaction_energy(Configuration::line({0.0}), Configuration::line({0.6}), well) ==
        Catch::Approx(-0.3));

  std::mt19937_64 rng(311);
  const PairPotential sw = smooth_well_potential(1.0, 0.5, 1.2, 0.7);
  for (int k = 0; k < 20; ++k) {
    const Configuration x = ct::rand_config(rng, 2, 4);
    const Configuration y = ct::rand_config(rng, 2, 3);
    CHECK(interaction_energy(x, y, sw) == Catch::Approx(interaction_energy(y, x, sw)).margin(1e-12));
  }
}

TEST_CASE("potential family invariants") {
  std::mt19937_64 rng(313);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  const PairPotential well = smooth_well_potential(1.5, 0.4, 1.1, 0.5, 0.1);
  for (int k = 0; k < 200; ++k) {
    Vec dx{unif(rng), unif(rng)};
    const double v = well(dx);
    const double vr = well(scaled(dx, -1.0));
    if (std::isfinite(v)) CHECK(v == Catch::Approx(vr).margin(1e-12));
    if (norm(dx) > well.support_radius) CHECK(v == 0.0);
    if (norm(dx) < well.hard_core_radius) CHECK(std::isinf(v));
  }
  // gradient matches finite differences away from the core
  for (int k = 0; k < 50; ++k) {
    Vec dx{unif(rng), unif(rng)};
    const double r = norm(dx);
    if (r < 0.2 || r > 1.05) continue;
    const double h = 1e-6;
    Vec g = well.gradient(dx);
    for (int i = 0; i < 2; ++i) {
      Vec hi = dx, lo = dx;
      hi[i] += h;
      lo[i] -= h;
      CHECK(g[i] == Catch::Approx((well(hi) - well(lo)) / (2 * h)).margin(1e-5));
    }
  }
}

TEST_CASE("superstability report") {
  const PairPotential phi = zero_potential();
  const BoundReport empty = superstability_report(Configuration::empty(1), 2, 0.5, 0.0, phi);
  CHECK(empty.lhs == 0.0);
  CHECK(empty.rhs == 0.0);
  CHECK(empty.holds);

  // single point: lhs = 0, rhs = A - B
  const Configuration one = Configuration::line({0.2});
  CHECK(superstability_report(one, 1, 0.5, 1.0, phi).holds);
  CHECK_FALSE(superstability_report(one, 1, 0.5, 0.0, phi).holds);

  // purely repulsive potential on sampled configurations, A small
  std::mt19937_64 rng(317);
  const PairPotential rep = smooth_well_potential(1.0, 0.5, 0.9, 0.0);
  for (int k = 0; k < 20; ++k) {
    const Configuration g = ct::rand_config(rng, 1, 6, 2.0);
    const BoundReport r = superstability_report(g, 2, 1e-3, 1.0, rep);
    CHECK(r.lhs >= 0.0);
    CHECK(r.holds);
  }
}

TEST_CASE("lower regularity report") {
  CubeUnion left, right;
  left.cubes.insert(LatticeCube{{0}});
  right.cubes.insert(LatticeCube{{3}});
  CHECK_FALSE(left.disjoint_from(left));

  const PairPotential phi = zero_potential();
  const auto decay = [](int k) { return std::pow(0.5, k); };
  const BoundReport empty =
      lower_regularity_report(Configuration::empty(1), left, right, decay, phi);
  CHECK(empty.lhs == 0.0);
  CHECK(empty.holds);

  // nonnegative potential: lhs >= 0 >= bound
  std::mt19937_64 rng(331);
  const PairPotential rep = smooth_well_potential(1.0, 1.0, 2.0, 0.0);
  CubeUnion wide_left, wide_right;
  for (int r = -4; r <= -1; ++r) wide_left.cubes.insert(LatticeCube{{r}});
  for (int r = 0; r <= 4; ++r) wide_right.cubes.insert(LatticeCube{{r}});
  for (int k = 0; k < 10; ++k) {
    const Configuration g = ct::rand_config(rng, 1, 8, 4.0);
    const BoundReport r = lower_regularity_report(g, wide_left, wide_right, decay, rep);
    CHECK(r.lhs >= 0.0);
    CHECK(r.holds);
  }

  // one attractive cross pair against a matched decay function
  PairPotential attract;
  attract.support_radius = 2.0;
  attract.value = [](const Vec& dx) { return norm(dx) <= 2.0 ? -0.25 : 0.0; };
  Configuration pair = Configuration::line({-0.2, 0.4});
  CubeUnion c0, c1;
  c0.cubes.insert(LatticeCube{{0}});
  c1.cubes.insert(LatticeCube{{-1}});
  // |r'-r''| = 1, counts 1 and 1, a(1) = 0.5 >= 0.25
  Configuration split = Configuration::line({0.1, -0.6});
  const BoundReport r = lower_regularity_report(split, c0, c1, decay, attract);
  CHECK(r.lhs == Catch::Approx(-0.25));
  CHECK(r.rhs == Catch::Approx(-0.5));
  CHECK(r.holds);

  CHECK_THROWS_AS(lower_regularity_report(split, c0, c0, decay, attract), std::invalid_argument);
}

TEST_CASE("Poisson sampler moments") {
  std::mt19937_64 rng(337);
  const Region box = Region::box(Vec{0.0, 0.0}, Vec{1.0, 1.0});
  const double z = 2.0;
  const int n = 10000;
  double mean = 0, m2 = 0;
  std::vector<int> left_counts, right_counts;
  const Region left = Region::box(Vec{0.0, 0.0}, Vec{0.5, 1.0});
  for (int k = 0; k < n; ++k) {
    const Configuration g = sample_poisson(z, box, rng);
    mean += g.size();
    m2 += static_cast<double>(g.size()) * g.size();
    left_counts.push_back(count_in(g, left));
    right_counts.push_back(g.size() - left_counts.back());
    CHECK(g.is_simple());
  }
  mean /= n;
  const double var = m2 / n - mean * mean;
  CHECK(std::fabs(mean - z) <= 3.0 * std::sqrt(z / n));
  CHECK(std::fabs(var - z) <= 3.0 * std::sqrt((z + 2 * z * z) / n));

  // counts in disjoint sub-boxes are uncorrelated
  double ml = 0, mr = 0, cov = 0;
  for (int k = 0; k < n; ++k) {
    ml += left_counts[k];
    mr += right_counts[k];
  }
  ml /= n;
  mr /= n;
  for (int k = 0; k < n; ++k) cov += (left_counts[k] - ml) * (right_counts[k] - mr);
  cov /= n;
  CHECK(std::fabs(cov) <= 3.0 * z / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("mixed Poisson: moments and degenerate mixtures") {
  std::mt19937_64 rng(347);
  const Region box = Region::box(Vec{0.0}, Vec{1.0});
  const std::vector<std::pair<double, double>> mix{{1.0, 0.5}, {3.0, 0.5}};
  const int n = 10000;
  double mean = 0, m2 = 0;
  for (int k = 0; k < n; ++k) {
    const Configuration g = sample_mixed_poisson(mix, box, rng);
    mean += g.size();
    m2 += static_cast<double>(g.size()) * g.size();
  }
  mean /= n;
  const double var = m2 / n - mean * mean;
  CHECK(std::fabs(mean - 2.0) <= 3.0 * std::sqrt(3.0 / n));  // Var(N) = E s + Var s = 3
  CHECK(std::fabs(var - 3.0) <= 0.35);

  CHECK_THROWS_AS(sample_mixed_poisson({{0.0, 1.0}}, box, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_mixed_poisson({{1.0, -0.5}, {2.0, 1.5}}, box, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_mixed_poisson({}, box, rng), std::invalid_argument);
}

TEST_CASE("gibbs chain is deterministic given the seed") {
  GibbsSpec spec;
  spec.window = Region::box(Vec{0.0, 0.0}, Vec{1.0, 1.0});
  spec.activity = 2.0;
  spec.potential = smooth_well_potential(1.0, 0.2, 0.5, 0.5);
  spec.boundary = Configuration::empty(2);
  const GibbsChain a = gibbs_mcmc(spec, 2000, 500, 5, 99);
  const GibbsChain b = gibbs_mcmc(spec, 2000, 500, 5, 99);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) CHECK(a.samples[i].points == b.samples[i].points);
  const GibbsChain c = gibbs_mcmc(spec, 2000, 500, 5, 100);
  bool identical = true;
  for (std::size_t i = 0; i < a.samples.size() && identical; ++i)
    identical = a.samples[i].points == c.samples[i].points;
  CHECK_FALSE(identical);
}

TEST_CASE("gibbs chain tracks energy incrementally and stays inside the window") {
  GibbsSpec spec;
  spec.window = Region::box(Vec{0.0, 0.0}, Vec{1.5, 1.5});
  spec.activity = 1.5;
  spec.potential = smooth_well_potential(1.2, 0.2, 0.6, 0.8, 0.05);
  spec.boundary = Configuration::of(2, {{-0.3, 0.5}, {1.9, 1.0}});
  const GibbsChain chain = gibbs_mcmc(spec, 4000, 1000, 10, 4242);
  CHECK(chain_energy(spec, chain.final_state) == Catch::Approx(chain.final_energy).margin(1e-9));
  for (const Configuration& s : chain.samples) {
    CHECK(s.is_simple());
    for (const Vec& p : s.points) CHECK(spec.window.contains(p));
  }
  CHECK(chain.stats.births_proposed > 0);
  CHECK(chain.stats.deaths_proposed > 0);
  CHECK(chain.stats.moves_proposed > 0);

  GibbsSpec bad = spec;
  bad.boundary = Configuration::of(2, {{0.5, 0.5}});
  CHECK_THROWS_AS(gibbs_mcmc(bad, 100, 10, 1, 1), std::invalid_argument);
}

TEST_CASE("zero-potential chain matches direct Poisson sampling") {
  GibbsSpec spec;
  spec.window = Region::box(Vec{0.0, 0.0}, Vec{1.0, 1.0});
  spec.activity = 3.0;
  spec.potential = zero_potential();
  spec.boundary = Configuration::empty(2);
  const long n = 4000, thin = 50;
  const GibbsChain chain = gibbs_mcmc(spec, 10000 + n * thin, 10000, thin, 31);

  std::mt19937_64 rng(32);
  double mean_chain = 0, mean_direct = 0, pairs_chain = 0, pairs_direct = 0;
  const double r0 = 0.2;
  auto close_pairs = [&](const Configuration& g) {
    int c = 0;
    for (int i = 0; i < g.size(); ++i)
      for (int j = i + 1; j < g.size(); ++j)
        if (dist(g.points[i], g.points[j]) <= r0) ++c;
    return c;
  };
  for (long k = 0; k < n; ++k) {
    mean_chain += chain.samples[k].size();
    pairs_chain += close_pairs(chain.samples[k]);
    const Configuration direct = sample_poisson(spec.activity, spec.window, rng);
    mean_direct += direct.size();
    pairs_direct += close_pairs(direct);
  }
  mean_chain /= n;
  mean_direct /= n;
  pairs_chain /= n;
  pairs_direct /= n;
  CHECK(std::fabs(mean_chain - mean_direct) <= 3.0 * std::sqrt(2.0 * 3.0 / n));
  // pair counts: mean ~ lambda^2/2 * P(|U-V| <= r0); tolerate 3 sigma with var ~ mean
  CHECK(std::fabs(pairs_chain - pairs_direct) <= 3.0 * std::sqrt(2.0 * std::max(pairs_direct, 0.1) / n));
}

TEST_CASE("hard-core chain never violates the core") {
  GibbsSpec spec;
  spec.window = Region::box(Vec{0.0, 0.0}, Vec{1.5, 1.5});
  spec.activity = 2.0;
  spec.potential = hard_core_potential(0.3);
  spec.boundary = Configuration::empty(2);
  const GibbsChain chain = gibbs_mcmc(spec, 20000, 2000, 20, 77);
  for (const Configuration& s : chain.samples) {
    for (int i = 0; i < s.size(); ++i)
      for (int j = i + 1; j < s.size(); ++j) CHECK(dist(s.points[i], s.points[j]) >= 0.3);
    // chain samples in a small window are tempered for a modest n
    CHECK(temperedness_check(s, 12, 2).ok);
  }
}

TEST_CASE("partition function MC") {
  GibbsSpec spec;
  spec.window = Region::box(Vec{0.0}, Vec{1.0});
  spec.activity = 1.0;
  spec.potential = zero_potential();
  spec.boundary = Configuration::empty(1);
  const auto [est0, se0] = partition_function_mc(spec, 500, 5);
  CHECK(est0 == Catch::Approx(1.0).margin(1e-12));
  CHECK(se0 == Catch::Approx(0.0).margin(1e-12));

  // tiny window inside the hard core: only 0/1-point draws contribute
  GibbsSpec tiny;
  tiny.window = Region::box(Vec{0.0}, Vec{0.4});
  tiny.activity = 2.0;
  tiny.potential = hard_core_potential(0.5);
  tiny.boundary = Configuration::empty(1);
  const auto [est, se] = partition_function_mc(tiny, 20000, 6);
  const double lambda = 2.0 * 0.4;
  const double expected = std::exp(-lambda) * (1.0 + lambda);  // P(N <= 1)
  CHECK(std::fabs(est - expected) <= 3.0 * se + 1e-12);
  CHECK(est >= expected - 3.0 * se);

  CHECK_THROWS_AS(partition_function_mc(spec, 50, 1), std::invalid_argument);
}

TEST_CASE("empty-configuration frequency bound") {
  GibbsSpec spec;
  spec.window = Region::box(Vec{0.0}, Vec{1.0});
  spec.activity = 1.0;
  spec.potential = zero_potential();
  spec.boundary = Configuration::empty(1);
  const long n = 5000, thin = 20;
  const GibbsChain chain = gibbs_mcmc(spec, 5000 + n * thin, 5000, thin, 11);
  const EmptyProbabilityReport rep = empty_probability_check(spec, chain.samples);
  CHECK(rep.bound == Catch::Approx(0.5));
  CHECK(rep.holds);
  CHECK(std::fabs(rep.frequency - std::exp(-1.0)) <= 3.0 * rep.stderr_freq + 0.01);
}
