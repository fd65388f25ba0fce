#include <catch2/catch_amalgamated.hpp>

#include "confgeo/io.hpp"
#include "support.hpp"

using namespace confgeo;

TEST_CASE("restrict keeps exactly the points inside") {
  CHECK(restrict_to(Configuration::empty(1), Region::ball(Ball{Vec{0.0}, 2.0})).is_empty());
  const Configuration g = Configuration::line({0.5, 3.0});
  const Configuration inside = restrict_to(g, Region::ball(Ball{Vec{0.0}, 2.0}));
  REQUIRE(inside.size() == 1);
  CHECK(inside.points[0][0] == 0.5);
  CHECK(restrict_to(g, Region::whole_space(1)).points == g.points);
}

TEST_CASE("restriction to a region and its complement partitions the configuration") {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 50; ++k) {
    const int d = 1 + k % 3;
    const Configuration g = ct::rand_config(rng, d, 8, 3.0);
    const Region r = (k % 2 == 0) ? Region::ball(Ball{zeros(d), 1.5}) : Region::centered_box(d, 1.0);
    Configuration both = restrict_to(g, r);
    for (const Vec& p : restrict_to(g, r.complement()).points) both.points.push_back(p);
    CHECK(same_point_multiset(both, g));
    CHECK(count_in(g, r) + count_in(g, r.complement()) == g.size());
  }
}

TEST_CASE("count respects multiplicity") {
  Configuration g = Configuration::line({0.0, 0.0});
  CHECK_FALSE(g.is_simple());
  CHECK(count_in(g, Region::ball(Ball{Vec{0.0}, 1.0})) == 2);
  CHECK(count_in(Configuration::empty(1), Region::whole_space(1)) == 0);
}

TEST_CASE("shift translates and inverts") {
  const Configuration g = Configuration::line({1.0, 2.0});
  const Configuration s = shift(g, Vec{3.0});
  CHECK(s.points[0][0] == 4.0);
  CHECK(s.points[1][0] == 5.0);
  CHECK(shift(s, Vec{-3.0}).points == g.points);
  CHECK(shift(g, Vec{0.0}).points == g.points);
  CHECK_THROWS_AS(shift(g, Vec{0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("count commutes with shift") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const int d = 1 + k % 2;
    const Configuration g = ct::rand_config(rng, d, 6, 2.0);
    Vec x(d);
    for (double& c : x) c = unif(rng);
    const Ball b{zeros(d), 1.2};
    Vec shifted_center = sub(b.center, x);
    CHECK(count_in(shift(g, x), Region::ball(b)) ==
          count_in(g, Region::ball(Ball{shifted_center, b.radius})));
  }
}

TEST_CASE("vague metric on the worked instance") {
  const CompactTestFunction f = bump_test_function(Ball{Vec{0.0}, 1.0}, 1.0);  // f(0)=1, f(1)=0
  const Configuration g = Configuration::line({0.0});
  const Configuration w = Configuration::line({1.0});
  CHECK(vague_metric(g, w, {f}) == Catch::Approx(0.5));
  CHECK(vague_metric(g, g, {f}) == 0.0);
  CHECK(vague_metric(g, w, {f}) == vague_metric(w, g, {f}));
}

TEST_CASE("vague metric is bounded by the geometric tail") {
  std::mt19937_64 rng(31);
  std::vector<CompactTestFunction> fs;
  for (int i = 0; i < 4; ++i) fs.push_back(bump_test_function(Ball{Vec{i * 0.5}, 1.0 + i}, 2.0));
  double cap = 0, w = 1;
  for (std::size_t i = 0; i < fs.size(); ++i) cap += (w *= 0.5);
  for (int k = 0; k < 30; ++k) {
    const Configuration a = ct::rand_config(rng, 1, 5, 3.0);
    const Configuration b = ct::rand_config(rng, 1, 9, 3.0);
    const double v = vague_metric(a, b, fs);
    CHECK(v >= 0.0);
    CHECK(v <= cap);
  }
}

TEST_CASE("cube counts: half-open convention and totals") {
  CHECK(cube_counts(Configuration::empty(2), 3).empty());
  const Configuration g = Configuration::line({0.4, 0.6});
  const auto counts = cube_counts(g, 1);
  CHECK(counts.at(LatticeCube{{0}}) == 1);
  CHECK(counts.at(LatticeCube{{1}}) == 1);

  std::mt19937_64 rng(37);
  for (int k = 0; k < 20; ++k) {
    const int d = 1 + k % 2;
    const Configuration c = ct::rand_config(rng, d, 10, 2.2);
    long total = 0;
    for (const auto& [cube, n] : cube_counts(c, 5)) total += n;
    CHECK(total == c.size());  // every point lands in exactly one cube
  }
}

TEST_CASE("temperedness check") {
  CHECK(temperedness_check(Configuration::empty(1), 1, 3).ok);

  Configuration one_per_cube = Configuration::empty(1);
  for (int r = -3; r <= 3; ++r) one_per_cube.points.push_back(Vec{static_cast<double>(r)});
  CHECK(temperedness_check(one_per_cube, 1, 3).ok);

  const Configuration triple = Configuration::line({0.1, 0.0, -0.1});
  const TemperednessReport rep = temperedness_check(triple, 1, 0);
  CHECK_FALSE(rep.ok);
  CHECK(rep.first_violation == 0);
  CHECK(rep.lhs == 9.0);
  CHECK(rep.rhs == 1.0);
}

TEST_CASE("simple detection agrees with brute force") {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 100; ++k) {
    Configuration g = ct::rand_config(rng, 2, 6, 1.0);
    if (k % 3 == 0 && g.size() > 1) g.points.push_back(g.points[k % g.points.size()]);
    bool dup = false;
    for (int i = 0; i < g.size(); ++i)
      for (int j = i + 1; j < g.size(); ++j)
        if (g.points[i] == g.points[j]) dup = true;
    CHECK(g.is_simple() == !dup);
  }
}

TEST_CASE("JSON round-trip is exact") {
  std::mt19937_64 rng(43);
  for (int k = 0; k < 25; ++k) {
    const Configuration g = ct::rand_config(rng, 1 + k % 3, 7, 5.0);
    const Configuration back = configuration_from_json(json::parse(configuration_to_json(g).dump()));
    CHECK(back.dim == g.dim);
    CHECK(back.points == g.points);  // bit-exact
  }
}

TEST_CASE("CSV round-trip is exact") {
  std::mt19937_64 rng(47);
  for (int k = 0; k < 25; ++k) {
    const Configuration g = ct::rand_config(rng, 1 + k % 3, 5, 5.0);
    if (g.is_empty()) continue;
    const Configuration back = configuration_from_csv(configuration_to_csv(g));
    CHECK(back.points == g.points);
  }
  CHECK_THROWS_AS(configuration_from_csv(""), std::invalid_argument);
}
