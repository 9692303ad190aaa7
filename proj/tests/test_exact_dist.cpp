#include <catch2/catch_amalgamated.hpp>

#include "urnlab/exact_dist.hpp"

using namespace urnlab;

namespace {
const UrnSpec kSpecA = build_spec(6, 1, 2, 5);
}

TEST_CASE("forced first draw and two-step enumeration") {
  const auto d1 = exact_distribution(kSpecA, {1, 0}, 1);
  REQUIRE(d1.mass.size() == 1);
  CHECK(d1.mass[0].first == 7);
  CHECK(d1.mass[0].second == 1);

  const auto d2 = exact_distribution(kSpecA, {1, 0}, 2);
  REQUIRE(d2.mass.size() == 2);
  CHECK(d2.mass[0].first == 9);
  CHECK(d2.mass[0].second == make_rational(1, 8));
  CHECK(d2.mass[1].first == 13);
  CHECK(d2.mass[1].second == make_rational(7, 8));
}

TEST_CASE("hand-enumerated law for init (1,1), n=3") {
  const auto d = exact_distribution(kSpecA, {1, 1}, 3);
  REQUIRE(d.mass.size() == 4);
  CHECK(d.mass[0] == std::pair<std::int64_t, Rational>{7, make_rational(11, 48)});
  CHECK(d.mass[1] == std::pair<std::int64_t, Rational>{11, make_rational(65, 288)});
  CHECK(d.mass[2] == std::pair<std::int64_t, Rational>{15, make_rational(11, 48)});
  CHECK(d.mass[3] == std::pair<std::int64_t, Rational>{19, make_rational(91, 288)});
  CHECK(d.total_mass() == 1);
}

TEST_CASE("mass sums to one and key structure holds") {
  for (std::int64_t n : {0, 1, 5, 40}) {
    const auto d = exact_distribution(kSpecA, {2, 1}, n);
    CHECK(d.total_mass() == 1);
    CHECK(d.mass.size() <= static_cast<std::size_t>(n) + 1);
    for (const auto &[r, p] : d.mass) {
      // r = alpha + i*a + j*c with i+j = n
      bool found = false;
      for (std::int64_t i = 0; i <= n; ++i)
        if (2 + i * kSpecA.a + (n - i) * kSpecA.c == r) found = true;
      CHECK(found);
      CHECK(p > 0);
    }
  }
}

TEST_CASE("DP mean of u2 equals the martingale product, n <= 60") {
  DistEngine<Rational> engine(kSpecA, {1, 0});
  for (std::int64_t n = 0; n <= 60; ++n) {
    CHECK(engine.mean_u2() == expected_u2_exact(kSpecA, {1, 0}, n));
    engine.step();
  }
}

TEST_CASE("DP is deterministic") {
  const auto d1 = exact_distribution(kSpecA, {1, 1}, 12);
  const auto d2 = exact_distribution(kSpecA, {1, 1}, 12);
  CHECK(d1.mass == d2.mass);
}

TEST_CASE("normalized profile centers exactly and sorts by value") {
  const auto d1 = exact_distribution(kSpecA, {1, 0}, 1);
  const auto prof1 = normalized_profile(d1);
  REQUIRE(prof1.size() == 1);
  CHECK_THAT(prof1[0].first, Catch::Matchers::WithinAbs(0.0, 1e-15));

  const auto d2 = exact_distribution(kSpecA, {1, 0}, 2);
  const auto prof2 = normalized_profile(d2);
  REQUIRE(prof2.size() == 2);
  double mean = 0;
  for (auto &[v, p] : prof2) mean += v * p;
  CHECK_THAT(mean, Catch::Matchers::WithinAbs(0.0, 1e-15));
  CHECK(prof2[0].first < prof2[1].first);
}

TEST_CASE("floating DP tracks the exact law at moderate n") {
  DistEngine<Rational> exact(kSpecA, {1, 1});
  DistEngine<double> fast(kSpecA, {1, 1});
  exact.run_to(200);
  fast.run_to(200);
  double deficit = 1.0;
  for (std::size_t i = 0; i < fast.probs().size(); ++i) {
    deficit -= fast.probs()[i];
    CHECK_THAT(fast.probs()[i],
               Catch::Matchers::WithinAbs(to_double(exact.probs()[i]), 1e-12));
  }
  CHECK(std::abs(deficit) < 1e-12);
}

TEST_CASE("floating DP mass deficit stays within 1e-12 at n = 2e4", "[slow]") {
  DistEngine<double> fast(kSpecA, {1, 0});
  fast.run_to(20000);
  double mass = 0.0;
  for (double p : fast.probs()) mass += p;
  CHECK_THAT(mass, Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("decomposition check: forest sampling matches the exact law", "[slow]") {
  const auto rep = decomposition_check(kSpecA, {1, 1}, 3, 100000, 2024);
  CHECK_FALSE(rep.trivial);
  CHECK(rep.p_value > 1e-3);

  const auto rep2 = decomposition_check(kSpecA, {2, 0}, 2, 100000, 2024);
  CHECK(rep2.p_value > 1e-3);

  // degenerate single-ball start is the identity
  const auto rep3 = decomposition_check(kSpecA, {1, 0}, 3, 10, 1);
  CHECK(rep3.trivial);
  CHECK(rep3.statistic == 0.0);

  // n = 0: exact equality
  const auto rep4 = decomposition_check(kSpecA, {1, 1}, 0, 10, 1);
  CHECK(rep4.trivial);
}
