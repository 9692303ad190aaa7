#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>

#include "urnlab/moments.hpp"

using namespace urnlab;

namespace {

const UrnSpec kSpecA = build_spec(6, 1, 2, 5);
const UrnSpec kSpecB = build_spec(18, 2, 3, 17);

// Brute-force composition enumeration of T_X / T_Y: walks every ordered
// tuple (p_1..p_{S+1}) summing to p with parts <= p-1 and accumulates the
// multinomial-weighted moment products.  Independent of the EGF convolution.
struct BruteForce {
  const UrnSpec &spec;
  const std::vector<Rational> &x, &y;

  Rational lower_sum(int p, int x_slots) const {
    const int slots = static_cast<int>(spec.S) + 1;
    Rational total(0);
    std::vector<int> parts(static_cast<std::size_t>(slots), 0);
    std::function<void(int, int, Rational, Rational)> rec =
        [&](int slot, int remaining, Rational mult_den, Rational prod) {
          if (slot == slots - 1) {
            if (remaining > p - 1) return;
            const Rational term =
                prod * term_for(slot, remaining, x_slots) /
                (mult_den * factorial(static_cast<unsigned long>(remaining)));
            total += term;
            return;
          }
          for (int q = 0; q <= std::min(remaining, p - 1); ++q)
            rec(slot + 1, remaining - q,
                mult_den * factorial(static_cast<unsigned long>(q)),
                prod * term_for(slot, q, x_slots));
        };
    rec(0, p, Rational(1), Rational(1));
    return total * factorial(static_cast<unsigned long>(p));
  }

  Rational term_for(int slot, int q, int x_slots) const {
    return slot < x_slots ? x[static_cast<std::size_t>(q)]
                          : y[static_cast<std::size_t>(q)];
  }
};

}  // namespace

TEST_CASE("first and second CT moments are the known exact values") {
  const auto t = ct_moments_exact(kSpecA, 2);
  CHECK(t.x_exact[1] == make_rational(1, 7));
  CHECK(t.y_exact[1] == make_rational(-2, 7));
  CHECK(t.x_exact[2] == make_rational(29, 49));
  CHECK(t.y_exact[2] == make_rational(44, 49));
  // nondegeneracy
  CHECK(t.x_exact[2] - t.x_exact[1] * t.x_exact[1] == make_rational(28, 49));

  const auto tb = ct_moments_exact(kSpecB, 2);
  CHECK(tb.x_exact[1] == make_rational(1, 10));
  CHECK(tb.y_exact[1] == make_rational(-3, 20));
  CHECK(tb.x_exact[2] == make_rational(109, 400));
  CHECK(tb.y_exact[2] == make_rational(189, 400));
}

TEST_CASE("EGF convolution equals brute-force enumeration through p = 6") {
  const auto t = ct_moments_exact(kSpecA, 6);
  BruteForce bf{kSpecA, t.x_exact, t.y_exact};
  // the p = 2 lower-order sums in closed form
  CHECK(bf.lower_sum(2, static_cast<int>(kSpecA.a) + 1) == make_rational(2, 7));
  CHECK(bf.lower_sum(2, static_cast<int>(kSpecA.c)) == make_rational(74, 49));
  for (int p = 2; p <= 6; ++p) {
    const Rational TX = bf.lower_sum(p, static_cast<int>(kSpecA.a) + 1);
    const Rational TY = bf.lower_sum(p, static_cast<int>(kSpecA.c));
    const Rational det = make_rational((kSpecA.m * p - kSpecA.a) *
                                           (kSpecA.m * p - kSpecA.d) -
                                       kSpecA.b * kSpecA.c);
    const Rational xp =
        (make_rational(kSpecA.m * p - kSpecA.d) * TX + make_rational(kSpecA.b) * TY) / det;
    const Rational yp =
        (make_rational(kSpecA.c) * TX + make_rational(kSpecA.m * p - kSpecA.a) * TY) / det;
    CHECK(xp == t.x_exact[p]);
    CHECK(yp == t.y_exact[p]);
  }
}

TEST_CASE("moment table invariants: positivity and sign structure") {
  const auto t = ct_moments_exact(kSpecA, 12);
  for (int p = 2; p <= 12; p += 2) {
    CHECK(t.x_exact[p] > 0);
    CHECK(t.y_exact[p] > 0);
  }
  for (int p = 1; p <= 9; p += 2) {
    CHECK(t.x_exact[p] > 0);
    CHECK(t.y_exact[p] < 0);
  }
}

TEST_CASE("connexion route reproduces the DT expectation at p = 1") {
  const auto ct = ct_moments_exact(kSpecA, 2);
  const auto dt = dt_moments_via_connexion(ct, {1, 0});
  CHECK_THAT(dt.x[1],
             Catch::Matchers::WithinRel(expected_W_dt(kSpecA, {1, 0}), 1e-10));
  CHECK(dt.x[0] == 1.0);
}

TEST_CASE("dual-route DT moments agree to 1e-6 through p = 20") {
  for (const UrnSpec &spec : {kSpecA, kSpecB}) {
    const auto ct = ct_moments_exact(spec, 20);
    const auto via = dt_moments_via_connexion(ct, {1, 0});
    const auto direct = dt_moments_direct(spec, 20);
    CHECK(direct.x[0] == 1.0);
    CHECK_THAT(direct.x[1],
               Catch::Matchers::WithinRel(expected_W_dt(spec, {1, 0}), 1e-10));
    for (int p = 1; p <= 20; ++p) {
      CHECK_THAT(direct.x[p], Catch::Matchers::WithinRel(via.x[p], 1e-6));
      CHECK_THAT(direct.y[p], Catch::Matchers::WithinRel(via.y[p], 1e-6));
    }
  }
}

TEST_CASE("composite moments by convolution") {
  const auto t = ct_moments_exact(kSpecA, 3);
  const auto c11 = composite_moments(t, {1, 1}, System::CT);
  CHECK(c11.x_exact[1] == make_rational(-1, 7));  // 1/7 - 2/7
  CHECK(c11.x_exact[2] == make_rational(69, 49));  // 29/49 + 2*(1/7)(-2/7) + 44/49

  const auto c21 = composite_moments(t, {2, 1}, System::CT);
  CHECK(c21.x_exact[1] == 0);

  const auto d11 = composite_moments(t, {1, 1}, System::DT);
  const double r = 2.0 / 7.0;
  const double expect =
      to_double(c11.x_exact[2]) /
      std::exp(std::lgamma(r + 8.0 / 7) - std::lgamma(r));
  CHECK_THAT(d11.x[2], Catch::Matchers::WithinRel(expect, 1e-12));

  CHECK_THROWS_AS(composite_moments(t, {0, 0}, System::CT), std::invalid_argument);
}

TEST_CASE("capital Phi values and the log bound") {
  const double r = std::log(3.0) / std::log(4.0);
  CHECK_THAT(phi_capital(2, 7), Catch::Matchers::WithinRel(28.0 * r * r, 1e-12));
  CHECK_THAT(phi_capital(2, 1), Catch::Matchers::WithinRel(r * r, 1e-12));
  for (std::int64_t S : {7, 20})
    for (int p = 2; p <= 60; ++p) CHECK(phi_bound_check(p, S));
}

TEST_CASE("Phi OGF equals direct composition enumeration for small p") {
  auto phi = [](int q) { return std::pow(std::log(q + 2.0), q); };
  for (int p = 2; p <= 5; ++p) {
    for (std::int64_t S : {1, 3, 7}) {
      const int slots = static_cast<int>(S) + 1;
      double total = 0.0;
      std::function<void(int, int, double)> rec = [&](int slot, int rem, double prod) {
        if (slot == slots - 1) {
          if (rem <= p - 1) total += prod * phi(rem);
          return;
        }
        for (int q = 0; q <= std::min(rem, p - 1); ++q)
          rec(slot + 1, rem - q, prod * phi(q));
      };
      rec(0, p, 1.0);
      CHECK_THAT(phi_capital(p, S),
                 Catch::Matchers::WithinRel(total / phi(p), 1e-12));
    }
  }
}

TEST_CASE("growth diagnostics on the exact table", "[slow]") {
  const auto t = ct_moments_exact(kSpecA, 40);
  const auto g = growth_diagnostics(t);
  REQUIRE(g.laplace.size() == 20);
  CHECK(g.laplace_growing);
  CHECK(g.bounded_ok);
  for (std::size_t i = 1; i < g.carleman.size(); ++i)
    CHECK(g.carleman[i] > g.carleman[i - 1]);
  CHECK(g.carleman_min_increment_ratio >= 0.4);
}

TEST_CASE("empty and trivial orders") {
  const auto t0 = ct_moments_exact(kSpecA, 0);
  CHECK(t0.x_exact.size() == 1);
  CHECK(t0.x_exact[0] == 1);
  CHECK_THROWS_AS(ct_moments_exact(build_spec(1, 1, 1, 1), 3), std::domain_error);
}
