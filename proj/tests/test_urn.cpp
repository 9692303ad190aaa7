#include <catch2/catch_amalgamated.hpp>

#include "urnlab/urn.hpp"

using namespace urnlab;

TEST_CASE("build_spec derives balance and spectral data") {
  const UrnSpec s = build_spec(6, 1, 2, 5);
  CHECK(s.S == 7);
  CHECK(s.m == 4);
  CHECK(s.sigma == make_rational(4, 7));

  const UrnSpec big = build_spec(18, 2, 3, 17);
  CHECK(big.S == 20);
  CHECK(big.m == 15);
  CHECK(big.sigma == make_rational(3, 4));

  CHECK_THROWS_WITH(build_spec(6, 1, 2, 4),
                    Catch::Matchers::ContainsSubstring("7") &&
                        Catch::Matchers::ContainsSubstring("6"));
  CHECK_THROWS_AS(build_spec(-1, 8, 2, 5), std::invalid_argument);
}

TEST_CASE("eigenvector and duality identities hold exactly") {
  for (auto [a, b, c, d] : {std::array<std::int64_t, 4>{6, 1, 2, 5},
                            std::array<std::int64_t, 4>{18, 2, 3, 17},
                            std::array<std::int64_t, 4>{1, 1, 1, 1},
                            std::array<std::int64_t, 4>{3, 4, 5, 2}}) {
    const UrnSpec s = build_spec(a, b, c, d);
    REQUIRE(s.spectral.has_value());
    const SpectralData &sd = *s.spectral;
    // tR v1 = S v1 and tR v2 = m v2
    CHECK(a * sd.v1_red + c * sd.v1_black == s.S * sd.v1_red);
    CHECK(b * sd.v1_red + d * sd.v1_black == s.S * sd.v1_black);
    CHECK(a * sd.v2_red + c * sd.v2_black == s.m * sd.v2_red);
    CHECK(b * sd.v2_red + d * sd.v2_black == s.m * sd.v2_black);
    // duality u_i(v_j) = delta_ij
    CHECK(sd.u1_x * sd.v1_red + sd.u1_y * sd.v1_black == 1);
    CHECK(sd.u1_x * sd.v2_red + sd.u1_y * sd.v2_black == 0);
    CHECK(sd.u2_x * sd.v1_red + sd.u2_y * sd.v1_black == 0);
    CHECK(sd.u2_x * sd.v2_red + sd.u2_y * sd.v2_black == 1);
  }
}

TEST_CASE("classification with triangular precedence") {
  CHECK(classify(build_spec(6, 1, 2, 5)) == UrnClass::Large);
  CHECK(classify(build_spec(18, 2, 3, 17)) == UrnClass::Large);
  CHECK(classify(build_spec(1, 0, 0, 1)) == UrnClass::Triangular);
  CHECK(classify(build_spec(1, 1, 1, 1)) == UrnClass::Small);
  CHECK(classify(build_spec(3, 1, 1, 3)) == UrnClass::Critical);  // sigma = 1/2
  CHECK(classify(build_spec(5, 0, 2, 3)) == UrnClass::Triangular);
}

TEST_CASE("projection through the eigenforms") {
  const UrnSpec s = build_spec(6, 1, 2, 5);
  auto [u1a, u2a] = project(s, {1, 0});
  CHECK(u1a == make_rational(1, 7));
  CHECK(u2a == make_rational(1, 7));
  auto [u1b, u2b] = project(s, {7, 1});
  CHECK(u1b == make_rational(8, 7));
  CHECK(u2b == make_rational(5, 7));
  auto [u1c, u2c] = project(s, {0, 1});
  CHECK(u1c == make_rational(1, 7));
  CHECK(u2c == make_rational(-2, 7));
}

TEST_CASE("martingale product expectation") {
  const UrnSpec s = build_spec(6, 1, 2, 5);
  CHECK(expected_u2_exact(s, {1, 0}, 0) == make_rational(1, 7));
  CHECK(expected_u2_exact(s, {1, 0}, 1) == make_rational(5, 7));
  CHECK(expected_u2_exact(s, {1, 0}, 2) == make_rational(15, 14));

  // one-step ratio identity: E/E = 1 + sigma/(n + (alpha+beta)/S)
  const Composition init{2, 1};
  for (std::int64_t n : {0, 1, 5, 17}) {
    const Rational lhs = expected_u2_exact(s, init, n + 1);
    const Rational rhs = expected_u2_exact(s, init, n) *
                         (1 + s.sigma / (n + make_rational(init.total(), s.S)));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("closed-form expectations of the limit variables") {
  const UrnSpec s = build_spec(6, 1, 2, 5);
  const double g = std::exp(std::lgamma(1.0 / 7) - std::lgamma(5.0 / 7));
  CHECK_THAT(expected_W_dt(s, {1, 0}),
             Catch::Matchers::WithinRel(g / 7.0, 1e-12));
  CHECK_THAT(expected_W_dt(s, {1, 0}), Catch::Matchers::WithinAbs(0.734, 2e-3));
  CHECK(expected_W_dt(s, {2, 1}) == 0.0);
  CHECK_THAT(expected_W_dt(s, {0, 1}),
             Catch::Matchers::WithinRel(-2.0 * g / 7.0, 1e-12));

  CHECK(expected_W_ct_exact(s, {1, 0}) == make_rational(1, 7));
  CHECK(expected_W_ct_exact(s, {0, 1}) == make_rational(-2, 7));
  CHECK(expected_W_ct_exact(s, {2, 1}) == 0);

  // connexion of expectations at p = 1, 10 significant digits
  const double lhs = expected_W_dt(s, {1, 0});
  const double rhs = expected_W_ct(s, {1, 0}) *
                     std::exp(std::lgamma(1.0 / 7) - std::lgamma(5.0 / 7));
  CHECK_THAT(lhs, Catch::Matchers::WithinRel(rhs, 1e-10));

  CHECK_THROWS_AS(expected_W_dt(build_spec(1, 1, 1, 1), {1, 0}),
                  std::domain_error);
  CHECK_THROWS_AS(expected_W_ct(build_spec(1, 0, 0, 1), {1, 0}),
                  std::domain_error);
}
