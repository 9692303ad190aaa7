#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "urnlab/density_cf.hpp"
#include "urnlab/fixpoint.hpp"
#include "urnlab/rng.hpp"

using namespace urnlab;

TEST_CASE("empirical cf basics") {
  Rng rng(5, 0);
  std::vector<double> v(20000);
  for (auto &x : v) x = rng.normal();
  const std::vector<double> grid{0.0, 0.5, 1.0, 2.0, 4.0};
  const auto rep = empirical_cf(v, grid);
  CHECK_THAT(rep.modulus[0], Catch::Matchers::WithinAbs(1.0, 1e-14));
  for (double m : rep.modulus) CHECK(m <= 1.0 + 1e-14);
  // standard normal: |phi(t)| = exp(-t^2/2)
  CHECK_THAT(rep.modulus[2],
             Catch::Matchers::WithinAbs(std::exp(-0.5), 2 * rep.noise_floor));
  CHECK_THAT(rep.noise_floor,
             Catch::Matchers::WithinAbs(4.0 / std::sqrt(20000.0), 1e-15));
  CHECK_THROWS_AS(empirical_cf(v, {1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("support span extremes and sign split") {
  const auto s = support_span({-1.5, 2.0, 0.5, -0.25});
  CHECK(s.min == -1.5);
  CHECK(s.max == 2.0);
  CHECK_THAT(s.fraction_negative, Catch::Matchers::WithinAbs(0.5, 1e-15));
  CHECK_FALSE(s.degenerate);

  const auto c = support_span({3.0, 3.0, 3.0});
  CHECK(c.degenerate);
  CHECK(c.min == c.max);
}

TEST_CASE("kde: symmetry, normalization, bandwidth stability") {
  Rng rng(17, 0);
  std::vector<double> v;
  for (int i = 0; i < 50000; ++i) {
    const double z = rng.normal();
    v.push_back(z);
    v.push_back(-z);  // exactly symmetric sample
  }
  const double h = silverman_bandwidth(v);
  CHECK(h > 0);
  const auto grid = kde_default_grid(v, 401);
  const auto f = kde_density(v, h, grid);

  // symmetric sample on a symmetric grid: symmetric estimate
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double mirror = f[grid.size() - 1 - i];
    CHECK_THAT(f[i], Catch::Matchers::WithinAbs(mirror, 1e-3));
  }
  CHECK_THAT(trapezoid_integral(grid, f), Catch::Matchers::WithinAbs(1.0, 1e-3));

  // halving the bandwidth moves the estimate only slightly
  const auto f2 = kde_density(v, h / 2, grid);
  double sup = 0;
  for (std::size_t i = 0; i < f.size(); ++i)
    sup = std::max(sup, std::abs(f[i] - f2[i]));
  CHECK(sup <= 0.05);

  CHECK_THROWS_AS(kde_density(v, 0.0, grid), std::invalid_argument);
  CHECK_THROWS_AS(kde_density(v, -1.0, grid), std::invalid_argument);
}

TEST_CASE("empirical CFs of two independent DT pool runs agree", "[slow]") {
  // two independent approximations of the same fixed-point law stay within
  // twice the per-sample noise floor pointwise on t in [0, 200]
  const UrnSpec spec = build_spec(6, 1, 2, 5);
  const std::size_t N = 50000;
  ParticlePair a = make_point_pair(spec, System::DT, N);
  ParticlePair b = make_point_pair(spec, System::DT, N);
  for (int it = 1; it <= 40; ++it) {
    apply_K(a, derive_seed(71, it), 2);
    apply_K(b, derive_seed(72, it), 2);
  }
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(i * 5.0);
  const auto ra = empirical_cf(a.x, grid);
  const auto rb = empirical_cf(b.x, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(std::abs(ra.modulus[i] - rb.modulus[i]) <= 2.0 * ra.noise_floor);
}

TEST_CASE("kde against the exact normal density") {
  Rng rng(23, 1);
  std::vector<double> v(200000);
  for (auto &x : v) x = rng.normal();
  const auto grid = kde_default_grid(v, 301);
  const double h = silverman_bandwidth(v);
  const auto f = kde_density(v, h, grid);
  for (std::size_t i = 0; i < grid.size(); i += 25) {
    const double x = grid[i];
    const double target = std::exp(-0.5 * x * x) / 2.506628274631;
    CHECK_THAT(f[i], Catch::Matchers::WithinAbs(target, 0.02));
  }
}
