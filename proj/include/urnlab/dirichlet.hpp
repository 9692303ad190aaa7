#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "urnlab/parallel.hpp"
#include "urnlab/rational.hpp"
#include "urnlab/rng.hpp"

namespace urnlab {

struct DirichletParams {
  std::vector<Rational> nu;  // d >= 2 positive parameters

  std::size_t dim() const { return nu.size(); }
  Rational total() const {
    Rational s(0);
    for (const auto &v : nu) s += v;
    return s;
  }
};

inline DirichletParams make_dirichlet(std::vector<Rational> nu) {
  if (nu.size() < 2) throw std::invalid_argument("Dirichlet needs dimension >= 2");
  for (const auto &v : nu)
    if (v <= 0) throw std::invalid_argument("Dirichlet parameters must be > 0");
  return DirichletParams{std::move(nu)};
}

inline DirichletParams symmetric_dirichlet(std::size_t d, const Rational &nu) {
  return make_dirichlet(std::vector<Rational>(d, nu));
}

// N points on the simplex, row-major d columns.
struct SimplexSample {
  std::size_t d = 0;
  std::vector<double> data;  // N * d

  std::size_t count() const { return d ? data.size() / d : 0; }
  double at(std::size_t row, std::size_t col) const { return data[row * d + col]; }

  double coordinate_mean(std::size_t col) const {
    double s = 0.0;
    for (std::size_t i = 0; i < count(); ++i) s += at(i, col);
    return s / static_cast<double>(count());
  }
  double coordinate_moment(std::size_t col, int p) const {
    double s = 0.0;
    for (std::size_t i = 0; i < count(); ++i) s += std::pow(at(i, col), p);
    return s / static_cast<double>(count());
  }
  std::vector<double> column(std::size_t col) const {
    std::vector<double> out(count());
    for (std::size_t i = 0; i < count(); ++i) out[i] = at(i, col);
    return out;
  }
};

// Normalized-Gamma construction; small shapes share the log-space boosting
// used everywhere else, so coordinates sum to 1 up to rounding.
inline SimplexSample dirichlet_sample(const DirichletParams &params,
                                      std::int64_t N, std::uint64_t seed,
                                      int threads = 1) {
  const std::size_t d = params.dim();
  std::vector<double> shapes(d);
  for (std::size_t k = 0; k < d; ++k) shapes[k] = to_double(params.nu[k]);
  SimplexSample out;
  out.d = d;
  out.data.resize(static_cast<std::size_t>(N) * d);
  parallel_for(static_cast<std::size_t>(N), threads, [&](std::size_t i) {
    Rng rng(seed, i);
    std::vector<double> logg(d);
    double mx = -1e300;
    for (std::size_t k = 0; k < d; ++k) {
      logg[k] = rng.log_gamma_draw(shapes[k]);
      if (logg[k] > mx) mx = logg[k];
    }
    double sum = 0.0;
    for (double lg : logg) sum += std::exp(lg - mx);
    const double lse = mx + std::log(sum);
    for (std::size_t k = 0; k < d; ++k)
      out.data[i * d + k] = std::exp(logg[k] - lse);
  });
  return out;
}

// E prod D_k^{p_k} = Gamma(nu)/Gamma(nu+|p|) * prod Gamma(nu_k+p_k)/Gamma(nu_k),
// a product of rising factorials for integer powers, hence exact.
inline Rational joint_moment(const DirichletParams &params,
                             const std::vector<std::int64_t> &powers) {
  if (powers.size() != params.dim())
    throw std::invalid_argument("joint_moment: power multi-index has wrong size");
  std::int64_t total = 0;
  for (std::size_t k = 0; k < powers.size(); ++k) {
    if (powers[k] < 0)
      throw std::invalid_argument("integer joint_moment needs nonnegative powers");
    total += powers[k];
  }
  Rational out = 1 / rising_factorial(params.total(),
                                      static_cast<unsigned long>(total));
  for (std::size_t k = 0; k < powers.size(); ++k)
    out *= rising_factorial(params.nu[k],
                            static_cast<unsigned long>(powers[k]));
  return out;
}

// Real-power extension via log-Gamma; requires nu_k + p_k > 0 for each k.
inline double joint_moment_real(const DirichletParams &params,
                                const std::vector<double> &powers) {
  if (powers.size() != params.dim())
    throw std::invalid_argument("joint_moment: power multi-index has wrong size");
  double total = 0.0;
  for (std::size_t k = 0; k < powers.size(); ++k) {
    if (to_double(params.nu[k]) + powers[k] <= 0.0)
      throw std::invalid_argument(
          "joint_moment not integrable: nu_k + p_k <= 0 at coordinate " +
          std::to_string(k));
    total += powers[k];
  }
  const double nu = to_double(params.total());
  double out = std::lgamma(nu) - std::lgamma(nu + total);
  for (std::size_t k = 0; k < powers.size(); ++k) {
    const double nuk = to_double(params.nu[k]);
    out += std::lgamma(nuk + powers[k]) - std::lgamma(nuk);
  }
  return std::exp(out);
}

// d-color urn with replacement S I_d; returns samples of P_n/(nS).
// Coordinate sums are 1 + (sum alpha)/(nS) for every trajectory, exactly.
inline SimplexSample simulate_diagonal_urn(const std::vector<std::int64_t> &init,
                                           std::int64_t S, std::int64_t n,
                                           std::int64_t N, std::uint64_t seed,
                                           int threads = 1) {
  const std::size_t d = init.size();
  if (d < 2) throw std::invalid_argument("diagonal urn needs d >= 2");
  if (S < 1 || n < 1 || N < 1)
    throw std::invalid_argument("diagonal urn needs S, n, N >= 1");
  std::int64_t total0 = 0;
  for (auto v : init) {
    if (v < 0) throw std::invalid_argument("negative initial count");
    total0 += v;
  }
  if (total0 < 1) throw std::invalid_argument("empty initial composition");
  SimplexSample out;
  out.d = d;
  out.data.resize(static_cast<std::size_t>(N) * d);
  parallel_for(static_cast<std::size_t>(N), threads, [&](std::size_t i) {
    Rng rng(seed, i);
    std::vector<std::int64_t> counts(init.begin(), init.end());
    std::int64_t total = total0;
    for (std::int64_t k = 0; k < n; ++k) {
      auto pick = static_cast<std::int64_t>(rng.uniform01() *
                                            static_cast<double>(total));
      std::size_t j = 0;
      for (; j + 1 < d; ++j) {
        if (pick < counts[j]) break;
        pick -= counts[j];
      }
      counts[j] += S;
      total += S;
    }
    const double scale = static_cast<double>(n) * static_cast<double>(S);
    for (std::size_t k = 0; k < d; ++k)
      out.data[i * d + k] = static_cast<double>(counts[k]) / scale;
  });
  return out;
}

// E Gamma_p(P_n) where Gamma_p(v) = prod_k rising(v_k/S, p_k) is the
// eigenfunction of the one-step expectation operator with eigenvalue |p| S:
//   E Gamma_p(P_n) = rising(alpha/S + n, |p|) / rising(alpha/S, |p|)
//                    * Gamma_p(P_0).
// All Gamma arguments differ by integers, so the value is an exact rational.
inline Rational gamma_p_expectation(const std::vector<std::int64_t> &init,
                                    std::int64_t S, std::int64_t n,
                                    const std::vector<std::int64_t> &powers) {
  if (init.size() != powers.size())
    throw std::invalid_argument("gamma_p_expectation: size mismatch");
  if (S < 1 || n < 0) throw std::invalid_argument("need S >= 1, n >= 0");
  std::int64_t alpha = 0, abs_p = 0;
  for (std::size_t k = 0; k < init.size(); ++k) {
    if (init[k] < 0 || powers[k] < 0)
      throw std::invalid_argument("negative entry in init or powers");
    alpha += init[k];
    abs_p += powers[k];
  }
  if (alpha < 1) throw std::invalid_argument("empty initial composition");
  const Rational aS = make_rational(alpha, S);
  Rational out = rising_factorial(aS + make_rational(n),
                                  static_cast<unsigned long>(abs_p)) /
                 rising_factorial(aS, static_cast<unsigned long>(abs_p));
  for (std::size_t k = 0; k < init.size(); ++k)
    out *= rising_factorial(make_rational(init[k], S),
                            static_cast<unsigned long>(powers[k]));
  return out;
}

}  // namespace urnlab
