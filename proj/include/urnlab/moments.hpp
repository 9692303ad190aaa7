#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "urnlab/rational.hpp"
#include "urnlab/urn.hpp"

namespace urnlab {

namespace detail {

// (u * v) mod z^{deg+1}
template <typename T>
std::vector<T> poly_mul(const std::vector<T> &u, const std::vector<T> &v,
                        std::size_t deg) {
  std::vector<T> out(deg + 1, T(0));
  for (std::size_t i = 0; i < u.size() && i <= deg; ++i) {
    if (u[i] == T(0)) continue;
    const std::size_t jmax = std::min(deg - i, v.size() - 1);
    for (std::size_t j = 0; j <= jmax; ++j) out[i + j] += u[i] * v[j];
  }
  return out;
}

template <typename T>
std::vector<T> poly_pow(const std::vector<T> &base, std::int64_t e,
                        std::size_t deg) {
  std::vector<T> out(deg + 1, T(0));
  out[0] = T(1);
  for (std::int64_t i = 0; i < e; ++i) out = poly_mul(out, base, deg);
  return out;
}

}  // namespace detail

struct MomentTable {
  UrnSpec spec;
  System system = System::CT;
  int max_order = 0;
  bool exact = false;                       // CT tables are exact rationals
  bool composite = false;                   // x holds W_(alpha,beta) moments
  Composition init{1, 0};                   // meaningful for composite/DT
  std::vector<Rational> x_exact, y_exact;   // index p = 0..max_order
  std::vector<double> x, y;                 // decimal view, always filled
};

// Moments of (X, Y) = (W^CT_(1,0), W^CT_(0,1)) by the order-p recursion
//   (mp - a) x_p = b y_p + T_X(p),   (mp - d) y_p = c x_p + T_Y(p),
// T_X, T_Y the strictly-lower-order composition sums, evaluated as EGF
// coefficient convolutions: T_X(p) = p! [z^p] F^{a+1} G^b with F, G the
// exponential generating functions of the sequences truncated below p.
// All matrices mp I - R are invertible for p >= 2, so the 2x2 solve is exact.
inline MomentTable ct_moments_exact(const UrnSpec &spec, int P) {
  require_large(spec, "ct_moments_exact");
  if (P < 0) throw std::invalid_argument("max order must be >= 0");
  MomentTable t;
  t.spec = spec;
  t.system = System::CT;
  t.max_order = P;
  t.exact = true;
  t.x_exact.assign(P + 1, Rational(0));
  t.y_exact.assign(P + 1, Rational(0));
  t.x_exact[0] = t.y_exact[0] = Rational(1);
  if (P >= 1) {
    t.x_exact[1] = make_rational(spec.b, spec.S);
    t.y_exact[1] = make_rational(-spec.c, spec.S);
  }
  std::vector<Rational> inv_fact(P + 1, Rational(1));
  for (int q = 1; q <= P; ++q) inv_fact[q] = inv_fact[q - 1] / q;
  for (int p = 2; p <= P; ++p) {
    std::vector<Rational> F(p), G(p);
    for (int q = 0; q < p; ++q) {
      F[q] = t.x_exact[q] * inv_fact[q];
      G[q] = t.y_exact[q] * inv_fact[q];
    }
    const auto deg = static_cast<std::size_t>(p);
    const Rational TX =
        detail::poly_mul(detail::poly_pow(F, spec.a + 1, deg),
                         detail::poly_pow(G, spec.b, deg), deg)[deg] /
        inv_fact[p];
    const Rational TY =
        detail::poly_mul(detail::poly_pow(F, spec.c, deg),
                         detail::poly_pow(G, spec.d + 1, deg), deg)[deg] /
        inv_fact[p];
    const Rational det = make_rational(spec.m * p - spec.a) *
                             make_rational(spec.m * p - spec.d) -
                         make_rational(spec.b * spec.c);
    t.x_exact[p] = (make_rational(spec.m * p - spec.d) * TX +
                    make_rational(spec.b) * TY) /
                   det;
    t.y_exact[p] = (make_rational(spec.c) * TX +
                    make_rational(spec.m * p - spec.a) * TY) /
                   det;
  }
  t.x.resize(P + 1);
  t.y.resize(P + 1);
  for (int p = 0; p <= P; ++p) {
    t.x[p] = to_double(t.x_exact[p]);
    t.y[p] = to_double(t.y_exact[p]);
  }
  return t;
}

// E xi^{sigma p} for xi ~ Gamma(r): Gamma(r + sigma p)/Gamma(r).
inline double xi_power_moment(const UrnSpec &spec, double r, int p) {
  const double s = to_double(spec.sigma) * p;
  return std::exp(std::lgamma(r + s) - std::lgamma(r));
}

// dt_p = ct_p * Gamma(r)/Gamma(r + sigma p), r = (alpha+beta)/S, from the
// martingale connexion.  Applies to elementary tables (init total 1) and to
// composite ones alike.
inline MomentTable dt_moments_via_connexion(const MomentTable &ct,
                                            const Composition &init) {
  if (ct.system != System::CT)
    throw std::invalid_argument("dt_moments_via_connexion needs a CT table");
  if (init.total() < 1) throw std::invalid_argument("empty initial composition");
  MomentTable t = ct;
  t.system = System::DT;
  t.exact = false;
  t.init = init;
  t.x_exact.clear();
  t.y_exact.clear();
  const double r = static_cast<double>(init.total()) / ct.spec.S;
  for (int p = 0; p <= t.max_order; ++p) {
    const double f = 1.0 / xi_power_moment(ct.spec, r, p);
    t.x[p] *= f;
    if (!t.y.empty()) t.y[p] *= f;
  }
  return t;
}

// Direct DT recursion from the discrete-time system: same convolution shape
// as the CT recursion but the slot q carries h(q) = Gamma(1/S + sigma q)/
// Gamma(1/S) (Dirichlet fractional joint moments, appendix formula extended
// to real powers) and each order carries the global factor
// Gamma(nu)/Gamma(nu + sigma p), nu = (S+1)/S.  Floating arithmetic.
inline MomentTable dt_moments_direct(const UrnSpec &spec, int P) {
  require_large(spec, "dt_moments_direct");
  MomentTable t;
  t.spec = spec;
  t.system = System::DT;
  t.max_order = P;
  t.exact = false;
  t.x.assign(P + 1, 0.0);
  t.y.assign(P + 1, 0.0);
  t.x[0] = t.y[0] = 1.0;
  const double S = static_cast<double>(spec.S);
  const double sig = to_double(spec.sigma);
  const double nu = (S + 1.0) / S;
  const double lg1S = std::lgamma(1.0 / S);
  auto h = [&](int q) { return std::exp(std::lgamma(1.0 / S + sig * q) - lg1S); };
  if (P >= 1) {
    const double k = std::exp(lg1S - std::lgamma(1.0 / S + sig));
    t.x[1] = k * static_cast<double>(spec.b) / S;
    t.y[1] = -k * static_cast<double>(spec.c) / S;
  }
  std::vector<double> fact(P + 1, 1.0);
  for (int q = 1; q <= P; ++q) fact[q] = fact[q - 1] * q;
  for (int p = 2; p <= P; ++p) {
    std::vector<double> F(p), G(p);
    for (int q = 0; q < p; ++q) {
      F[q] = h(q) * t.x[q] / fact[q];
      G[q] = h(q) * t.y[q] / fact[q];
    }
    const auto deg = static_cast<std::size_t>(p);
    const double TX = detail::poly_mul(detail::poly_pow(F, spec.a + 1, deg),
                                       detail::poly_pow(G, spec.b, deg),
                                       deg)[deg] *
                      fact[p];
    const double TY = detail::poly_mul(detail::poly_pow(F, spec.c, deg),
                                       detail::poly_pow(G, spec.d + 1, deg),
                                       deg)[deg] *
                      fact[p];
    const double glob = std::exp(std::lgamma(nu) - std::lgamma(nu + sig * p));
    const double g = glob * h(p);
    const double A11 = 1.0 - (spec.a + 1) * g, A12 = -spec.b * g;
    const double A21 = -spec.c * g, A22 = 1.0 - (spec.d + 1) * g;
    const double det = A11 * A22 - A12 * A21;
    t.x[p] = (A22 * glob * TX - A12 * glob * TY) / det;
    t.y[p] = (-A21 * glob * TX + A11 * glob * TY) / det;
  }
  return t;
}

// CT moments of W_(alpha,beta) = sum of alpha X-copies and beta Y-copies
// (independent): p! [z^p] F^alpha G^beta, exact.  DT composite goes through
// the connexion with xi ~ Gamma((alpha+beta)/S).
inline MomentTable composite_moments(const MomentTable &elementary,
                                     const Composition &init, System system) {
  if (!elementary.exact || elementary.system != System::CT)
    throw std::invalid_argument("composite_moments needs the exact CT table");
  if (init.total() < 1)
    throw std::invalid_argument("composite initial composition is empty");
  const int P = elementary.max_order;
  MomentTable t;
  t.spec = elementary.spec;
  t.system = System::CT;
  t.max_order = P;
  t.exact = true;
  t.composite = true;
  t.init = init;
  std::vector<Rational> inv_fact(P + 1, Rational(1));
  for (int q = 1; q <= P; ++q) inv_fact[q] = inv_fact[q - 1] / q;
  std::vector<Rational> F(P + 1), G(P + 1);
  for (int q = 0; q <= P; ++q) {
    F[q] = elementary.x_exact[q] * inv_fact[q];
    G[q] = elementary.y_exact[q] * inv_fact[q];
  }
  const auto deg = static_cast<std::size_t>(P);
  const auto H = detail::poly_mul(detail::poly_pow(F, init.red, deg),
                                  detail::poly_pow(G, init.black, deg), deg);
  t.x_exact.resize(P + 1);
  t.x.resize(P + 1);
  for (int p = 0; p <= P; ++p) {
    t.x_exact[p] = H[p] / inv_fact[p];
    t.x[p] = to_double(t.x_exact[p]);
  }
  if (system == System::DT) return dt_moments_via_connexion(t, init);
  return t;
}

// Phi(p) = sum over compositions (p_1..p_{S+1}) of p with parts <= p-1 of
// prod phi(p_j)/phi(p), phi(q) = log^q(q+2).  Ordered tuples, no multinomial
// weight, so this is an ordinary power-series coefficient: [z^p] of
// (sum_{q<p} phi(q) z^q)^{S+1}, truncation enforcing the part bound.
inline double phi_capital(int p, std::int64_t S) {
  if (p < 2) throw std::invalid_argument("phi_capital needs p >= 2");
  auto phi = [](int q) { return std::pow(std::log(q + 2.0), q); };
  std::vector<double> base(p);
  for (int q = 0; q < p; ++q) base[q] = phi(q);
  const auto H = detail::poly_pow(base, S + 1, static_cast<std::size_t>(p));
  return H[static_cast<std::size_t>(p)] / phi(p);
}

inline bool phi_bound_check(int p, std::int64_t S) {
  return phi_capital(p, S) <=
         std::pow(1.0 + 8.0 * std::log(p + 2.0), static_cast<double>(S + 1));
}

struct GrowthDiagnostics {
  std::vector<std::pair<int, double>> laplace;   // even p, (x_p/p!)^{1/p}
  std::vector<std::pair<int, double>> bounded;   // k, (x_2k/((2k)! log^2k 2k))^{1/2k}
  std::vector<double> carleman;                  // partial sums of x_2k^{-1/2k}
  bool laplace_growing = false;                  // over even p in [10, 2K]
  bool bounded_ok = false;                       // all B_k <= 2 max(B_1..B_5)
  double carleman_min_increment_ratio = 0.0;
};

// Soft diagnostics on the CT table: the Laplace-series coefficients must
// grow (zero radius of convergence), the log-corrected roots stay bounded,
// and the Carleman sum keeps climbing.  Even orders stand in for absolute
// moments; odd signed moments eventually change sign and are excluded.
inline GrowthDiagnostics growth_diagnostics(const MomentTable &t) {
  if (!t.exact) throw std::invalid_argument("growth_diagnostics needs the CT table");
  GrowthDiagnostics g;
  const int K = t.max_order / 2;
  if (K < 1) return g;
  for (int k = 1; k <= K; ++k) {
    const int p = 2 * k;
    const double xp = to_double(t.x_exact[p]);
    g.laplace.emplace_back(p, std::pow(xp / to_double(factorial(p)), 1.0 / p));
    g.bounded.emplace_back(
        k, std::pow(xp / (to_double(factorial(p)) *
                          std::pow(std::log(static_cast<double>(p)), p)),
                    1.0 / p));
    const double term = std::pow(xp, -1.0 / p);
    g.carleman.push_back(g.carleman.empty() ? term : g.carleman.back() + term);
  }
  g.laplace_growing = true;
  for (std::size_t i = 1; i < g.laplace.size(); ++i)
    if (g.laplace[i - 1].first >= 10 &&
        g.laplace[i].second <= g.laplace[i - 1].second)
      g.laplace_growing = false;
  double b_head = 0.0;
  for (std::size_t i = 0; i < g.bounded.size() && i < 5; ++i)
    b_head = std::max(b_head, g.bounded[i].second);
  g.bounded_ok = true;
  for (const auto &[k, bk] : g.bounded)
    if (bk > 2.0 * b_head) g.bounded_ok = false;
  g.carleman_min_increment_ratio = 1e300;
  for (std::size_t i = 2; i < g.carleman.size(); ++i) {
    const double inc = g.carleman[i] - g.carleman[i - 1];
    const double prev = g.carleman[i - 1] - g.carleman[i - 2];
    if (prev > 0)
      g.carleman_min_increment_ratio =
          std::min(g.carleman_min_increment_ratio, inc / prev);
  }
  return g;
}

}  // namespace urnlab
