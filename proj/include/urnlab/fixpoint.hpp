#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "urnlab/parallel.hpp"
#include "urnlab/rng.hpp"
#include "urnlab/stats.hpp"
#include "urnlab/urn.hpp"

namespace urnlab {

// Elementary expectations (B, C) of (X, Y): (b/S, -c/S) in continuous time,
// scaled by Gamma(1/S)/Gamma((m+1)/S) in discrete time.  cB + bC = 0 on the
// nose in both cases.
inline std::pair<double, double> elementary_targets(const UrnSpec &spec,
                                                    System system) {
  const double B_ct = static_cast<double>(spec.b) / spec.S;
  const double C_ct = -static_cast<double>(spec.c) / spec.S;
  if (system == System::CT) return {B_ct, C_ct};
  const double k = std::exp(std::lgamma(1.0 / spec.S) -
                            std::lgamma((1.0 + spec.m) / spec.S));
  return {B_ct * k, C_ct * k};
}

// Two N-particle pools approximating the laws of (X, Y) on the mean fiber
// cB + bC = 0.
struct ParticlePair {
  std::vector<double> x, y;
  double target_x = 0.0, target_y = 0.0;
  UrnSpec spec;
  System system = System::DT;

  std::size_t size() const { return x.size(); }
};

inline ParticlePair make_point_pair(const UrnSpec &spec, System system,
                                    std::size_t N) {
  require_large(spec, "fixpoint solver");
  if (N < 2) throw std::invalid_argument("particle pools need N >= 2");
  auto [B, C] = elementary_targets(spec, system);
  ParticlePair p;
  p.x.assign(N, B);
  p.y.assign(N, C);
  p.target_x = B;
  p.target_y = C;
  p.spec = spec;
  p.system = system;
  return p;
}

inline void recenter(ParticlePair &p) {
  const double dx = p.target_x - mean(p.x);
  const double dy = p.target_y - mean(p.y);
  for (double &v : p.x) v += dx;
  for (double &v : p.y) v += dy;
}

// Gaussian-shaped admissible initialization with the same means; any member
// of M2(B) x M2(C) is a legal starting point.
inline ParticlePair make_gaussian_pair(const UrnSpec &spec, System system,
                                       std::size_t N, double stddev,
                                       std::uint64_t seed) {
  ParticlePair p = make_point_pair(spec, system, N);
  for (std::size_t i = 0; i < N; ++i) {
    Rng rng(seed, i);
    p.x[i] += stddev * rng.normal();
    p.y[i] += stddev * rng.normal();
  }
  recenter(p);
  return p;
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t step) {
  std::uint64_t s = seed + 0x9e3779b97f4a7c15ULL * (step + 1);
  return splitmix64(s);
}

// Dirichlet(1/S,...,1/S) over S+1 coordinates, each raised to sigma.
// Gamma draws stay in log space until the final exp.
inline std::vector<double> dirichlet_power_weights(const UrnSpec &spec,
                                                   Rng &rng) {
  const double sig = to_double(spec.sigma);
  std::vector<double> logw;
  dirichlet_log_weights(rng, 1.0 / spec.S, static_cast<std::size_t>(spec.S) + 1,
                        logw);
  for (double &lw : logw) lw = std::exp(sig * lw);
  return logw;
}

struct ApplyReport {
  double raw_mean_x = 0.0;  // before recentering
  double raw_mean_y = 0.0;
  double shift_x = 0.0;     // recentering perturbation, O(N^{-1/2})
  double shift_y = 0.0;
};

namespace detail {

// New X-particle: sum over nx parents from the x-pool then ny from the
// y-pool, weighted per system.  DT: fresh Dirichlet^sigma weights per
// particle; CT: one shared U^m factor on the plain sum.
inline double smooth_particle(const ParticlePair &p, std::size_t nx,
                              std::size_t ny, Rng &rng,
                              std::vector<double> &wbuf) {
  const std::size_t N = p.size();
  double acc = 0.0;
  if (p.system == System::DT) {
    const double sig = to_double(p.spec.sigma);
    dirichlet_log_weights(rng, 1.0 / p.spec.S,
                          static_cast<std::size_t>(p.spec.S) + 1, wbuf);
    std::size_t k = 0;
    for (std::size_t j = 0; j < nx; ++j, ++k)
      acc += std::exp(sig * wbuf[k]) *
             p.x[static_cast<std::size_t>(rng.uniform01() * N)];
    for (std::size_t j = 0; j < ny; ++j, ++k)
      acc += std::exp(sig * wbuf[k]) *
             p.y[static_cast<std::size_t>(rng.uniform01() * N)];
    return acc;
  }
  for (std::size_t j = 0; j < nx; ++j)
    acc += p.x[static_cast<std::size_t>(rng.uniform01() * N)];
  for (std::size_t j = 0; j < ny; ++j)
    acc += p.y[static_cast<std::size_t>(rng.uniform01() * N)];
  const double u = rng.uniform01_open();
  return std::pow(u, static_cast<double>(p.spec.m)) * acc;
}

}  // namespace detail

// One application of the smoothing transform K = (K1, K2) to the pair,
// with uniform parent resampling and per-particle seed streams; pools are
// recentered to the exact targets afterwards.
inline ApplyReport apply_K(ParticlePair &p, std::uint64_t seed,
                           int threads = 1) {
  const std::size_t N = p.size();
  const auto a = static_cast<std::size_t>(p.spec.a);
  const auto b = static_cast<std::size_t>(p.spec.b);
  const auto c = static_cast<std::size_t>(p.spec.c);
  const auto d = static_cast<std::size_t>(p.spec.d);
  std::vector<double> nx(N), ny(N);
  parallel_for(N, threads, [&](std::size_t i) {
    thread_local std::vector<double> wbuf;
    Rng rx(seed, i);
    nx[i] = detail::smooth_particle(p, a + 1, b, rx, wbuf);
    Rng ry(seed, N + i);
    ny[i] = detail::smooth_particle(p, c, d + 1, ry, wbuf);
  });
  p.x.swap(nx);
  p.y.swap(ny);
  ApplyReport rep;
  rep.raw_mean_x = mean(p.x);
  rep.raw_mean_y = mean(p.y);
  rep.shift_x = p.target_x - rep.raw_mean_x;
  rep.shift_y = p.target_y - rep.raw_mean_y;
  recenter(p);
  return rep;
}

inline ApplyReport apply_K_dt(ParticlePair &p, std::uint64_t seed,
                              int threads = 1) {
  if (p.system != System::DT)
    throw std::invalid_argument("apply_K_dt on a CT-tagged pair");
  return apply_K(p, seed, threads);
}

inline ApplyReport apply_K_ct(ParticlePair &p, std::uint64_t seed,
                              int threads = 1) {
  if (p.system != System::CT)
    throw std::invalid_argument("apply_K_ct on a DT-tagged pair");
  return apply_K(p, seed, threads);
}

struct TraceRow {
  int iteration = 0;
  double w2_x = 0.0;
  double w2_y = 0.0;
  double ratio_x = 0.0;  // 0 when undefined (first iteration)
  double ratio_y = 0.0;
  double shift_x = 0.0;
  double shift_y = 0.0;
};

struct FixpointTrace {
  std::vector<TraceRow> rows;
  ParticlePair final_pair;
  double lipschitz_bound = 0.0;  // sqrt((S+1)/(2m+1)) from the contraction lemma
  double noise_floor = 0.0;      // 3/sqrt(N), engineering choice
};

// Iterates K from point masses at the exact expectations, recording W2
// between consecutive pools (order-statistic formula) and successive ratios.
inline FixpointTrace iterate_fixpoint(const UrnSpec &spec, System system,
                                      std::size_t N, int iterations,
                                      std::uint64_t seed, int threads = 1) {
  FixpointTrace trace;
  trace.final_pair = make_point_pair(spec, system, N);
  trace.lipschitz_bound =
      std::sqrt(static_cast<double>(spec.S + 1) / (2.0 * spec.m + 1.0));
  trace.noise_floor = 3.0 / std::sqrt(static_cast<double>(N));
  ParticlePair &p = trace.final_pair;
  std::vector<double> px, py;
  for (int it = 1; it <= iterations; ++it) {
    px = p.x;
    py = p.y;
    const ApplyReport rep = apply_K(p, derive_seed(seed, it), threads);
    TraceRow row;
    row.iteration = it;
    row.w2_x = two_sample_w2(px, p.x);
    row.w2_y = two_sample_w2(py, p.y);
    row.shift_x = rep.shift_x;
    row.shift_y = rep.shift_y;
    if (!trace.rows.empty()) {
      const TraceRow &prev = trace.rows.back();
      row.ratio_x = prev.w2_x > 0 ? row.w2_x / prev.w2_x : 0.0;
      row.ratio_y = prev.w2_y > 0 ? row.w2_y / prev.w2_y : 0.0;
    }
    trace.rows.push_back(row);
  }
  return trace;
}

// DT solution -> CT solution: multiply every particle by an independent
// xi^sigma, xi ~ Gamma(1/S).  The targets pick up the factor
// E xi^sigma = Gamma((1+m)/S)/Gamma(1/S); elementary DT targets land on the
// elementary CT fiber, zero-mean pools stay zero-mean.
inline ParticlePair transfer_dt_to_ct(const ParticlePair &p, std::uint64_t seed,
                                      int threads = 1) {
  if (p.system != System::DT)
    throw std::invalid_argument("transfer_dt_to_ct needs a DT-tagged pair");
  const double sig = to_double(p.spec.sigma);
  const double shape = 1.0 / p.spec.S;
  ParticlePair out = p;
  out.system = System::CT;
  const std::size_t N = p.size();
  parallel_for(N, threads, [&](std::size_t i) {
    Rng rng(seed, i);
    out.x[i] = p.x[i] * std::exp(sig * rng.log_gamma_draw(shape));
    Rng rng2(seed, N + i);
    out.y[i] = p.y[i] * std::exp(sig * rng2.log_gamma_draw(shape));
  });
  const double factor = std::exp(std::lgamma((1.0 + p.spec.m) / p.spec.S) -
                                 std::lgamma(1.0 / p.spec.S));
  out.target_x = p.target_x * factor;
  out.target_y = p.target_y * factor;
  recenter(out);
  return out;
}

}  // namespace urnlab
