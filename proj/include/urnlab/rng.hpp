#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace urnlab {

inline std::uint64_t splitmix64(std::uint64_t &state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256++ seeded through splitmix64.  Stream (seed, index) is the
// reproducibility contract: worker/trajectory/particle i always draws from
// Rng(seed, i), so results do not depend on thread count or schedule.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t sm = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    for (auto &w : s_) w = splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on [0,1) with 53 random bits.
  double uniform01() { return (next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0,1]; safe under log().
  double uniform01_open() { return 1.0 - uniform01(); }

  double exponential(double rate) { return -std::log(uniform01_open()) / rate; }

  double normal() {
    const double u = uniform01_open();
    const double v = uniform01();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586477 * v);
  }

  // Marsaglia-Tsang for shape >= 1.
  double gamma_shape_ge1(double shape) {
    const double d = shape - 1.0 / 3.0;
    const double cc = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + cc * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform01_open();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // log of a Gamma(shape) draw, any shape > 0.  For shape < 1 uses the
  // boost Gamma(a) = Gamma(a+1) U^{1/a} in log space; shape 1/S with large S
  // would underflow to zero in linear space.
  double log_gamma_draw(double shape) {
    if (shape >= 1.0) return std::log(gamma_shape_ge1(shape));
    return std::log(gamma_shape_ge1(shape + 1.0)) +
           std::log(uniform01_open()) / shape;
  }

  double gamma_draw(double shape) {
    if (shape >= 1.0) return gamma_shape_ge1(shape);
    return std::exp(log_gamma_draw(shape));
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

// log-weights of a Dirichlet(nu,...,nu) draw over dim coordinates:
// log V_k = log G_k - logsumexp(log G), G_k iid Gamma(nu).
inline void dirichlet_log_weights(Rng &rng, double nu, std::size_t dim,
                                  std::vector<double> &logw) {
  logw.resize(dim);
  double mx = -1e300;
  for (std::size_t k = 0; k < dim; ++k) {
    logw[k] = rng.log_gamma_draw(nu);
    if (logw[k] > mx) mx = logw[k];
  }
  double sum = 0.0;
  for (double lw : logw) sum += std::exp(lw - mx);
  const double lse = mx + std::log(sum);
  for (double &lw : logw) lw -= lse;
}

}  // namespace urnlab
