#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "urnlab/rational.hpp"
#include "urnlab/rng.hpp"
#include "urnlab/stats.hpp"
#include "urnlab/urn.hpp"

namespace urnlab {

// Law of the red-ball count after n drawings.  Keys are red counts
// alpha + i*a + (n-i)*c (i red-rule draws); black counts are implied by
// total = alpha + beta + n*S.
struct ExactDistribution {
  UrnSpec spec;
  Composition init;
  std::int64_t n = 0;
  std::vector<std::pair<std::int64_t, Rational>> mass;  // sorted by red count

  Rational total_mass() const {
    Rational s(0);
    for (const auto &[r, p] : mass) s += p;
    return s;
  }
  Rational mean_red() const {
    Rational s(0);
    for (const auto &[r, p] : mass) s += p * make_rational(r);
    return s;
  }
  // E u2(U(n)) computed from the distribution itself.
  Rational mean_u2() const {
    const std::int64_t total = init.total() + n * spec.S;
    Rational s(0);
    for (const auto &[r, p] : mass)
      s += p * spec.u2(Composition{r, total - r});
    return s;
  }
};

// One DP step at a time over the (i = red-rule draw count) state vector.
// From red count r with t balls: r -> r+a w.p. r/t, r -> r+c w.p. 1-r/t.
// Prob is Rational (exact) or double (fast mode for large n, mass deficit
// bounded by accumulated rounding, ~1e-12 at n = 1e4..1e6).
template <typename Prob>
class DistEngine {
 public:
  DistEngine(const UrnSpec &spec, const Composition &init)
      : spec_(spec), init_(init), probs_(1, Prob(1)) {
    if (init.total() < 1) throw std::invalid_argument("empty initial composition");
  }

  void step() {
    const std::int64_t t = init_.total() + k_ * spec_.S;
    std::vector<Prob> next(probs_.size() + 1, Prob(0));
    for (std::size_t i = 0; i < probs_.size(); ++i) {
      if (probs_[i] == Prob(0)) continue;
      const std::int64_t red =
          init_.red + static_cast<std::int64_t>(i) * spec_.a +
          (k_ - static_cast<std::int64_t>(i)) * spec_.c;
      const Prob p_red = fraction(red, t);
      next[i + 1] += probs_[i] * p_red;
      next[i] += probs_[i] * (Prob(1) - p_red);
    }
    probs_.swap(next);
    ++k_;
  }

  void run_to(std::int64_t n) {
    while (k_ < n) step();
  }

  std::int64_t steps() const { return k_; }

  std::int64_t red_at(std::size_t i) const {
    return init_.red + static_cast<std::int64_t>(i) * spec_.a +
           (k_ - static_cast<std::int64_t>(i)) * spec_.c;
  }

  const std::vector<Prob> &probs() const { return probs_; }

  // E u2 of the current state, in the probability type's arithmetic.
  Prob mean_u2() const {
    const std::int64_t total = init_.total() + k_ * spec_.S;
    Prob s(0);
    for (std::size_t i = 0; i < probs_.size(); ++i) {
      const std::int64_t red = red_at(i);
      s += probs_[i] * fraction(spec_.b * red - spec_.c * (total - red), spec_.S);
    }
    return s;
  }

 private:
  static Prob fraction(std::int64_t num, std::int64_t den) {
    if constexpr (std::is_same_v<Prob, Rational>) {
      return make_rational(num, den);
    } else {
      return static_cast<Prob>(num) / static_cast<Prob>(den);
    }
  }

  UrnSpec spec_;
  Composition init_;
  std::int64_t k_ = 0;
  std::vector<Prob> probs_;
};

inline ExactDistribution exact_distribution(const UrnSpec &spec,
                                            const Composition &init,
                                            std::int64_t n) {
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  DistEngine<Rational> engine(spec, init);
  engine.run_to(n);
  // Collisions (a == c) merge through the map; unreachable zero-mass
  // states (forced draws from a monochromatic start) are dropped.
  std::map<std::int64_t, Rational> acc;
  for (std::size_t i = 0; i < engine.probs().size(); ++i)
    if (engine.probs()[i] != 0) acc[engine.red_at(i)] += engine.probs()[i];
  ExactDistribution dist;
  dist.spec = spec;
  dist.init = init;
  dist.n = n;
  dist.mass.assign(acc.begin(), acc.end());
  return dist;
}

// Red counts mapped to (r - E r)/n^sigma; pairs sorted by value.
inline std::vector<std::pair<double, double>> normalized_profile(
    const ExactDistribution &dist) {
  if (dist.n < 1) throw std::invalid_argument("normalized_profile needs n >= 1");
  const Rational mean = dist.mean_red();
  const double scale =
      std::pow(static_cast<double>(dist.n), to_double(dist.spec.sigma));
  std::vector<std::pair<double, double>> out;
  out.reserve(dist.mass.size());
  for (const auto &[r, p] : dist.mass)
    out.emplace_back(to_double(make_rational(r) - mean) / scale, to_double(p));
  std::sort(out.begin(), out.end());
  return out;
}

// Samples the forest decomposition of U_(alpha,beta)(n): tree sizes follow a
// diagonal S*I urn over alpha+beta colors started from (1,...,1); tree k then
// runs an independent sub-urn from (1,0) (k <= alpha) or (0,1) for its own
// draw count.  The summed red count is compared against the exact DP law
// with a chi-square test (atoms merged below min expected count 5).
inline ChiSquareReport decomposition_check(const UrnSpec &spec,
                                           const Composition &init,
                                           std::int64_t n, std::int64_t N,
                                           std::uint64_t seed) {
  if (init.total() < 1) throw std::invalid_argument("empty initial composition");
  if (init.total() == 1) {
    // Single tree: both sides are the same process by definition.
    ChiSquareReport rep;
    rep.trivial = true;
    return rep;
  }
  const ExactDistribution exact = exact_distribution(spec, init, n);
  if (n == 0 || exact.mass.size() == 1) {
    ChiSquareReport rep;
    rep.trivial = true;
    return rep;
  }

  std::map<std::int64_t, std::int64_t> counts;
  for (const auto &[r, p] : exact.mass) counts[r] = 0;
  const std::size_t trees = static_cast<std::size_t>(init.total());
  std::vector<std::int64_t> size(trees), draws(trees);
  for (std::int64_t traj = 0; traj < N; ++traj) {
    Rng rng(seed, static_cast<std::uint64_t>(traj));
    std::fill(size.begin(), size.end(), 1);
    std::fill(draws.begin(), draws.end(), 0);
    std::int64_t total = static_cast<std::int64_t>(trees);
    for (std::int64_t k = 0; k < n; ++k) {
      std::int64_t pick = static_cast<std::int64_t>(rng.uniform01() * total);
      std::size_t j = 0;
      for (; j + 1 < trees; ++j) {
        if (pick < size[j]) break;
        pick -= size[j];
      }
      size[j] += spec.S;
      ++draws[j];
      total += spec.S;
    }
    std::int64_t red = 0;
    for (std::size_t j = 0; j < trees; ++j) {
      std::int64_t r = (j < static_cast<std::size_t>(init.red)) ? 1 : 0;
      std::int64_t t = 1;
      for (std::int64_t k = 0; k < draws[j]; ++k) {
        if (rng.uniform01() * t < r)
          r += spec.a;
        else
          r += spec.c;
        t += spec.S;
      }
      red += r;
    }
    auto it = counts.find(red);
    if (it == counts.end())
      throw std::logic_error("decomposition sample outside exact support");
    ++it->second;
  }

  std::vector<double> probs;
  std::vector<std::int64_t> obs;
  for (const auto &[r, p] : exact.mass) {
    probs.push_back(to_double(p));
    obs.push_back(counts[r]);
  }
  return chi_square_gof(probs, obs);
}

}  // namespace urnlab
