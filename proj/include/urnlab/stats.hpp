#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace urnlab {

inline double mean(const std::vector<double> &v) {
  if (v.empty()) throw std::invalid_argument("mean of empty sample");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double sample_moment(const std::vector<double> &v, int p) {
  if (v.empty()) throw std::invalid_argument("moment of empty sample");
  double s = 0.0;
  for (double x : v) s += std::pow(x, p);
  return s / static_cast<double>(v.size());
}

inline double variance(const std::vector<double> &v) {
  const double mu = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - mu) * (x - mu);
  return s / static_cast<double>(v.size());
}

inline double stddev(const std::vector<double> &v) { return std::sqrt(variance(v)); }

// Standard error of the sample mean.
inline double standard_error(const std::vector<double> &v) {
  return stddev(v) / std::sqrt(static_cast<double>(v.size()));
}

// Standard error of the p-th sample moment, estimated from the sample.
inline double moment_standard_error(const std::vector<double> &v, int p) {
  const double m2p = sample_moment(v, 2 * p);
  const double mp = sample_moment(v, p);
  return std::sqrt(std::max(m2p - mp * mp, 0.0) / static_cast<double>(v.size()));
}

// Empirical Kolmogorov-Smirnov statistic against a CDF; values need not be
// pre-sorted.
inline double ks_distance(std::vector<double> values,
                          const std::function<double(double)> &cdf) {
  if (values.empty()) throw std::invalid_argument("ks_distance of empty sample");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double F = cdf(values[i]);
    ks = std::max(ks, std::abs(F - static_cast<double>(i + 1) / n));
    ks = std::max(ks, std::abs(F - static_cast<double>(i) / n));
  }
  return ks;
}

inline double gamma_cdf(double shape, double x) {
  if (x <= 0.0) return 0.0;
  return boost::math::gamma_p(shape, x);
}

// Two-sample KS statistic by the usual merge sweep.
inline double two_sample_ks(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("two_sample_ks of empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double ks = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    ks = std::max(ks, std::abs(static_cast<double>(i) / na -
                               static_cast<double>(j) / nb));
  }
  return ks;
}

struct W2Result {
  double distance = 0.0;
  bool resampled = false;  // sizes differed; smaller side quantile-resampled
};

// Wasserstein-2 between empirical measures on the line: order statistics
// paired rank by rank (exact for equal sizes).  Unequal sizes pair each
// rank of the larger sample with the matching quantile of the smaller,
// i.e. deterministic resampling with replacement; the flag records it.
inline W2Result two_sample_w2_full(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("two_sample_w2 of empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  W2Result res;
  if (a.size() < b.size()) a.swap(b);
  const std::size_t n = a.size(), k = b.size();
  res.resampled = (n != k);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double bv = b[i * k / n];
    s += (a[i] - bv) * (a[i] - bv);
  }
  res.distance = std::sqrt(s / static_cast<double>(n));
  return res;
}

inline double two_sample_w2(const std::vector<double> &a,
                            const std::vector<double> &b) {
  return two_sample_w2_full(a, b).distance;
}

struct ChiSquareReport {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  int bins = 0;
  bool trivial = false;  // degenerate comparison, reported as passing
};

// Goodness of fit of observed counts against exact atom probabilities.
// Adjacent atoms are merged until each bin has expected count >= min_expected.
inline ChiSquareReport chi_square_gof(const std::vector<double> &probs,
                                      const std::vector<std::int64_t> &counts,
                                      double min_expected = 5.0) {
  if (probs.size() != counts.size() || probs.empty())
    throw std::invalid_argument("chi_square_gof: mismatched or empty input");
  std::int64_t n = 0;
  for (auto c : counts) n += c;
  std::vector<std::pair<double, double>> bins;  // (expected, observed)
  double pe = 0.0, po = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    pe += probs[i] * static_cast<double>(n);
    po += static_cast<double>(counts[i]);
    if (pe >= min_expected) {
      bins.emplace_back(pe, po);
      pe = po = 0.0;
    }
  }
  if (pe > 0.0 || po > 0.0) {
    if (!bins.empty()) {
      bins.back().first += pe;
      bins.back().second += po;
    } else {
      bins.emplace_back(pe, po);
    }
  }
  ChiSquareReport rep;
  rep.bins = static_cast<int>(bins.size());
  rep.dof = std::max(rep.bins - 1, 0);
  if (rep.dof == 0) {
    rep.trivial = true;
    return rep;
  }
  for (const auto &[e, o] : bins) rep.statistic += (o - e) * (o - e) / e;
  boost::math::chi_squared dist(rep.dof);
  rep.p_value = boost::math::cdf(boost::math::complement(dist, rep.statistic));
  return rep;
}

}  // namespace urnlab
