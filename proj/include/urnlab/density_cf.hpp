#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "urnlab/stats.hpp"

namespace urnlab {

struct CFReport {
  std::vector<double> t;        // strictly increasing, positive
  std::vector<double> modulus;  // |phi_hat(t)| in [0,1]
  double noise_floor = 0.0;     // 4/sqrt(N)
  std::int64_t count = 0;
};

// |N^{-1} sum_j exp(i t X_j)| on the grid.
inline CFReport empirical_cf(const std::vector<double> &values,
                             const std::vector<double> &t_grid) {
  if (values.empty()) throw std::invalid_argument("empirical_cf: empty sample");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (t_grid[i] <= t_grid[i - 1])
      throw std::invalid_argument("empirical_cf: t grid must be increasing");
  CFReport rep;
  rep.t = t_grid;
  rep.count = static_cast<std::int64_t>(values.size());
  rep.noise_floor = 4.0 / std::sqrt(static_cast<double>(values.size()));
  rep.modulus.resize(t_grid.size());
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    double re = 0.0, im = 0.0;
    for (double x : values) {
      re += std::cos(t_grid[j] * x);
      im += std::sin(t_grid[j] * x);
    }
    rep.modulus[j] = std::hypot(re, im) / static_cast<double>(values.size());
  }
  return rep;
}

struct SupportSpan {
  double min = 0.0;
  double max = 0.0;
  double fraction_negative = 0.0;
  bool degenerate = false;  // single atom
};

inline SupportSpan support_span(const std::vector<double> &values) {
  if (values.empty()) throw std::invalid_argument("support_span: empty sample");
  SupportSpan s;
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  s.degenerate = (s.min == s.max);
  std::size_t neg = 0;
  for (double v : values)
    if (v < 0.0) ++neg;
  s.fraction_negative = static_cast<double>(neg) / static_cast<double>(values.size());
  return s;
}

inline double silverman_bandwidth(const std::vector<double> &values) {
  return 1.06 * stddev(values) *
         std::pow(static_cast<double>(values.size()), -0.2);
}

// Default evaluation grid: points uniform over mean +/- 6 sample std.
inline std::vector<double> kde_default_grid(const std::vector<double> &values,
                                            std::size_t points = 512) {
  const double mu = mean(values);
  const double sd = stddev(values);
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = mu - 6.0 * sd +
              12.0 * sd * static_cast<double>(i) / static_cast<double>(points - 1);
  return grid;
}

// Gaussian-kernel density on a uniform grid, computed by linear binning at
// sub-bandwidth resolution and discrete convolution (kernel truncated at
// 8 bandwidths; the lost mass is ~1e-15).  Samples beyond the padded range
// are dropped, which only matters for grids much narrower than the sample.
inline std::vector<double> kde_density(const std::vector<double> &values,
                                       double bandwidth,
                                       const std::vector<double> &grid) {
  if (values.empty()) throw std::invalid_argument("kde_density: empty sample");
  if (bandwidth <= 0.0)
    throw std::invalid_argument("kde_density: bandwidth must be positive");
  if (grid.size() < 2) throw std::invalid_argument("kde_density: short grid");
  const double spacing = grid[1] - grid[0];
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (std::abs(grid[i] - grid[i - 1] - spacing) > 1e-9 * std::abs(spacing))
      throw std::invalid_argument("kde_density: grid must be uniform");

  const int refine = std::max(1, static_cast<int>(std::ceil(4.0 * spacing / bandwidth)));
  const double bw = spacing / refine;  // bin width <= bandwidth/4
  const int radius = static_cast<int>(std::ceil(8.0 * bandwidth / bw));
  // bin lattice anchored to the grid so a symmetric grid gives symmetric bins
  const double lo = grid.front() - radius * bw;
  const std::size_t nbins =
      static_cast<std::size_t>(grid.size() - 1) * static_cast<std::size_t>(refine) +
      2 * static_cast<std::size_t>(radius) + 1;

  std::vector<double> massbin(nbins, 0.0);
  const double wt = 1.0 / static_cast<double>(values.size());
  for (double x : values) {
    const double pos = (x - lo) / bw;
    if (pos < 0.0 || pos >= static_cast<double>(nbins - 1)) continue;
    const auto j = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(j);
    massbin[j] += wt * (1.0 - frac);
    massbin[j + 1] += wt * frac;
  }

  std::vector<double> kernel(2 * static_cast<std::size_t>(radius) + 1);
  const double norm = 1.0 / (bandwidth * 2.506628274631000502);  // sqrt(2 pi)
  for (int k = -radius; k <= radius; ++k) {
    const double u = k * bw / bandwidth;
    kernel[static_cast<std::size_t>(k + radius)] = norm * std::exp(-0.5 * u * u);
  }

  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const std::int64_t center =
        static_cast<std::int64_t>(g) * refine + radius;
    double s = 0.0;
    for (int k = -radius; k <= radius; ++k) {
      const std::int64_t j = center + k;
      if (j < 0 || j >= static_cast<std::int64_t>(nbins)) continue;
      s += massbin[static_cast<std::size_t>(j)] *
           kernel[static_cast<std::size_t>(k + radius)];
    }
    out[g] = s;
  }
  return out;
}

inline double trapezoid_integral(const std::vector<double> &grid,
                                 const std::vector<double> &f) {
  double s = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    s += 0.5 * (f[i] + f[i - 1]) * (grid[i] - grid[i - 1]);
  return s;
}

}  // namespace urnlab
