#pragma once

#include <fstream>
#include <iomanip>
#include <stdexcept>
#include <string>
#include <vector>

#include "urnlab/density_cf.hpp"
#include "urnlab/dirichlet.hpp"
#include "urnlab/exact_dist.hpp"
#include "urnlab/fixpoint.hpp"
#include "urnlab/moments.hpp"

namespace urnlab {

inline std::ofstream open_csv(const std::string &path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << std::setprecision(17);
  return out;
}

inline void write_distribution_csv(const ExactDistribution &dist,
                                   const std::string &path) {
  auto out = open_csv(path);
  out << "state,prob_rational,prob_decimal\n";
  for (const auto &[r, p] : dist.mass)
    out << r << "," << to_string(p) << "," << to_double(p) << "\n";
}

inline void write_profile_csv(const std::vector<std::pair<double, double>> &profile,
                              const std::string &path) {
  auto out = open_csv(path);
  out << "value,probability\n";
  for (const auto &[v, p] : profile) out << v << "," << p << "\n";
}

inline void write_trace_csv(const FixpointTrace &trace, const std::string &path) {
  auto out = open_csv(path);
  out << "iteration,w2_x,w2_y,ratio_x,ratio_y,shift_x,shift_y\n";
  for (const auto &r : trace.rows)
    out << r.iteration << "," << r.w2_x << "," << r.w2_y << "," << r.ratio_x
        << "," << r.ratio_y << "," << r.shift_x << "," << r.shift_y << "\n";
}

inline void write_moment_table_csv(const MomentTable &t, const std::string &path) {
  auto out = open_csv(path);
  out << "p,x_rational,x_decimal,y_rational,y_decimal\n";
  for (int p = 0; p <= t.max_order; ++p) {
    out << p << ",";
    out << (t.exact ? to_string(t.x_exact[p]) : std::string()) << ",";
    out << t.x[p] << ",";
    if (!t.composite && !t.y.empty()) {
      out << (t.exact ? to_string(t.y_exact[p]) : std::string()) << ","
          << t.y[p];
    } else {
      out << ",";
    }
    out << "\n";
  }
}

inline void write_simplex_csv(const SimplexSample &s, const std::string &path) {
  auto out = open_csv(path);
  for (std::size_t k = 0; k < s.d; ++k) out << (k ? "," : "") << "c" << k;
  out << "\n";
  for (std::size_t i = 0; i < s.count(); ++i) {
    for (std::size_t k = 0; k < s.d; ++k) out << (k ? "," : "") << s.at(i, k);
    out << "\n";
  }
}

inline void write_cf_csv(const CFReport &rep, const std::string &path) {
  auto out = open_csv(path);
  out << "t,modulus,noise_floor\n";
  for (std::size_t i = 0; i < rep.t.size(); ++i)
    out << rep.t[i] << "," << rep.modulus[i] << "," << rep.noise_floor << "\n";
}

inline void write_kde_csv(const std::vector<double> &grid,
                          const std::vector<double> &density,
                          const std::string &path) {
  auto out = open_csv(path);
  out << "x,density\n";
  for (std::size_t i = 0; i < grid.size(); ++i)
    out << grid[i] << "," << density[i] << "\n";
}

}  // namespace urnlab
