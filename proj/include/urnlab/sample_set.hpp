#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "urnlab/urn.hpp"

namespace urnlab {

// Sorted empirical sample with provenance.
struct SampleSet {
  std::vector<double> values;  // ascending
  UrnSpec spec;
  Composition init;
  std::string estimator;
  std::int64_t horizon = 0;
  std::int64_t count = 0;
  std::uint64_t seed = 0;

  void finalize() {
    std::sort(values.begin(), values.end());
    count = static_cast<std::int64_t>(values.size());
  }
};

inline nlohmann::json sample_meta_json(const SampleSet &s) {
  return nlohmann::json{{"matrix", {s.spec.a, s.spec.b, s.spec.c, s.spec.d}},
                        {"init", {s.init.red, s.init.black}},
                        {"estimator", s.estimator},
                        {"horizon", s.horizon},
                        {"trajectories", s.count},
                        {"seed", s.seed}};
}

// CSV: one value per line after a '#'-prefixed metadata header; the same
// metadata goes to <path>.json as a sidecar.
inline void write_sample_csv(const SampleSet &s, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "# estimator=" << s.estimator << " matrix=" << s.spec.matrix_string()
      << " init=(" << s.init.red << "," << s.init.black << ")"
      << " horizon=" << s.horizon << " N=" << s.count << " seed=" << s.seed
      << "\n";
  out << "value\n";
  out << std::setprecision(17);
  for (double v : s.values) out << v << "\n";
  std::ofstream side(path + ".json");
  side << sample_meta_json(s).dump(2) << "\n";
}

inline SampleSet read_sample_csv(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  SampleSet s;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line == "value") continue;
    s.values.push_back(std::stod(line));
  }
  if (s.values.empty()) throw std::runtime_error("no samples in " + path);
  s.finalize();
  return s;
}

}  // namespace urnlab
