#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "urnlab/density_cf.hpp"
#include "urnlab/dirichlet.hpp"
#include "urnlab/exact_dist.hpp"
#include "urnlab/fixpoint.hpp"
#include "urnlab/io.hpp"
#include "urnlab/mc.hpp"
#include "urnlab/moments.hpp"
#include "urnlab/sample_set.hpp"

namespace urnlab::cli {

// exit code 2: a named invariant failed at run time
struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// carries the rendered help text out of parse_config
struct HelpRequested {
  std::string text;
};

struct RunConfig {
  std::string subcommand;
  std::vector<std::int64_t> matrix;       // a,b,c,d
  std::vector<std::int64_t> init{1, 0};   // alpha,beta (2 entries) or d-color
  std::vector<std::int64_t> powers;       // gamma-p multi-index
  std::string system = "ct";
  std::int64_t steps = 300;
  std::int64_t horizon = 2000;
  std::int64_t trajectories = 100000;
  std::int64_t particles = 100000;
  int iters = 40;
  int max_order = 8;
  int pmax = 60;
  std::int64_t diag_S = 1;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = default_threads();
  std::int64_t decomp_check = 0;  // sample count; 0 disables
  bool float_mode = false;        // double-precision DP for large n
  bool sweep = false;
  double bandwidth = 0.0;         // 0: Silverman rule
  int grid_points = 512;
  double t_min = 1.0, t_max = 200.0;
  int t_count = 40;
  std::string init_shape = "point";
  std::string out, profile_out, xi_out, in_path, summary;

  std::string summary_path() const {
    if (!summary.empty()) return summary;
    if (!out.empty()) return out + ".summary.json";
    return subcommand + "-summary.json";
  }
};

inline std::vector<std::int64_t> parse_int_list(const std::string &text,
                                                const char *what) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoll(item));
    } catch (const std::exception &) {
      throw CLI::ValidationError(std::string(what) + ": bad integer '" + item + "'");
    }
  }
  if (out.empty()) throw CLI::ValidationError(std::string(what) + ": empty list");
  return out;
}

namespace detail {

struct OptionRefs {
  std::string matrix_text, init_text, powers_text;
};

inline void add_common(CLI::App *sub, RunConfig &cfg, OptionRefs &refs,
                       bool needs_matrix, bool needs_seed) {
  auto *m = sub->add_option("--matrix", refs.matrix_text,
                            "replacement matrix a,b,c,d");
  if (needs_matrix) m->required();
  sub->add_option("--init", refs.init_text, "initial composition");
  auto *s = sub->add_option("--seed", cfg.seed, "RNG seed");
  if (needs_seed) s->required();
  s->each([&cfg](const std::string &) { cfg.seed_set = true; });
  sub->add_option("--threads", cfg.threads, "worker cap (results unchanged)")
      ->envname("URNLAB_THREADS");
  sub->add_option("--out", cfg.out, "primary artifact path");
  sub->add_option("--summary", cfg.summary, "JSON summary path");
}

}  // namespace detail

// Flags override config-file values; unknown keys are rejected.
inline RunConfig parse_config(const std::vector<std::string> &args) {
  RunConfig cfg;
  detail::OptionRefs refs;
  CLI::App app{"urnlab: a numerical laboratory for large two-color Polya urns"};
  app.require_subcommand(1);
  app.fallthrough();  // lets --config/--threads sit before or after the subcommand
  app.set_config("--config");
  app.allow_config_extras(false);

  auto *exact = app.add_subcommand("exact-dist", "exact DP law of the red count");
  detail::add_common(exact, cfg, refs, true, false);
  exact->add_option("--steps", cfg.steps, "drawing count n");
  exact->add_option("--profile-out", cfg.profile_out, "normalized profile CSV");
  exact->add_option("--decomp-check", cfg.decomp_check,
                    "forest-decomposition chi-square sample count");
  exact->add_flag("--float", cfg.float_mode,
                  "double-precision DP (large n; mass deficit <= 1e-12)");

  auto *mcw = app.add_subcommand("mc-w", "Monte Carlo W estimators");
  detail::add_common(mcw, cfg, refs, true, true);
  mcw->add_option("--system", cfg.system, "dt|ct")
      ->check(CLI::IsMember({"dt", "ct"}));
  mcw->add_option("--horizon", cfg.horizon, "drawings per trajectory");
  mcw->add_option("--trajectories", cfg.trajectories, "sample count N");
  mcw->add_option("--xi-out", cfg.xi_out, "xi sample CSV (ct only)");
  mcw->add_flag("--sweep", cfg.sweep, "compare horizons n, 2n, 4n");

  auto *conn = app.add_subcommand("connexion-check",
                                  "W^CT vs xi^sigma W^DT in distribution");
  detail::add_common(conn, cfg, refs, true, true);
  conn->add_option("--horizon", cfg.horizon, "drawings per trajectory");
  conn->add_option("--trajectories", cfg.trajectories, "sample count N");

  auto *fix = app.add_subcommand("fixpoint", "particle smoothing-transform solver");
  detail::add_common(fix, cfg, refs, true, true);
  fix->add_option("--system", cfg.system, "dt|ct")
      ->check(CLI::IsMember({"dt", "ct"}));
  fix->add_option("--particles", cfg.particles, "pool size N");
  fix->add_option("--iters", cfg.iters, "iteration count");
  fix->add_option("--init-shape", cfg.init_shape, "point|gaussian")
      ->check(CLI::IsMember({"point", "gaussian"}));

  auto *mom = app.add_subcommand("moments", "moment tables");
  detail::add_common(mom, cfg, refs, true, false);
  mom->add_option("--system", cfg.system, "ct|dt|composite")
      ->check(CLI::IsMember({"ct", "dt", "composite"}));
  mom->add_option("--max-order", cfg.max_order, "highest order P");

  auto *phi = app.add_subcommand("phi-check", "Phi(p) bound verification");
  phi->add_option("--S", cfg.diag_S, "balance")->required();
  phi->add_option("--pmax", cfg.pmax, "highest order");
  phi->add_option("--out", cfg.out, "primary artifact path");
  phi->add_option("--summary", cfg.summary, "JSON summary path");

  auto *dir = app.add_subcommand("dirichlet-check", "diagonal urn vs Dirichlet");
  detail::add_common(dir, cfg, refs, false, true);
  dir->add_option("--S", cfg.diag_S, "diagonal balance")->required();
  dir->add_option("--steps", cfg.steps, "drawing count n");
  dir->add_option("--trajectories", cfg.trajectories, "sample count N");

  auto *gp = app.add_subcommand("gamma-p", "exact eigenfunction expectation");
  gp->add_option("--init", refs.init_text, "d-color initial composition")->required();
  gp->add_option("--S", cfg.diag_S, "diagonal balance")->required();
  gp->add_option("--steps", cfg.steps, "drawing count n");
  gp->add_option("--powers", refs.powers_text, "multi-index p")->required();
  gp->add_option("--out", cfg.out, "primary artifact path");
  gp->add_option("--summary", cfg.summary, "JSON summary path");

  auto *den = app.add_subcommand("density", "kernel density estimate");
  den->add_option("--in", cfg.in_path, "sample CSV")->required();
  den->add_option("--bandwidth", cfg.bandwidth, "kernel bandwidth (default Silverman)");
  den->add_option("--grid-points", cfg.grid_points, "grid size");
  den->add_option("--out", cfg.out, "density CSV")->required();
  den->add_option("--summary", cfg.summary, "JSON summary path");

  auto *cf = app.add_subcommand("cf-decay", "empirical characteristic function");
  cf->add_option("--in", cfg.in_path, "sample CSV")->required();
  cf->add_option("--t-min", cfg.t_min, "grid start");
  cf->add_option("--t-max", cfg.t_max, "grid end");
  cf->add_option("--t-count", cfg.t_count, "grid size");
  cf->add_option("--out", cfg.out, "CF CSV")->required();
  cf->add_option("--summary", cfg.summary, "JSON summary path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    throw HelpRequested{app.help()};
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (!refs.matrix_text.empty()) {
    cfg.matrix = parse_int_list(refs.matrix_text, "--matrix");
    if (cfg.matrix.size() != 4)
      throw CLI::ValidationError("--matrix needs exactly 4 entries");
  }
  if (!refs.init_text.empty()) cfg.init = parse_int_list(refs.init_text, "--init");
  if (!refs.powers_text.empty())
    cfg.powers = parse_int_list(refs.powers_text, "--powers");
  if (cfg.threads < 1) cfg.threads = 1;
  // validate the urn up front: every urn-consuming command needs it
  if (!cfg.matrix.empty())
    build_spec(cfg.matrix[0], cfg.matrix[1], cfg.matrix[2], cfg.matrix[3]);
  return cfg;
}

inline nlohmann::json config_json(const RunConfig &cfg) {
  return nlohmann::json{{"subcommand", cfg.subcommand},
                        {"matrix", cfg.matrix},
                        {"init", cfg.init},
                        {"system", cfg.system},
                        {"steps", cfg.steps},
                        {"horizon", cfg.horizon},
                        {"trajectories", cfg.trajectories},
                        {"particles", cfg.particles},
                        {"iters", cfg.iters},
                        {"max_order", cfg.max_order},
                        {"seed", cfg.seed},
                        {"threads", cfg.threads},
                        {"out", cfg.out}};
}

namespace detail {

class Summary {
 public:
  Summary(const RunConfig &cfg) : cfg_(cfg) {
    doc_["config"] = config_json(cfg);
    doc_["checks"] = nlohmann::json::object();
  }

  void check(const std::string &name, bool pass, nlohmann::json info = {}) {
    info["pass"] = pass;
    doc_["checks"][name] = info;
    if (!pass && first_failure_.empty()) first_failure_ = name;
  }

  void report(const std::string &name, nlohmann::json info) {
    doc_["checks"][name] = info;
  }

  void artifact(const std::string &path) { doc_["artifacts"].push_back(path); }
  nlohmann::json &doc() { return doc_; }

  // writes the summary, then enforces exit code 2 on any failed check
  void finish() {
    doc_["ok"] = first_failure_.empty();
    std::ofstream out(cfg_.summary_path());
    out << doc_.dump(2) << "\n";
    if (!first_failure_.empty())
      throw NumericalFailure("invariant violated: " + first_failure_);
  }

 private:
  const RunConfig &cfg_;
  nlohmann::json doc_;
  std::string first_failure_;
};

inline UrnSpec spec_of(const RunConfig &cfg) {
  if (cfg.matrix.size() != 4)
    throw CLI::ValidationError("--matrix is required here");
  return build_spec(cfg.matrix[0], cfg.matrix[1], cfg.matrix[2], cfg.matrix[3]);
}

inline Composition comp_of(const RunConfig &cfg) {
  if (cfg.init.size() != 2)
    throw CLI::ValidationError("--init needs exactly 2 entries for two-color urns");
  return Composition{cfg.init[0], cfg.init[1]};
}

inline int run_exact_dist(const RunConfig &cfg) {
  const UrnSpec spec = spec_of(cfg);
  const Composition init = comp_of(cfg);
  Summary sum(cfg);
  if (cfg.float_mode) {
    if (!cfg.profile_out.empty() || cfg.decomp_check > 0)
      throw CLI::ValidationError(
          "--float supports only the distribution CSV output");
    DistEngine<double> engine(spec, init);
    engine.run_to(cfg.steps);
    double mass = 0.0;
    for (double p : engine.probs()) mass += p;
    sum.check("mass_deficit_within_1e12", std::abs(mass - 1.0) <= 1e-12,
              {{"mass", mass}});
    if (!cfg.out.empty()) {
      auto out = open_csv(cfg.out);
      out << "state,prob_rational,prob_decimal\n";
      for (std::size_t i = 0; i < engine.probs().size(); ++i)
        if (engine.probs()[i] > 0)
          out << engine.red_at(i) << ",," << engine.probs()[i] << "\n";
      sum.artifact(cfg.out);
    }
    sum.finish();
    return 0;
  }
  const auto dist = exact_distribution(spec, init, cfg.steps);
  sum.check("total_mass_one", dist.total_mass() == 1,
            {{"mass", to_string(dist.total_mass())}});
  const Rational dp_mean = dist.mean_u2();
  const Rational product = expected_u2_exact(spec, init, cfg.steps);
  sum.check("dp_mean_matches_martingale_product", dp_mean == product,
            {{"dp_mean", to_string(dp_mean)}, {"product", to_string(product)}});
  sum.report("atoms", {{"count", dist.mass.size()}});
  if (!cfg.out.empty()) {
    write_distribution_csv(dist, cfg.out);
    sum.artifact(cfg.out);
  }
  if (!cfg.profile_out.empty()) {
    write_profile_csv(normalized_profile(dist), cfg.profile_out);
    sum.artifact(cfg.profile_out);
  }
  if (cfg.decomp_check > 0) {
    if (!cfg.seed_set)
      throw CLI::ValidationError("--decomp-check requires --seed");
    const auto rep =
        decomposition_check(spec, init, cfg.steps, cfg.decomp_check, cfg.seed);
    sum.check("decomposition_p_value", rep.trivial || rep.p_value > 1e-3,
              {{"statistic", rep.statistic},
               {"dof", rep.dof},
               {"p_value", rep.p_value},
               {"trivial", rep.trivial}});
  }
  sum.finish();
  return 0;
}

inline int run_mc_w(const RunConfig &cfg) {
  const UrnSpec spec = spec_of(cfg);
  const Composition init = comp_of(cfg);
  Summary sum(cfg);
  if (cfg.system == "dt") {
    const auto s = sample_W_dt(spec, init, cfg.horizon, cfg.trajectories,
                               cfg.seed, cfg.threads);
    const double target = expected_W_dt(spec, init);
    const double se = standard_error(s.values);
    sum.check("mean_within_3se_of_closed_form",
              std::abs(mean(s.values) - target) <= 3 * se,
              {{"mean", mean(s.values)}, {"target", target}, {"se", se}});
    if (cfg.sweep) {
      const auto sweep = sweep_W_dt(spec, init, cfg.horizon, cfg.trajectories,
                                    cfg.seed, cfg.threads);
      nlohmann::json rows;
      for (const auto &r : sweep.rows)
        rows.push_back({{"horizon", r.horizon},
                        {"mean", r.mean},
                        {"se", r.se},
                        {"second_moment", r.second_moment}});
      sum.check("sweep_means_agree", sweep.means_agree, {{"rows", rows}});
    }
    if (!cfg.out.empty()) {
      write_sample_csv(s, cfg.out);
      sum.artifact(cfg.out);
    }
  } else {
    const auto s = sample_ct(spec, init, cfg.horizon, cfg.trajectories,
                             cfg.seed, cfg.threads);
    const double target = expected_W_ct(spec, init);
    const double se = standard_error(s.w_ct.values);
    sum.check("mean_within_3se_of_closed_form",
              std::abs(mean(s.w_ct.values) - target) <= 3 * se,
              {{"mean", mean(s.w_ct.values)}, {"target", target}, {"se", se}});
    const double shape = static_cast<double>(init.total()) / spec.S;
    const double ks = ks_distance(
        s.xi.values, [shape](double x) { return gamma_cdf(shape, x); });
    sum.check("xi_ks_against_gamma", ks <= 0.02, {{"ks", ks}});
    if (!cfg.out.empty()) {
      write_sample_csv(s.w_ct, cfg.out);
      sum.artifact(cfg.out);
    }
    if (!cfg.xi_out.empty()) {
      write_sample_csv(s.xi, cfg.xi_out);
      sum.artifact(cfg.xi_out);
    }
  }
  sum.finish();
  return 0;
}

inline int run_connexion_check(const RunConfig &cfg) {
  const UrnSpec spec = spec_of(cfg);
  const Composition init = comp_of(cfg);
  Summary sum(cfg);
  const auto ct = sample_ct(spec, init, cfg.horizon, cfg.trajectories,
                            cfg.seed, cfg.threads);
  const auto conn = sample_connexion(spec, init, cfg.horizon, cfg.trajectories,
                                     cfg.seed + 1, cfg.threads);
  const double w2 = two_sample_w2(ct.w_ct.values, conn.values);
  std::vector<double> pooled = ct.w_ct.values;
  pooled.insert(pooled.end(), conn.values.begin(), conn.values.end());
  const double limit = 0.05 * stddev(pooled);
  sum.check("w2_within_5pct_pooled_std", w2 <= limit,
            {{"w2", w2}, {"limit", limit}});
  const double shape = static_cast<double>(init.total()) / spec.S;
  const double ks = ks_distance(ct.xi.values,
                                [shape](double x) { return gamma_cdf(shape, x); });
  sum.check("xi_ks_against_gamma", ks <= 0.02, {{"ks", ks}});
  const double m1 = mean(ct.w_ct.values), m2 = mean(conn.values);
  const double cse = std::hypot(standard_error(ct.w_ct.values),
                                standard_error(conn.values));
  sum.check("means_within_3_combined_se", std::abs(m1 - m2) <= 3 * cse,
            {{"ct_mean", m1}, {"connexion_mean", m2}, {"combined_se", cse}});
  if (!cfg.out.empty()) {
    write_sample_csv(conn, cfg.out);
    sum.artifact(cfg.out);
  }
  sum.finish();
  return 0;
}

inline int run_fixpoint(const RunConfig &cfg) {
  const UrnSpec spec = spec_of(cfg);
  Summary sum(cfg);
  const System sys = cfg.system == "dt" ? System::DT : System::CT;
  FixpointTrace trace;
  if (cfg.init_shape == "gaussian") {
    trace.final_pair = make_gaussian_pair(spec, sys,
                                          static_cast<std::size_t>(cfg.particles),
                                          1.0, cfg.seed ^ 0x5151);
    trace.lipschitz_bound =
        std::sqrt(static_cast<double>(spec.S + 1) / (2.0 * spec.m + 1.0));
    trace.noise_floor = 3.0 / std::sqrt(static_cast<double>(cfg.particles));
    ParticlePair &p = trace.final_pair;
    std::vector<double> px, py;
    for (int it = 1; it <= cfg.iters; ++it) {
      px = p.x;
      py = p.y;
      const auto rep = apply_K(p, derive_seed(cfg.seed, it), cfg.threads);
      TraceRow row;
      row.iteration = it;
      row.w2_x = two_sample_w2(px, p.x);
      row.w2_y = two_sample_w2(py, p.y);
      row.shift_x = rep.shift_x;
      row.shift_y = rep.shift_y;
      if (!trace.rows.empty()) {
        row.ratio_x = trace.rows.back().w2_x > 0 ? row.w2_x / trace.rows.back().w2_x : 0;
        row.ratio_y = trace.rows.back().w2_y > 0 ? row.w2_y / trace.rows.back().w2_y : 0;
      }
      trace.rows.push_back(row);
    }
  } else {
    trace = iterate_fixpoint(spec, sys, static_cast<std::size_t>(cfg.particles),
                             cfg.iters, cfg.seed, cfg.threads);
  }
  const ParticlePair &p = trace.final_pair;
  sum.check("mean_fiber_exact",
            std::abs(mean(p.x) - p.target_x) <= 1e-10 &&
                std::abs(mean(p.y) - p.target_y) <= 1e-10,
            {{"target_x", p.target_x}, {"target_y", p.target_y}});
  // ratio behaviour is reported, not enforced: at the resampling plateau the
  // successive-distance ratios are noise (see README)
  double max_ratio = 0.0;
  int counted = 0;
  for (std::size_t i = 1; i < trace.rows.size(); ++i) {
    const double dprev = std::max(trace.rows[i - 1].w2_x, trace.rows[i - 1].w2_y);
    const double dcur = std::max(trace.rows[i].w2_x, trace.rows[i].w2_y);
    if (dprev > trace.noise_floor && dcur > trace.noise_floor) {
      max_ratio = std::max(max_ratio, dcur / dprev);
      ++counted;
    }
  }
  sum.report("contraction", {{"lipschitz_bound", trace.lipschitz_bound},
                             {"bound_plus_allowance", trace.lipschitz_bound + 0.05},
                             {"noise_floor", trace.noise_floor},
                             {"max_ratio_above_floor", max_ratio},
                             {"ratios_counted", counted}});
  if (!cfg.out.empty()) {
    write_trace_csv(trace, cfg.out);
    sum.artifact(cfg.out);
    SampleSet xs;
    xs.values = p.x;
    xs.spec = spec;
    xs.init = {1, 0};
    xs.estimator = std::string("fixpoint_x_") + to_string(sys);
    xs.horizon = cfg.iters;
    xs.seed = cfg.seed;
    xs.finalize();
    write_sample_csv(xs, cfg.out + ".x.csv");
    sum.artifact(cfg.out + ".x.csv");
    SampleSet ys = xs;
    ys.values = p.y;
    ys.init = {0, 1};
    ys.estimator = std::string("fixpoint_y_") + to_string(sys);
    ys.finalize();
    write_sample_csv(ys, cfg.out + ".y.csv");
    sum.artifact(cfg.out + ".y.csv");
  }
  sum.finish();
  return 0;
}

inline int run_moments(const RunConfig &cfg) {
  const UrnSpec spec = spec_of(cfg);
  Summary sum(cfg);
  const auto ct = ct_moments_exact(spec, cfg.max_order);
  if (cfg.max_order >= 1) {
    sum.check("first_moments_exact",
              ct.x_exact[1] == make_rational(spec.b, spec.S) &&
                  ct.y_exact[1] == make_rational(-spec.c, spec.S),
              {{"x1", to_string(ct.x_exact[1])},
               {"y1", to_string(ct.y_exact[1])}});
  }
  bool even_positive = true;
  for (int p = 2; p <= cfg.max_order; p += 2)
    even_positive = even_positive && ct.x_exact[p] > 0 && ct.y_exact[p] > 0;
  sum.check("even_moments_positive", even_positive);

  MomentTable table = ct;
  if (cfg.system == "dt") {
    const Composition init{1, 0};
    table = dt_moments_via_connexion(ct, init);
    const auto direct = dt_moments_direct(spec, cfg.max_order);
    bool dual_ok = true;
    double worst = 0;
    for (int p = 1; p <= cfg.max_order; ++p) {
      const double rx = std::abs(direct.x[p] - table.x[p]) / std::abs(table.x[p]);
      const double ry = std::abs(direct.y[p] - table.y[p]) / std::abs(table.y[p]);
      worst = std::max({worst, rx, ry});
      dual_ok = dual_ok && rx <= 1e-6 && ry <= 1e-6;
    }
    sum.check("dual_route_within_1e6", dual_ok, {{"worst_rel", worst}});
  } else if (cfg.system == "composite") {
    table = composite_moments(ct, comp_of(cfg), System::CT);
  }
  if (!cfg.out.empty()) {
    write_moment_table_csv(table, cfg.out);
    sum.artifact(cfg.out);
  }
  nlohmann::json tj;
  for (int p = 0; p <= table.max_order; ++p) {
    nlohmann::json row{{"p", p}, {"x", table.x[p]}};
    if (table.exact) row["x_rational"] = to_string(table.x_exact[p]);
    if (!table.composite) {
      row["y"] = table.y[p];
      if (table.exact) row["y_rational"] = to_string(table.y_exact[p]);
    }
    tj.push_back(row);
  }
  sum.doc()["table"] = tj;
  sum.finish();
  return 0;
}

inline int run_phi_check(const RunConfig &cfg) {
  Summary sum(cfg);
  bool all_hold = true;
  nlohmann::json rows;
  for (int p = 2; p <= cfg.pmax; ++p) {
    const double value = phi_capital(p, cfg.diag_S);
    const double bound =
        std::pow(1.0 + 8.0 * std::log(p + 2.0), static_cast<double>(cfg.diag_S + 1));
    const bool ok = value <= bound;
    all_hold = all_hold && ok;
    rows.push_back({{"p", p}, {"phi", value}, {"bound", bound}, {"holds", ok}});
  }
  sum.doc()["phi"] = rows;
  sum.check("phi_bound_holds", all_hold, {{"S", cfg.diag_S}, {"pmax", cfg.pmax}});
  sum.finish();
  return 0;
}

inline int run_dirichlet_check(const RunConfig &cfg) {
  Summary sum(cfg);
  const auto &init = cfg.init;
  const auto d = init.size();
  if (d < 2) throw CLI::ValidationError("--init needs d >= 2 entries");
  const auto s = simulate_diagonal_urn(init, cfg.diag_S, cfg.steps,
                                       cfg.trajectories, cfg.seed, cfg.threads);
  std::int64_t alpha = 0;
  for (auto v : init) alpha += v;
  const double expected_total =
      1.0 + static_cast<double>(alpha) /
                (static_cast<double>(cfg.steps) * static_cast<double>(cfg.diag_S));
  bool conserved = true;
  for (std::size_t i = 0; i < s.count(); ++i) {
    double total = 0;
    for (std::size_t k = 0; k < d; ++k) total += s.at(i, k);
    conserved = conserved && std::abs(total - expected_total) <= 1e-9;
  }
  sum.check("coordinate_sum_identity", conserved,
            {{"expected_total", expected_total}});

  std::vector<Rational> nu;
  for (auto v : init) nu.push_back(make_rational(v, cfg.diag_S));
  const auto params = make_dirichlet(nu);
  bool means_ok = true, second_ok = true;
  nlohmann::json coords;
  for (std::size_t k = 0; k < d; ++k) {
    const auto col = s.column(k);
    std::vector<std::int64_t> pw(d, 0);
    pw[k] = 1;
    const double m_target = to_double(joint_moment(params, pw));
    const double se = standard_error(col);
    means_ok = means_ok && std::abs(mean(col) - m_target) <= 3 * se;
    pw[k] = 2;
    const double m2_target = to_double(joint_moment(params, pw));
    std::vector<double> sq(col.size());
    for (std::size_t i = 0; i < col.size(); ++i) sq[i] = col[i] * col[i];
    const double se2 = standard_error(sq);
    second_ok = second_ok && std::abs(mean(sq) - m2_target) <= 3 * se2;
    coords.push_back({{"mean", mean(col)},
                      {"mean_target", m_target},
                      {"second", mean(sq)},
                      {"second_target", m2_target}});
  }
  sum.doc()["coordinates"] = coords;
  sum.check("coordinate_means_within_3se", means_ok);
  sum.check("second_moments_within_3se", second_ok);
  if (!cfg.out.empty()) {
    write_simplex_csv(s, cfg.out);
    sum.artifact(cfg.out);
  }
  sum.finish();
  return 0;
}

inline int run_gamma_p(const RunConfig &cfg) {
  Summary sum(cfg);
  if (cfg.powers.size() != cfg.init.size())
    throw CLI::ValidationError("--powers must match --init in length");
  const Rational value =
      gamma_p_expectation(cfg.init, cfg.diag_S, cfg.steps, cfg.powers);
  // one-step eigenvalue recursion as the run-time cross check
  std::int64_t alpha = 0, abs_p = 0;
  for (auto v : cfg.init) alpha += v;
  for (auto v : cfg.powers) abs_p += v;
  const Rational next =
      gamma_p_expectation(cfg.init, cfg.diag_S, cfg.steps + 1, cfg.powers);
  const Rational factor =
      1 + make_rational(abs_p * cfg.diag_S, alpha + cfg.steps * cfg.diag_S);
  sum.check("one_step_recursion_exact", next == value * factor);
  sum.doc()["value"] = to_string(value);
  sum.doc()["value_decimal"] = to_double(value);
  std::cout << to_string(value) << "\n";
  sum.finish();
  return 0;
}

inline int run_density(const RunConfig &cfg) {
  Summary sum(cfg);
  const SampleSet s = read_sample_csv(cfg.in_path);
  const double h = cfg.bandwidth > 0 ? cfg.bandwidth : silverman_bandwidth(s.values);
  const auto grid = kde_default_grid(s.values, static_cast<std::size_t>(cfg.grid_points));
  const auto f = kde_density(s.values, h, grid);
  const double integral = trapezoid_integral(grid, f);
  sum.check("integral_within_1e3", std::abs(integral - 1.0) <= 1e-3,
            {{"integral", integral}, {"bandwidth", h}});
  double peak = 0;
  double peak_x = 0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] > peak) {
      peak = f[i];
      peak_x = grid[i];
    }
  sum.report("peak", {{"height", peak}, {"location", peak_x}});
  write_kde_csv(grid, f, cfg.out);
  sum.artifact(cfg.out);
  sum.finish();
  return 0;
}

inline int run_cf_decay(const RunConfig &cfg) {
  Summary sum(cfg);
  const SampleSet s = read_sample_csv(cfg.in_path);
  if (cfg.t_count < 2 || cfg.t_min <= 0 || cfg.t_max <= cfg.t_min)
    throw CLI::ValidationError("cf-decay needs 0 < t-min < t-max and t-count >= 2");
  std::vector<double> grid(static_cast<std::size_t>(cfg.t_count));
  for (int i = 0; i < cfg.t_count; ++i)
    grid[static_cast<std::size_t>(i)] =
        cfg.t_min + (cfg.t_max - cfg.t_min) * i / (cfg.t_count - 1);
  const auto rep = empirical_cf(s.values, grid);
  bool in_range = true;
  for (double m : rep.modulus) in_range = in_range && m <= 1.0 + 1e-12;
  sum.check("moduli_at_most_one", in_range);
  sum.report("endpoints", {{"first_t", rep.t.front()},
                           {"first_modulus", rep.modulus.front()},
                           {"last_t", rep.t.back()},
                           {"last_modulus", rep.modulus.back()},
                           {"noise_floor", rep.noise_floor}});
  write_cf_csv(rep, cfg.out);
  sum.artifact(cfg.out);
  sum.finish();
  return 0;
}

}  // namespace detail

inline int run_command(const RunConfig &cfg) {
  if (cfg.subcommand == "exact-dist") return detail::run_exact_dist(cfg);
  if (cfg.subcommand == "mc-w") return detail::run_mc_w(cfg);
  if (cfg.subcommand == "connexion-check") return detail::run_connexion_check(cfg);
  if (cfg.subcommand == "fixpoint") return detail::run_fixpoint(cfg);
  if (cfg.subcommand == "moments") return detail::run_moments(cfg);
  if (cfg.subcommand == "phi-check") return detail::run_phi_check(cfg);
  if (cfg.subcommand == "dirichlet-check") return detail::run_dirichlet_check(cfg);
  if (cfg.subcommand == "gamma-p") return detail::run_gamma_p(cfg);
  if (cfg.subcommand == "density") return detail::run_density(cfg);
  if (cfg.subcommand == "cf-decay") return detail::run_cf_decay(cfg);
  throw CLI::ValidationError("unknown subcommand " + cfg.subcommand);
}

// 0 success, 1 configuration error, 2 numerical failure.
inline int dispatch(int argc, const char *const *argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    const RunConfig cfg = parse_config(args);
    return run_command(cfg);
  } catch (const HelpRequested &h) {
    std::cout << h.text;
    return 0;
  } catch (const CLI::Error &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalFailure &e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace urnlab::cli
