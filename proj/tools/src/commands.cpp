// Copyright 2026 The spinorcqed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "spinor/tools/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "spinor/analytic_oracle.hpp"
#include "spinor/error.hpp"
#include "spinor/qfunction.hpp"
#include "spinor/tools/output.hpp"
#include "spinor/tools/simulation.hpp"
#include "spinor/tools/validation.hpp"

namespace spinor::cli {

using nlohmann::json;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool wants(const RunConfig& c, const char* format) {
  return std::find(c.formats.begin(), c.formats.end(), format) != c.formats.end();
}

std::string out_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void say(const Context& ctx, const std::string& s) {
  if (ctx.out) *ctx.out << s << "\n" << std::flush;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

template <class F>
void parallel_points(std::size_t n, unsigned threads, F&& f) {
  unsigned total = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(total, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i, threads);
    return;
  }
  const unsigned inner = std::max(1u, total / workers);
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            f(i, inner);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

json peak_json(const SimulationOutput& s) {
  const auto p = s.peak();
  if (!p) return nullptr;
  const auto est = s.xi2_at(*p);
  return {{"t", s.times[*p]},
          {"lambda_t", s.lambda_t(*p)},
          {"xi2", est.value},
          {"xi2_db", to_db(est.value)},
          {"xi2_se", est.std_error},
          {"theta_deg", s.squeezing[*p].theta_opt_deg},
          {"at_window_edge", *p == 0 || *p + 1 == s.times.size()}};
}

json cutoff_json(const std::optional<CutoffConvergence>& c) {
  if (!c) return nullptr;
  return {{"cutoff", c->cutoff}, {"reference_cutoff", c->reference_cutoff}, {"max_shift", c->max_shift},
          {"converged", c->converged}};
}

std::vector<std::string> moment_columns(const RunConfig& cfg) {
  std::vector<std::string> cols = {"n_minus", "n_zero", "n_plus"};
  const auto& all = Moments::names();
  std::vector<std::string> chosen = cfg.observables.empty() ? std::vector<std::string>(all.begin(), all.end())
                                                             : cfg.observables;
  for (const auto& c : chosen)
    if (std::find(cols.begin(), cols.end(), c) == cols.end()) cols.push_back(c);
  return cols;
}

std::size_t moment_index(const std::string& name) {
  const auto& all = Moments::names();
  return static_cast<std::size_t>(std::find(all.begin(), all.end(), name) - all.begin());
}

Table simulation_table(const RunConfig& cfg, const SimulationOutput& s) {
  Table t;
  const bool traj = !s.xi2_jackknife.empty();
  t.columns = {"t", "lambda_t", "xi2_min", "xi2_min_db", "theta_opt_deg", "defined"};
  if (traj) t.columns.push_back("xi2_min_se");
  const auto cols = moment_columns(cfg);
  for (const auto& c : cols) {
    t.columns.push_back(c);
    if (traj) t.columns.push_back(c + "_se");
  }
  t.columns.push_back("mean_qzz_minus_qyy");
  if (traj) {
    t.columns.push_back("jumps_mean");
    t.columns.push_back("jumps_se");
  }
  if (!s.no_jump_probability.empty()) t.columns.push_back("no_jump_probability");
  for (std::size_t k = 0; k < s.times.size(); ++k) {
    const auto& sq = s.squeezing[k];
    std::vector<double> row = {s.times[k], s.lambda_t(k), sq.xi2_min, to_db(sq.xi2_min), sq.theta_opt_deg,
                               sq.defined ? 1.0 : 0.0};
    if (traj) row.push_back(s.xi2_jackknife[k].std_error);
    const auto packed = s.moments[k].pack();
    for (const auto& c : cols) {
      const std::size_t i = moment_index(c);
      row.push_back(packed[i]);
      if (traj) row.push_back(s.moment_se[k][i]);
    }
    row.push_back(sq.mean_qzz_minus_qyy);
    if (traj) {
      row.push_back(s.jumps[k].value);
      row.push_back(s.jumps[k].std_error);
    }
    if (!s.no_jump_probability.empty()) row.push_back(s.no_jump_probability[k]);
    t.add_row(std::move(row));
  }
  t.notes.push_back(fmt("method %s, dimension %ld, |Lambda| = %s rad/s", to_string(s.method), static_cast<long>(s.dim),
                        format_number(s.lambda_abs).c_str()));
  for (const auto& w : s.warnings) t.notes.push_back("warning: " + w);
  return t;
}

json series_json(const SimulationOutput& s) {
  json j;
  std::vector<double> lt, x, th, nm, n0, np;
  for (std::size_t k = 0; k < s.times.size(); ++k) {
    lt.push_back(s.lambda_t(k));
    x.push_back(s.squeezing[k].xi2_min);
    th.push_back(s.squeezing[k].theta_opt_deg);
    nm.push_back(s.moments[k].n_minus);
    n0.push_back(s.moments[k].n_zero);
    np.push_back(s.moments[k].n_plus);
  }
  j["t"] = s.times;
  j["lambda_t"] = lt;
  j["xi2_min"] = x;
  j["theta_opt_deg"] = th;
  j["n_minus"] = nm;
  j["n_zero"] = n0;
  j["n_plus"] = np;
  if (!s.xi2_jackknife.empty()) {
    std::vector<double> se;
    for (const auto& e : s.xi2_jackknife) se.push_back(e.std_error);
    j["xi2_min_se"] = se;
  }
  return j;
}

Series2D db_series(const SimulationOutput& s, const std::string& label) {
  Series2D d{label, {}, {}};
  for (std::size_t k = 0; k < s.times.size(); ++k) {
    d.x.push_back(s.lambda_t(k));
    d.y.push_back(to_db(s.squeezing[k].xi2_min));
  }
  return d;
}

void image_not_applicable(const Context& ctx, const char* command) {
  say(ctx, fmt("note: %s has no image output", command));
}

// Parameter report lines: name, value, unit.
struct ReportRow {
  std::string name;
  double value;
  std::string unit;
};

std::vector<ReportRow> khz_rows(const std::vector<std::pair<std::string, double>>& in) {
  std::vector<ReportRow> r;
  for (const auto& [n, v] : in) r.push_back({n, v / (kTwoPi * 1e3), "kHz/2pi"});
  return r;
}

}  // namespace

void apply_overrides(RunConfig& cfg, std::optional<std::uint64_t> seed, std::optional<std::string> out_dir,
                     const std::vector<std::string>& formats) {
  if (seed) cfg.seed = *seed;
  if (out_dir) cfg.output_dir = *out_dir;
  if (!formats.empty()) {
    for (const auto& f : formats)
      if (f != "table" && f != "record" && f != "image")
        throw ConfigError("--format", "expected table, record or image, got '" + f + "'");
    cfg.formats = formats;
  }
}

unsigned resolve_thread_count(std::optional<unsigned> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("SPINOR_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 0 || v > 4096)
      throw ConfigError("SPINOR_THREADS", std::string("expected a thread count, got '") + env + "'");
    return static_cast<unsigned>(v);
  }
  return 0;
}

int cmd_params(const RunConfig& cfg, const Context& ctx) {
  if (!cfg.microscopic)
    throw ConfigError("/microscopic", "params maps microscopic parameters; this config has none to map");
  const ResolvedModel rm = resolve_model(cfg);
  const auto& d = *rm.dicke;
  const auto& dp = rm.dispersive;
  const auto& f = *rm.feasibility;

  std::vector<ReportRow> rows = khz_rows({{"omega (cavity detuning)", d.cavity_detuning},
                                          {"omega_0", d.spin_splitting},
                                          {"lambda_minus", d.lambda_minus},
                                          {"lambda_plus", d.lambda_plus},
                                          {"omega_q", d.omega_q},
                                          {"delta_q", d.delta_q},
                                          {"xi_1", d.xi_1},
                                          {"xi_2", d.xi_2},
                                          {"h", d.h},
                                          {"omega_0_prime", dp.omega0_prime},
                                          {"Lambda", dp.Lambda},
                                          {"Gamma", dp.Gamma},
                                          {"Gamma_sp_plus", f.gamma_sp_plus},
                                          {"Gamma_sp_minus", f.gamma_sp_minus},
                                          {"Gamma_sp_total", f.gamma_sp_total}});
  rows.push_back({"Gamma/|Lambda|", dp.gamma_over_lambda, "dimensionless"});
  rows.push_back({"cooperativity C", f.cooperativity, "dimensionless"});
  rows.push_back({"Gamma_sp/(|Lambda|/2)", f.gamma_sp_ratio, "dimensionless"});
  rows.push_back({"Gamma_sp ratio estimate 48|omega|/(N C kappa)", f.gamma_sp_ratio_estimate, "dimensionless"});
  rows.push_back({"|Delta| >= 10 |zeta|", f.detuning_exceeds_splitting ? 1.0 : 0.0, "flag"});
  rows.push_back({"dispersive regime", f.dispersive_regime ? 1.0 : 0.0, "flag"});

  const json prov = provenance("params", resolved_json(cfg));
  std::ostringstream table;
  table << "# spinorsim " << version() << "\n# provenance: " << prov.dump() << "\n";
  for (const auto& w : rm.warnings) table << "# warning: " << w << "\n";
  table << "quantity\tvalue\tunit\n";
  for (const auto& r : rows) table << r.name << "\t" << format_number(r.value + 0.0) << "\t" << r.unit << "\n";
  if (ctx.out) {
    *ctx.out << fmt("%-46s %16s  %s\n", "quantity", "value", "unit");
    for (const auto& r : rows) *ctx.out << fmt("%-46s %16.6g  %s\n", r.name.c_str(), r.value + 0.0, r.unit.c_str());
    for (const auto& w : rm.warnings) *ctx.out << "warning: " << w << "\n";
  }

  if (wants(cfg, "table")) write_file(out_path(cfg.output_dir, "params.tsv"), table.str());
  if (wants(cfg, "record")) {
    json rec;
    rec["provenance"] = prov;
    rec["effective_dicke_rad_s"] = {{"cavity_detuning", d.cavity_detuning}, {"spin_splitting", d.spin_splitting},
                                    {"lambda_minus", d.lambda_minus},       {"lambda_plus", d.lambda_plus},
                                    {"omega_q", d.omega_q},                 {"delta_q", d.delta_q},
                                    {"xi_1", d.xi_1},                       {"xi_2", d.xi_2},
                                    {"h", d.h},                             {"atom_count", d.atom_count}};
    rec["dispersive_rad_s"] = {{"omega0_prime", dp.omega0_prime}, {"Lambda", dp.Lambda}, {"Gamma", dp.Gamma},
                               {"gamma_over_lambda", dp.gamma_over_lambda}};
    rec["feasibility"] = {{"cooperativity", f.cooperativity},
                          {"gamma_sp_plus_rad_s", f.gamma_sp_plus},
                          {"gamma_sp_minus_rad_s", f.gamma_sp_minus},
                          {"gamma_sp_total_rad_s", f.gamma_sp_total},
                          {"gamma_sp_ratio", f.gamma_sp_ratio},
                          {"gamma_sp_ratio_estimate", f.gamma_sp_ratio_estimate},
                          {"gamma_over_lambda", f.gamma_over_lambda},
                          {"detuning_exceeds_splitting", f.detuning_exceeds_splitting},
                          {"dispersive_regime", f.dispersive_regime}};
    rec["warnings"] = rm.warnings;
    write_file(out_path(cfg.output_dir, "params.json"), rec.dump(2) + "\n");
  }
  if (wants(cfg, "image")) image_not_applicable(ctx, "params");
  return kSuccess;
}

int cmd_simulate(const RunConfig& cfg, const Context& ctx) {
  say(ctx, fmt("simulate: %s, N=%d", to_string(cfg.model), cfg.atoms));
  const SimulationOutput s = simulate(cfg, ctx.threads);
  const json prov = provenance("simulate", resolved_json(cfg));
  if (wants(cfg, "table")) write_file(out_path(cfg.output_dir, "simulate.tsv"), simulation_table(cfg, s).render(prov));
  if (wants(cfg, "record")) {
    json rec;
    rec["provenance"] = prov;
    rec["method"] = to_string(s.method);
    rec["dimension"] = s.dim;
    rec["lambda_abs_rad_s"] = s.lambda_abs;
    rec["peak"] = peak_json(s);
    rec["cutoff"] = cutoff_json(s.cutoff);
    rec["warnings"] = s.warnings;
    rec["series"] = series_json(s);
    write_file(out_path(cfg.output_dir, "simulate.json"), rec.dump(2) + "\n");
  }
  if (wants(cfg, "image")) {
    write_file(out_path(cfg.output_dir, "simulate.svg"),
               svg_line_plot({db_series(s, "")}, "Lambda t", "xi2_min (dB)", fmt("%s, N=%d", to_string(cfg.model), cfg.atoms)));
  }
  for (const auto& w : s.warnings) say(ctx, "warning: " + w);
  if (const auto p = s.peak()) {
    const auto e = s.xi2_at(*p);
    const std::string se = e.std_error > 0.0 ? fmt(" +- %.2g", e.std_error) : std::string();
    say(ctx, fmt("method %s; peak xi2 = %.6g (%.3f dB)%s at Lambda t = %.4g, theta = %.3f deg", to_string(s.method),
                 e.value, to_db(e.value), se.c_str(), s.lambda_t(*p), s.squeezing[*p].theta_opt_deg));
  } else {
    say(ctx, fmt("method %s; xi2 undefined at every sample", to_string(s.method)));
  }
  say(ctx, "output: " + cfg.output_dir);
  return kSuccess;
}

int cmd_sweep(const RunConfig& cfg, const Context& ctx) {
  const json prov = provenance("sweep", resolved_json(cfg));
  switch (cfg.sweep.axis) {
    case SweepAxis::none:
      throw ConfigError("/sweep", "sweep needs a sweep section");

    case SweepAxis::atoms:
    case SweepAxis::gamma_over_lambda: {
      const bool by_atoms = cfg.sweep.axis == SweepAxis::atoms;
      if (!by_atoms && (cfg.model != ModelTier::spin_mixing || !cfg.effective))
        throw ConfigError("/sweep/axis", "Gamma_over_Lambda sweeps need the spin_mixing model with effective parameters");
      const std::size_t n = by_atoms ? cfg.sweep.atoms.size() : cfg.sweep.gamma_over_lambda.size();
      std::vector<RunConfig> points(n, cfg);
      for (std::size_t i = 0; i < n; ++i) {
        if (by_atoms) {
          points[i].atoms = cfg.sweep.atoms[i];
          points[i].initial = {0, cfg.sweep.atoms[i], 0};
          if (points[i].microscopic) points[i].microscopic->params.atom_count = cfg.sweep.atoms[i];
        } else {
          points[i].effective->Gamma.reset();
          points[i].effective->gamma_over_lambda = cfg.sweep.gamma_over_lambda[i];
        }
      }
      say(ctx, fmt("sweep over %zu points", n));
      std::vector<std::optional<SimulationOutput>> results(n);
      parallel_points(n, ctx.threads, [&](std::size_t i, unsigned inner) { results[i] = simulate(points[i], inner); });

      Table t;
      t.columns = {by_atoms ? "atoms" : "gamma_over_lambda", "peak_xi2", "peak_xi2_se", "peak_xi2_db", "peak_lambda_t",
                   "theta_opt_deg", "at_window_edge"};
      json pts = json::array();
      std::vector<std::pair<int, double>> fit_points;
      std::vector<Series2D> curves;
      for (std::size_t i = 0; i < n; ++i) {
        const auto& s = *results[i];
        const double key = by_atoms ? cfg.sweep.atoms[i] : cfg.sweep.gamma_over_lambda[i];
        const auto p = s.peak();
        if (p) {
          const auto e = s.xi2_at(*p);
          const bool edge = *p == 0 || *p + 1 == s.times.size();
          t.add_row({key, e.value, e.std_error, to_db(e.value), s.lambda_t(*p), s.squeezing[*p].theta_opt_deg,
                     edge ? 1.0 : 0.0});
          if (by_atoms) fit_points.emplace_back(cfg.sweep.atoms[i], e.value);
          if (edge) say(ctx, fmt("warning: point %zu peaks at the edge of the time window", i));
        } else {
          t.add_row({key, NAN, NAN, NAN, NAN, NAN, 0.0});
        }
        json pj = peak_json(s);
        pts.push_back({{by_atoms ? "atoms" : "gamma_over_lambda", key}, {"method", to_string(s.method)}, {"peak", pj}});
        curves.push_back(db_series(s, by_atoms ? fmt("N=%d", cfg.sweep.atoms[i]) : fmt("Gamma/Lambda=%g", key)));
      }
      json rec;
      rec["provenance"] = prov;
      rec["points"] = pts;
      if (by_atoms) {
        try {
          const auto fit = scaling_fit(fit_points);
          rec["scaling_fit"] = {{"exponent", fit.exponent}, {"prefactor", fit.prefactor}, {"exponent_se", fit.exponent_se},
                                {"ci_low", fit.ci_low},     {"ci_high", fit.ci_high},     {"confidence", fit.confidence},
                                {"r_squared", fit.r_squared}, {"points", fit.points}};
          t.notes.push_back(fmt("scaling fit: exponent %.6g, 95%% CI [%.6g, %.6g], R^2 %.6g", fit.exponent, fit.ci_low,
                                fit.ci_high, fit.r_squared));
          say(ctx, t.notes.back());
        } catch (const InvalidArgument& e) {
          rec["scaling_fit"] = nullptr;
          say(ctx, std::string("no scaling fit: ") + e.what());
        }
      }
      if (wants(cfg, "table")) write_file(out_path(cfg.output_dir, "sweep.tsv"), t.render(prov));
      if (wants(cfg, "record")) write_file(out_path(cfg.output_dir, "sweep.json"), rec.dump(2) + "\n");
      if (wants(cfg, "image")) {
        write_file(out_path(cfg.output_dir, "sweep.svg"), svg_line_plot(curves, "Lambda t", "xi2_min (dB)", "sweep"));
        if (by_atoms && fit_points.size() > 1) {
          Series2D pk{"peak", {}, {}};
          for (const auto& [nn, v] : fit_points) {
            pk.x.push_back(std::log10(static_cast<double>(nn)));
            pk.y.push_back(std::log10(v));
          }
          write_file(out_path(cfg.output_dir, "sweep_scaling.svg"),
                     svg_line_plot({pk}, "log10 N", "log10 peak xi2", "peak squeezing vs atom number"));
        }
      }
      for (std::size_t i = 0; i < n; ++i) {
        const auto& row = t.rows[i];
        say(ctx, fmt("%s=%g: peak xi2 %.6g (%.3f dB) at Lambda t %.4g", by_atoms ? "N" : "Gamma/Lambda", row[0], row[1],
                     row[3], row[4]));
      }
      return kSuccess;
    }

    case SweepAxis::theta: {
      const SimulationOutput s = simulate(cfg, ctx.threads);
      const ResolvedModel rm = resolve_model(cfg);
      const double sign = rm.dispersive.Lambda < 0.0 ? -1.0 : 1.0;
      const double g_over_l = s.lambda_abs > 0.0 ? rm.dispersive.Gamma / s.lambda_abs : 0.0;
      const auto& th = cfg.sweep.theta_deg;
      const auto nt = static_cast<Eigen::Index>(s.times.size()), nth = static_cast<Eigen::Index>(th.size());
      Eigen::MatrixXd eng(nth, nt), orc(nth, nt), diff(nth, nt);
      Table t;
      t.columns = {"lambda_t", "theta_deg", "xi2_engine", "xi2_engine_db", "xi2_oracle", "xi2_oracle_db", "diff_db"};
      double worst_le2 = 0.0;
      for (Eigen::Index k = 0; k < nt; ++k) {
        const double lt = s.lambda_t(static_cast<std::size_t>(k));
        for (Eigen::Index j = 0; j < nth; ++j) {
          const double e = xi2(s.moments[static_cast<std::size_t>(k)], th[static_cast<std::size_t>(j)] * kDeg, cfg.subspace);
          const double o = xi2_analytic({sign, g_over_l, lt, th[static_cast<std::size_t>(j)] * kDeg});
          eng(j, k) = to_db(e);
          orc(j, k) = to_db(o);
          diff(j, k) = eng(j, k) - orc(j, k);
          if (lt <= 2.0 + 1e-9 && std::isfinite(diff(j, k))) worst_le2 = std::max(worst_le2, std::abs(diff(j, k)));
          t.add_row({lt, th[static_cast<std::size_t>(j)], e, eng(j, k), o, orc(j, k), diff(j, k)});
        }
      }
      t.notes.push_back(fmt("engine method %s; oracle with Gamma/|Lambda| = %s", to_string(s.method),
                            format_number(g_over_l).c_str()));
      t.notes.push_back(fmt("max |diff_db| for Lambda t <= 2: %s", format_number(worst_le2).c_str()));
      say(ctx, t.notes.back());
      json rec;
      rec["provenance"] = prov;
      rec["method"] = to_string(s.method);
      rec["gamma_over_lambda"] = g_over_l;
      rec["max_abs_diff_db_lambda_t_le_2"] = worst_le2;
      rec["peak"] = peak_json(s);

      std::vector<double> lts;
      for (std::size_t k = 0; k < s.times.size(); ++k) lts.push_back(s.lambda_t(k));
      Table presets;
      if (cfg.sweep.oracle_presets) {
        presets.columns = {"gamma_over_lambda", "lambda_t", "theta_deg", "xi2", "xi2_db"};
        json pj = json::array();
        for (double g : kDampingPresets) {
          const auto h = oracle_heatmap(g, lts, th);
          for (Eigen::Index k = 0; k < h.xi2.rows(); ++k)
            for (Eigen::Index j = 0; j < h.xi2.cols(); ++j)
              presets.add_row({g, lts[static_cast<std::size_t>(k)], th[static_cast<std::size_t>(j)], h.xi2(k, j),
                               to_db(h.xi2(k, j))});
          pj.push_back(g);
          if (wants(cfg, "image")) {
            const Eigen::MatrixXd db = h.xi2.transpose().unaryExpr([](double v) { return to_db(v); });
            write_file(out_path(cfg.output_dir, fmt("oracle_gamma%g.svg", g)),
                       svg_heatmap(lts, th, db, db.minCoeff(), db.maxCoeff(), "Lambda t", "theta (deg)",
                                   fmt("oracle xi2 (dB), Gamma/Lambda = %g", g)));
          }
        }
        rec["oracle_presets"] = pj;
      }
      if (wants(cfg, "table")) {
        write_file(out_path(cfg.output_dir, "heatmap.tsv"), t.render(prov));
        if (cfg.sweep.oracle_presets) write_file(out_path(cfg.output_dir, "oracle_presets.tsv"), presets.render(prov));
      }
      if (wants(cfg, "record")) write_file(out_path(cfg.output_dir, "heatmap.json"), rec.dump(2) + "\n");
      if (wants(cfg, "image")) {
        const double lo = std::min(eng.minCoeff(), orc.minCoeff()), hi = std::max(eng.maxCoeff(), orc.maxCoeff());
        write_file(out_path(cfg.output_dir, "heatmap_engine.svg"),
                   svg_heatmap(lts, th, eng, lo, hi, "Lambda t", "theta (deg)", fmt("engine xi2 (dB), N=%d", cfg.atoms)));
        write_file(out_path(cfg.output_dir, "heatmap_oracle.svg"),
                   svg_heatmap(lts, th, orc, lo, hi, "Lambda t", "theta (deg)", "oracle xi2 (dB)"));
        const double m = std::max(1e-12, diff.cwiseAbs().maxCoeff());
        write_file(out_path(cfg.output_dir, "heatmap_diff.svg"),
                   svg_heatmap(lts, th, diff, -m, m, "Lambda t", "theta (deg)", "engine - oracle (dB)"));
      }
      return kSuccess;
    }
  }
  return kSuccess;
}

int cmd_qfunction(const RunConfig& cfg, const Context& ctx) {
  if (!cfg.qfunction) throw ConfigError("/qfunction", "qfunction needs a qfunction section");
  if (cfg.model == ModelTier::full_dicke)
    throw ConfigError("/model", "the Q-function is defined on the atomic space; use spin_mixing or dispersive");
  const auto& q = *cfg.qfunction;
  const ResolvedModel rm = resolve_model(cfg);
  const double lam = std::abs(rm.dispersive.Lambda);
  if (q.times.lambda_units && !(lam > 0.0))
    throw ConfigError("/qfunction/times/unit", "Lambda vanishes for these parameters; give times in seconds");
  std::vector<double> times = q.times.values;
  if (q.times.lambda_units)
    for (double& t : times) t /= lam;

  const System sys = build_system(cfg, rm, cfg.photon_cutoff);
  const LindbladModel& model = *sys.model;
  const bool dissipative =
      std::any_of(model.jumps().begin(), model.jumps().end(), [](const JumpOperator& j) { return j.rate > 0.0; });
  Method m = cfg.evolution.method;
  if (m == Method::automatic) m = !dissipative ? Method::pure : Method::master;
  if (m == Method::pure && dissipative)
    throw ConfigError("/evolution/method", "the model is dissipative; use no_jump or master");
  if (m == Method::trajectories)
    throw ConfigError("/evolution/method", "Q-functions need a state or density matrix; use pure, no_jump or master");

  OdeOptions ode;
  ode.rel_tol = cfg.evolution.rel_tol;
  ode.abs_tol = cfg.evolution.abs_tol;
  const auto lb = build_ladder(*sys.atoms_basis);
  std::vector<SphereGrid> grids;
  if (m == Method::master) {
    MasterOptions mo;
    mo.ode = ode;
    mo.max_dim = cfg.evolution.max_master_dim;
    try {
      for (const auto& r : evolve_master(model, DensityMatrix::pure(sys.psi0), times, mo))
        grids.push_back(qfunction(lb, r, q.n_theta, q.n_phi));
    } catch (const CapacityError& e) {
      throw CapacityError(std::string(e.what()) + "; for Q-functions use method no_jump or fewer atoms");
    }
  } else {
    for (const auto& s : evolve_no_jump(model, sys.psi0, times, ode))
      grids.push_back(qfunction(lb, s.state, q.n_theta, q.n_phi));
  }

  const json prov = provenance("qfunction", resolved_json(cfg));
  json snaps = json::array();
  for (std::size_t k = 0; k < grids.size(); ++k) {
    const auto& g = grids[k];
    const double lt = times[k] * lam;
    const std::string stem = fmt("qfunction_%02zu", k);
    if (wants(cfg, "table")) {
      Table t;
      t.columns = {"theta_s", "phi", "q"};
      t.notes.push_back(fmt("t = %s s, Lambda t = %s, N = %d, method %s", format_number(times[k]).c_str(),
                            format_number(lt).c_str(), cfg.atoms, to_string(m)));
      t.notes.push_back(fmt("grid %zu x %zu (theta_s x phi, radians), projected weight %s", g.n_theta(), g.n_phi(),
                            format_number(g.projected_weight).c_str()));
      for (std::size_t i = 0; i < g.n_theta(); ++i)
        for (std::size_t j = 0; j < g.n_phi(); ++j) t.add_row({g.theta[i], g.phi[j], g.at(i, j)});
      write_file(out_path(cfg.output_dir, stem + ".tsv"), t.render(prov));
    }
    if (wants(cfg, "image")) {
      write_file(out_path(cfg.output_dir, stem + ".svg"),
                 render_svg(g, q.projection, fmt("N=%d, Lambda t = %s", cfg.atoms, format_number(lt).c_str())));
    }
    snaps.push_back({{"t", times[k]},
                     {"lambda_t", lt},
                     {"projected_weight", g.projected_weight},
                     {"theta_s", g.theta},
                     {"phi", g.phi},
                     {"q", g.values}});
    say(ctx, fmt("Lambda t = %.4g: projected weight %.6f", lt, g.projected_weight));
  }
  if (wants(cfg, "record")) {
    json rec;
    rec["provenance"] = prov;
    rec["method"] = to_string(m);
    rec["layout"] = "q is row-major over (theta_s, phi); theta_s = 0 is the |0,N,0> pole";
    rec["snapshots"] = snaps;
    write_file(out_path(cfg.output_dir, "qfunction.json"), rec.dump() + "\n");
  }
  say(ctx, "output: " + cfg.output_dir);
  return kSuccess;
}

int cmd_validate(const ValidateRequest& req, const Context& ctx) {
  validation::Options opt;
  if (req.seed) opt.seed = *req.seed;
  opt.threads = ctx.threads;
  opt.fault_rate_scale = req.fault_rate_scale;
  opt.only = req.only;
  opt.artifact_dir = out_path(req.output_dir, "validation");
  opt.progress = [&](const std::string& s) { say(ctx, "  .. " + s); };
  const auto rep = validation::run(opt, [&](const validation::CheckResult& r) {
    say(ctx, validation::summary_line(r));
    for (const auto& d : r.details) say(ctx, "      " + d);
  });
  json checks = json::array();
  for (const auto& c : rep.checks)
    checks.push_back({{"id", c.id}, {"name", c.name}, {"passed", c.passed}, {"details", c.details}, {"seconds", c.seconds}});
  json rec;
  rec["tool"] = "spinorsim";
  rec["version"] = version();
  rec["seed"] = opt.seed;
  rec["fault_rate_scale"] = opt.fault_rate_scale;
  rec["checks"] = checks;
  rec["all_passed"] = rep.all_passed();
  write_file(out_path(req.output_dir, "validate.json"), rec.dump(2) + "\n");
  int passed = 0;
  for (const auto& c : rep.checks) passed += c.passed ? 1 : 0;
  say(ctx, fmt("%d/%zu checks passed", passed, rep.checks.size()));
  return rep.all_passed() ? kSuccess : kValidationFailure;
}

}  // namespace spinor::cli
