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


#include "spinor/tools/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "spinor/error.hpp"

namespace spinor::cli {

using nlohmann::json;

namespace {

std::string normalize_unit(std::string u) {
  std::string out;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == ' ') continue;
    // UTF-8 pi
    if (i + 1 < u.size() && static_cast<unsigned char>(u[i]) == 0xCF && static_cast<unsigned char>(u[i + 1]) == 0x80) {
      out += "pi";
      ++i;
      continue;
    }
    out += u[i];
  }
  return out;
}

std::optional<double> time_unit(const std::string& unit) {
  static const std::map<std::string, double> table = {{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}};
  const auto it = table.find(normalize_unit(unit));
  if (it == table.end()) return std::nullopt;
  return it->second;
}

bool is_lambda_time_unit(const std::string& unit) {
  const std::string u = normalize_unit(unit);
  return u == "1/|Lambda|" || u == "Lambdat" || u == "1/Lambda";
}

class Reader {
 public:
  std::vector<Diagnostic> errors;

  void error(const std::string& path, const std::string& msg) { errors.push_back({path, msg}); }

  static std::string join(const std::string& path, const std::string& key) { return path + "/" + key; }

  bool expect_object(const json& j, const std::string& path) {
    if (j.is_object()) return true;
    error(path, "expected an object");
    return false;
  }

  void allow_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : obj.items()) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; }))
        error(join(path, k), "unknown field");
    }
  }

  const json* find(const json& obj, const std::string& path, const char* key, bool required) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) error(join(path, key), "missing required field");
      return nullptr;
    }
    return &*it;
  }

  std::optional<std::string> string(const json& obj, const std::string& path, const char* key, bool required) {
    const json* v = find(obj, path, key, required);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      error(join(path, key), "expected a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<bool> boolean(const json& obj, const std::string& path, const char* key) {
    const json* v = find(obj, path, key, false);
    if (!v) return std::nullopt;
    if (!v->is_boolean()) {
      error(join(path, key), "expected true or false");
      return std::nullopt;
    }
    return v->get<bool>();
  }

  std::optional<long long> integer(const json& obj, const std::string& path, const char* key, bool required,
                                   long long min = std::numeric_limits<long long>::min()) {
    const json* v = find(obj, path, key, required);
    if (!v) return std::nullopt;
    if (!v->is_number_integer()) {
      error(join(path, key), "expected an integer");
      return std::nullopt;
    }
    const auto x = v->get<long long>();
    if (x < min) {
      error(join(path, key), "must be >= " + std::to_string(min));
      return std::nullopt;
    }
    return x;
  }

  // Plain number, used for tolerances and other dimensionless settings.
  std::optional<double> number(const json& obj, const std::string& path, const char* key, bool required,
                               bool positive = false) {
    const json* v = find(obj, path, key, required);
    if (!v) return std::nullopt;
    if (!v->is_number()) {
      error(join(path, key), "expected a number");
      return std::nullopt;
    }
    const double x = v->get<double>();
    if (!std::isfinite(x) || (positive && !(x > 0.0))) {
      error(join(path, key), positive ? "must be a positive finite number" : "must be finite");
      return std::nullopt;
    }
    return x;
  }

  // {"value": x, "unit": u}; `convert` maps a unit to a scale factor.
  template <class Convert>
  std::optional<double> quantity(const json& obj, const std::string& path, const char* key, bool required,
                                 Convert convert, const char* kind) {
    const json* v = find(obj, path, key, required);
    if (!v) return std::nullopt;
    const std::string p = join(path, key);
    if (v->is_number()) {
      error(p, std::string("bare number; write {\"value\": x, \"unit\": ...} with a ") + kind + " unit");
      return std::nullopt;
    }
    if (!expect_object(*v, p)) return std::nullopt;
    allow_keys(*v, p, {"value", "unit"});
    const auto unit = string(*v, p, "unit", true);
    const auto value = number(*v, p, "value", true);
    if (!unit || !value) return std::nullopt;
    const auto scale = convert(*unit);
    if (!scale) {
      error(join(p, "unit"), "unknown " + std::string(kind) + " unit '" + *unit + "'");
      return std::nullopt;
    }
    return *value * *scale;
  }

  std::optional<double> frequency(const json& obj, const std::string& path, const char* key, bool required) {
    return quantity(obj, path, key, required, frequency_unit, "frequency");
  }

  std::optional<double> dimensionless(const json& obj, const std::string& path, const char* key, bool required) {
    return quantity(
        obj, path, key, required,
        [](const std::string& u) -> std::optional<double> {
          return normalize_unit(u) == "dimensionless" ? std::optional<double>(1.0) : std::nullopt;
        },
        "dimensionless");
  }

  // {"unit": u, "values": [...]} or {"unit": u, "start": a, "stop": b, "step": h}.
  std::optional<std::vector<double>> axis(const json& obj, const std::string& path, std::string* unit_out) {
    if (!expect_object(obj, path)) return std::nullopt;
    const auto unit = string(obj, path, "unit", true);
    if (unit && unit_out) *unit_out = *unit;
    std::vector<double> out;
    if (obj.contains("values")) {
      for (const char* k : {"start", "stop", "step"})
        if (obj.contains(k)) error(join(path, k), "give either values or start/stop/step, not both");
      const json& vs = obj["values"];
      if (!vs.is_array() || vs.empty()) {
        error(join(path, "values"), "expected a non-empty array of numbers");
        return std::nullopt;
      }
      for (std::size_t i = 0; i < vs.size(); ++i) {
        if (!vs[i].is_number() || !std::isfinite(vs[i].get<double>())) {
          error(join(path, "values/" + std::to_string(i)), "expected a finite number");
          return std::nullopt;
        }
        out.push_back(vs[i].get<double>());
      }
    } else {
      const auto start = number(obj, path, "start", true);
      const auto stop = number(obj, path, "stop", true);
      const auto step = number(obj, path, "step", true, true);
      if (!start || !stop || !step) return std::nullopt;
      if (*stop < *start) {
        error(join(path, "stop"), "stop must not precede start");
        return std::nullopt;
      }
      const double n = std::floor((*stop - *start) / *step + 1e-9);
      if (n > 1e6) {
        error(join(path, "step"), "axis has more than a million points");
        return std::nullopt;
      }
      for (long k = 0; k <= static_cast<long>(n); ++k) out.push_back(*start + static_cast<double>(k) * *step);
    }
    return out;
  }

  std::optional<TimeAxis> time_axis(const json& obj, const std::string& path) {
    if (!expect_object(obj, path)) return std::nullopt;
    allow_keys(obj, path, {"unit", "values", "start", "stop", "step"});
    std::string unit;
    auto vals = axis(obj, path, &unit);
    if (!vals) return std::nullopt;
    TimeAxis t;
    if (is_lambda_time_unit(unit)) {
      t.lambda_units = true;
    } else if (const auto s = time_unit(unit)) {
      t.lambda_units = false;
      for (double& v : *vals) v *= *s;
    } else {
      if (!unit.empty()) error(join(path, "unit"), "unknown time unit '" + unit + "' (use 1/|Lambda|, s, ms, us)");
      return std::nullopt;
    }
    for (std::size_t i = 0; i < vals->size(); ++i) {
      if ((*vals)[i] < 0.0) error(path, "times must be >= 0");
      if (i > 0 && (*vals)[i] < (*vals)[i - 1]) error(path, "times must be sorted ascending");
    }
    t.values = std::move(*vals);
    return t;
  }
};

void parse_effective(Reader& rd, const json& e, RunConfig& cfg) {
  const std::string p = "/effective";
  if (!rd.expect_object(e, p)) return;
  EffectiveSection s;
  if (cfg.model == ModelTier::spin_mixing) {
    rd.allow_keys(e, p, {"Lambda", "Gamma", "Gamma_over_Lambda", "omega0_prime"});
    if (auto v = rd.frequency(e, p, "Lambda", true)) {
      if (*v == 0.0) rd.error(p + "/Lambda", "must be nonzero");
      s.Lambda = *v;
    }
    if (e.contains("Gamma") && e.contains("Gamma_over_Lambda"))
      rd.error(p + "/Gamma", "give Gamma or Gamma_over_Lambda, not both");
    s.Gamma = rd.frequency(e, p, "Gamma", false);
    s.gamma_over_lambda = rd.dimensionless(e, p, "Gamma_over_Lambda", false);
    if ((s.Gamma && *s.Gamma < 0.0) || (s.gamma_over_lambda && *s.gamma_over_lambda < 0.0))
      rd.error(p, "Gamma must be >= 0");
    s.omega0_prime = rd.frequency(e, p, "omega0_prime", false).value_or(0.0);
  } else {
    rd.allow_keys(e, p, {"cavity_detuning", "lambda_minus", "lambda_plus", "spin_splitting", "kappa"});
    if (auto v = rd.frequency(e, p, "cavity_detuning", true)) {
      if (*v == 0.0) rd.error(p + "/cavity_detuning", "must be nonzero");
      s.cavity_detuning = *v;
    }
    s.lambda_minus = rd.frequency(e, p, "lambda_minus", true).value_or(0.0);
    s.lambda_plus = rd.frequency(e, p, "lambda_plus", false).value_or(0.0);
    s.spin_splitting = rd.frequency(e, p, "spin_splitting", false).value_or(0.0);
    if (auto v = rd.frequency(e, p, "kappa", true)) {
      if (*v < 0.0) rd.error(p + "/kappa", "must be >= 0");
      s.kappa = *v;
    }
  }
  cfg.effective = s;
}

void parse_microscopic(Reader& rd, const json& m, RunConfig& cfg) {
  const std::string p = "/microscopic";
  if (!rd.expect_object(m, p)) return;
  rd.allow_keys(m, p,
                {"g", "kappa", "gamma", "detuning", "hyperfine_splitting", "rabi_plus", "rabi_minus", "cavity_frequency",
                 "laser_plus_frequency", "laser_minus_frequency", "zeeman_splitting", "detuning_model",
                 "null_omega0_prime", "include_residuals"});
  MicroscopicSection s;
  auto& q = s.params;
  const auto req = [&](const char* k) { return rd.frequency(m, p, k, true).value_or(0.0); };
  const auto opt = [&](const char* k) { return rd.frequency(m, p, k, false).value_or(0.0); };
  q.g = req("g");
  q.kappa = req("kappa");
  q.gamma = req("gamma");
  q.detuning = req("detuning");
  q.rabi_minus = req("rabi_minus");
  q.rabi_plus = opt("rabi_plus");
  q.hyperfine_splitting = opt("hyperfine_splitting");
  q.cavity_frequency = opt("cavity_frequency");
  q.laser_plus_frequency = opt("laser_plus_frequency");
  q.laser_minus_frequency = opt("laser_minus_frequency");
  q.zeeman_splitting = opt("zeeman_splitting");
  q.atom_count = cfg.atoms;
  if (auto dm = rd.string(m, p, "detuning_model", false)) {
    if (*dm == "large_detuning") s.detuning_model = DetuningModel::large_detuning;
    else if (*dm == "finite_splitting") s.detuning_model = DetuningModel::finite_splitting;
    else rd.error(p + "/detuning_model", "expected large_detuning or finite_splitting");
  }
  s.null_omega0_prime = rd.boolean(m, p, "null_omega0_prime").value_or(false);
  s.include_residuals = rd.boolean(m, p, "include_residuals").value_or(false);
  if (rd.errors.empty()) {
    try {
      q.validate();
    } catch (const InvalidArgument& e) {
      rd.error(p, e.what());
    }
  }
  cfg.microscopic = s;
}

void parse_evolution(Reader& rd, const json& e, EvolutionSection& s) {
  const std::string p = "/evolution";
  if (!rd.expect_object(e, p)) return;
  rd.allow_keys(e, p, {"method", "n_traj", "rel_tol", "abs_tol", "jump_time_tol", "max_master_dim"});
  if (auto m = rd.string(e, p, "method", false)) {
    static const std::map<std::string, Method> names = {{"auto", Method::automatic},
                                                        {"pure", Method::pure},
                                                        {"no_jump", Method::no_jump},
                                                        {"master", Method::master},
                                                        {"trajectories", Method::trajectories}};
    const auto it = names.find(*m);
    if (it == names.end()) rd.error(p + "/method", "expected auto, pure, no_jump, master or trajectories");
    else s.method = it->second;
  }
  if (auto v = rd.integer(e, p, "n_traj", false, 1)) s.n_traj = static_cast<std::size_t>(*v);
  if (auto v = rd.number(e, p, "rel_tol", false, true)) s.rel_tol = *v;
  if (auto v = rd.number(e, p, "abs_tol", false, true)) s.abs_tol = *v;
  if (auto v = rd.number(e, p, "jump_time_tol", false, true)) s.jump_time_tol = *v;
  if (auto v = rd.integer(e, p, "max_master_dim", false, 1)) s.max_master_dim = static_cast<long>(*v);
}

void parse_sweep(Reader& rd, const json& s, SweepSection& out) {
  const std::string p = "/sweep";
  if (!rd.expect_object(s, p)) return;
  const auto axis = rd.string(s, p, "axis", true);
  if (!axis) return;
  if (*axis == "atoms") {
    rd.allow_keys(s, p, {"axis", "values"});
    out.axis = SweepAxis::atoms;
    const json* v = rd.find(s, p, "values", true);
    if (!v) return;
    if (!v->is_array() || v->empty()) {
      rd.error(p + "/values", "expected a non-empty array of atom numbers");
      return;
    }
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (!(*v)[i].is_number_integer() || (*v)[i].get<long long>() < 1 || (*v)[i].get<long long>() > 100000)
        rd.error(p + "/values/" + std::to_string(i), "expected an atom number in [1, 100000]");
      else out.atoms.push_back(static_cast<int>((*v)[i].get<long long>()));
    }
  } else if (*axis == "Gamma_over_Lambda") {
    rd.allow_keys(s, p, {"axis", "unit", "values", "start", "stop", "step"});
    out.axis = SweepAxis::gamma_over_lambda;
    std::string unit;
    if (auto v = rd.axis(s, p, &unit)) {
      if (normalize_unit(unit) != "dimensionless") rd.error(p + "/unit", "Gamma_over_Lambda is dimensionless");
      for (double x : *v)
        if (x < 0.0) rd.error(p, "Gamma_over_Lambda values must be >= 0");
      out.gamma_over_lambda = *v;
    }
  } else if (*axis == "theta") {
    rd.allow_keys(s, p, {"axis", "unit", "values", "start", "stop", "step", "oracle_presets"});
    out.axis = SweepAxis::theta;
    std::string unit;
    if (auto v = rd.axis(s, p, &unit)) {
      const std::string u = normalize_unit(unit);
      if (u == "deg") out.theta_deg = *v;
      else if (u == "rad")
        for (double x : *v) out.theta_deg.push_back(x * 180.0 / std::acos(-1.0));
      else rd.error(p + "/unit", "expected deg or rad");
    }
    out.oracle_presets = rd.boolean(s, p, "oracle_presets").value_or(false);
  } else {
    rd.error(p + "/axis", "expected atoms, Gamma_over_Lambda or theta");
  }
}

void parse_qfunction(Reader& rd, const json& q, RunConfig& cfg) {
  const std::string p = "/qfunction";
  if (!rd.expect_object(q, p)) return;
  rd.allow_keys(q, p, {"times", "n_theta", "n_phi", "projection"});
  QFunctionSection s;
  if (const json* t = rd.find(q, p, "times", true))
    if (auto ax = rd.time_axis(*t, p + "/times")) s.times = *ax;
  if (auto v = rd.integer(q, p, "n_theta", false, 2)) s.n_theta = static_cast<std::size_t>(*v);
  if (auto v = rd.integer(q, p, "n_phi", false, 1)) s.n_phi = static_cast<std::size_t>(*v);
  if (auto v = rd.string(q, p, "projection", false)) {
    if (*v == "pole_view") s.projection = Projection::pole_view;
    else if (*v == "mollweide") s.projection = Projection::mollweide;
    else rd.error(p + "/projection", "expected pole_view or mollweide");
  }
  cfg.qfunction = s;
}

const char* method_name(Method m) {
  switch (m) {
    case Method::automatic: return "auto";
    case Method::pure: return "pure";
    case Method::no_jump: return "no_jump";
    case Method::master: return "master";
    case Method::trajectories: return "trajectories";
  }
  return "?";
}

json rad_s(double v) { return {{"value", v}, {"unit", "rad/s"}}; }

json time_json(const TimeAxis& t) {
  return {{"unit", t.lambda_units ? "1/|Lambda|" : "s"}, {"values", t.values}};
}

}  // namespace

ConfigError::ConfigError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(diagnostics.empty() ? "invalid configuration"
                                             : diagnostics.front().path + ": " + diagnostics.front().message),
      diagnostics_(std::move(diagnostics)) {}

json ConfigError::to_json() const {
  json d = json::array();
  for (const auto& x : diagnostics_) d.push_back({{"path", x.path}, {"message", x.message}});
  return {{"error", "config"}, {"diagnostics", d}};
}

std::optional<double> frequency_unit(const std::string& unit) {
  constexpr double two_pi = 2.0 * 3.14159265358979323846;
  static const std::map<std::string, double> table = {
      {"rad/s", 1.0},          {"Hz/2pi", two_pi},        {"kHz/2pi", two_pi * 1e3},
      {"MHz/2pi", two_pi * 1e6}, {"GHz/2pi", two_pi * 1e9},
  };
  const auto it = table.find(normalize_unit(unit));
  if (it == table.end()) return std::nullopt;
  return it->second;
}

const char* to_string(ModelTier m) {
  switch (m) {
    case ModelTier::full_dicke: return "full_dicke";
    case ModelTier::dispersive: return "dispersive";
    case ModelTier::spin_mixing: return "spin_mixing";
  }
  return "?";
}

const char* to_string(Method m) { return method_name(m); }

RunConfig parse_config(const json& doc) {
  Reader rd;
  RunConfig cfg;
  cfg.source = doc;
  if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");
  rd.allow_keys(doc, "",
                {"model", "atoms", "seed", "effective", "microscopic", "initial_state", "time", "evolution",
                 "observables", "theta", "photon_cutoff", "cutoff_check", "output", "sweep", "qfunction"});

  bool model_ok = false;
  if (auto m = rd.string(doc, "", "model", true)) {
    model_ok = true;
    if (*m == "full_dicke") cfg.model = ModelTier::full_dicke;
    else if (*m == "dispersive") cfg.model = ModelTier::dispersive;
    else if (*m == "spin_mixing") cfg.model = ModelTier::spin_mixing;
    else {
      rd.error("/model", "expected full_dicke, dispersive or spin_mixing");
      model_ok = false;
    }
  }
  if (auto n = rd.integer(doc, "", "atoms", true, 1)) cfg.atoms = static_cast<int>(*n);
  if (const json* s = rd.find(doc, "", "seed", false)) {
    if (s->is_number_unsigned() || (s->is_number_integer() && s->get<long long>() >= 0)) cfg.seed = s->get<std::uint64_t>();
    else rd.error("/seed", "expected a nonnegative integer");
  }

  const bool has_eff = doc.contains("effective"), has_mic = doc.contains("microscopic");
  if (has_eff == has_mic) {
    rd.error("", "give exactly one of effective or microscopic");
  } else if (model_ok) {
    if (has_eff) parse_effective(rd, doc["effective"], cfg);
    else parse_microscopic(rd, doc["microscopic"], cfg);
  }

  cfg.initial = {0, cfg.atoms, 0};
  if (const json* s = rd.find(doc, "", "initial_state", false)) {
    if (rd.expect_object(*s, "/initial_state")) {
      rd.allow_keys(*s, "/initial_state", {"n_minus", "n_zero", "n_plus"});
      const auto a = rd.integer(*s, "/initial_state", "n_minus", true, 0);
      const auto b = rd.integer(*s, "/initial_state", "n_zero", true, 0);
      const auto c = rd.integer(*s, "/initial_state", "n_plus", true, 0);
      if (a && b && c) {
        if (*a + *b + *c != cfg.atoms) rd.error("/initial_state", "occupations must sum to atoms");
        cfg.initial = {static_cast<int>(*a), static_cast<int>(*b), static_cast<int>(*c)};
      }
    }
  }

  if (const json* t = rd.find(doc, "", "time", false)) {
    if (auto ax = rd.time_axis(*t, "/time")) cfg.time = *ax;
  } else {
    for (int k = 0; k <= 100; ++k) cfg.time.values.push_back(0.05 * k);
  }

  if (const json* e = rd.find(doc, "", "evolution", false)) parse_evolution(rd, *e, cfg.evolution);

  if (const json* o = rd.find(doc, "", "observables", false)) {
    if (!o->is_array()) {
      rd.error("/observables", "expected an array of observable names");
    } else {
      const auto& names = Moments::names();
      for (std::size_t i = 0; i < o->size(); ++i) {
        const json& v = (*o)[i];
        if (!v.is_string() || std::find(names.begin(), names.end(), v.get<std::string>()) == names.end())
          rd.error("/observables/" + std::to_string(i), "unknown observable");
        else cfg.observables.push_back(v.get<std::string>());
      }
    }
  }

  if (const json* t = rd.find(doc, "", "theta", false)) {
    if (rd.expect_object(*t, "/theta")) {
      rd.allow_keys(*t, "/theta", {"grid_size", "refine_tol", "subspace"});
      if (auto v = rd.integer(*t, "/theta", "grid_size", false, 8)) cfg.theta.grid_size = static_cast<std::size_t>(*v);
      if (auto v = rd.number(*t, "/theta", "refine_tol", false, true)) cfg.theta.refine_tol = *v;
      if (auto v = rd.string(*t, "/theta", "subspace", false)) {
        if (*v == "sx_qyz") cfg.subspace = Subspace::sx_qyz;
        else if (*v == "sy_qxz") cfg.subspace = Subspace::sy_qxz;
        else rd.error("/theta/subspace", "expected sx_qyz or sy_qxz");
      }
    }
  }

  if (auto v = rd.integer(doc, "", "photon_cutoff", false, 1)) cfg.photon_cutoff = static_cast<int>(*v);
  if (auto v = rd.boolean(doc, "", "cutoff_check")) cfg.cutoff_check = *v;

  if (const json* o = rd.find(doc, "", "output", false)) {
    if (rd.expect_object(*o, "/output")) {
      rd.allow_keys(*o, "/output", {"dir", "formats"});
      if (auto d = rd.string(*o, "/output", "dir", false)) cfg.output_dir = *d;
      if (const json* f = rd.find(*o, "/output", "formats", false)) {
        cfg.formats.clear();
        if (!f->is_array()) rd.error("/output/formats", "expected an array");
        else
          for (std::size_t i = 0; i < f->size(); ++i) {
            const json& v = (*f)[i];
            if (!v.is_string() || (v != "table" && v != "record" && v != "image"))
              rd.error("/output/formats/" + std::to_string(i), "expected table, record or image");
            else cfg.formats.push_back(v.get<std::string>());
          }
      }
    }
  }

  if (const json* s = rd.find(doc, "", "sweep", false)) parse_sweep(rd, *s, cfg.sweep);
  if (const json* q = rd.find(doc, "", "qfunction", false)) parse_qfunction(rd, *q, cfg);

  if (cfg.model == ModelTier::full_dicke && cfg.evolution.method == Method::pure)
    rd.error("/evolution/method", "pure evolution needs a model without dissipation; use master or trajectories");

  if (!rd.errors.empty()) throw ConfigError(std::move(rd.errors));
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("JSON parse error: ") + e.what());
  }
  return parse_config(doc);
}

json resolved_json(const RunConfig& cfg) {
  json j;
  j["model"] = to_string(cfg.model);
  j["atoms"] = cfg.atoms;
  j["seed"] = cfg.seed;
  if (cfg.effective) {
    const auto& e = *cfg.effective;
    json x;
    if (cfg.model == ModelTier::spin_mixing) {
      x["Lambda"] = rad_s(e.Lambda);
      if (e.Gamma) x["Gamma"] = rad_s(*e.Gamma);
      if (e.gamma_over_lambda) x["Gamma_over_Lambda"] = {{"value", *e.gamma_over_lambda}, {"unit", "dimensionless"}};
      x["omega0_prime"] = rad_s(e.omega0_prime);
    } else {
      x["cavity_detuning"] = rad_s(e.cavity_detuning);
      x["lambda_minus"] = rad_s(e.lambda_minus);
      x["lambda_plus"] = rad_s(e.lambda_plus);
      x["spin_splitting"] = rad_s(e.spin_splitting);
      x["kappa"] = rad_s(e.kappa);
    }
    j["effective"] = x;
  }
  if (cfg.microscopic) {
    const auto& m = cfg.microscopic->params;
    j["microscopic"] = {
        {"g", rad_s(m.g)},
        {"kappa", rad_s(m.kappa)},
        {"gamma", rad_s(m.gamma)},
        {"detuning", rad_s(m.detuning)},
        {"hyperfine_splitting", rad_s(m.hyperfine_splitting)},
        {"rabi_plus", rad_s(m.rabi_plus)},
        {"rabi_minus", rad_s(m.rabi_minus)},
        {"cavity_frequency", rad_s(m.cavity_frequency)},
        {"laser_plus_frequency", rad_s(m.laser_plus_frequency)},
        {"laser_minus_frequency", rad_s(m.laser_minus_frequency)},
        {"zeeman_splitting", rad_s(m.zeeman_splitting)},
        {"detuning_model", cfg.microscopic->detuning_model == DetuningModel::large_detuning ? "large_detuning"
                                                                                             : "finite_splitting"},
        {"null_omega0_prime", cfg.microscopic->null_omega0_prime},
        {"include_residuals", cfg.microscopic->include_residuals},
    };
  }
  j["initial_state"] = {{"n_minus", cfg.initial.n_minus}, {"n_zero", cfg.initial.n_zero}, {"n_plus", cfg.initial.n_plus}};
  j["time"] = time_json(cfg.time);
  j["evolution"] = {{"method", method_name(cfg.evolution.method)},
                    {"n_traj", cfg.evolution.n_traj},
                    {"rel_tol", cfg.evolution.rel_tol},
                    {"abs_tol", cfg.evolution.abs_tol},
                    {"jump_time_tol", cfg.evolution.jump_time_tol},
                    {"max_master_dim", cfg.evolution.max_master_dim}};
  j["observables"] = cfg.observables;
  j["theta"] = {{"grid_size", cfg.theta.grid_size},
                {"refine_tol", cfg.theta.refine_tol},
                {"subspace", cfg.subspace == Subspace::sx_qyz ? "sx_qyz" : "sy_qxz"}};
  j["photon_cutoff"] = cfg.photon_cutoff;
  j["cutoff_check"] = cfg.cutoff_check;
  j["output"] = {{"dir", cfg.output_dir}, {"formats", cfg.formats}};
  switch (cfg.sweep.axis) {
    case SweepAxis::none: break;
    case SweepAxis::atoms: j["sweep"] = {{"axis", "atoms"}, {"values", cfg.sweep.atoms}}; break;
    case SweepAxis::gamma_over_lambda:
      j["sweep"] = {{"axis", "Gamma_over_Lambda"}, {"unit", "dimensionless"}, {"values", cfg.sweep.gamma_over_lambda}};
      break;
    case SweepAxis::theta:
      j["sweep"] = {{"axis", "theta"}, {"unit", "deg"}, {"values", cfg.sweep.theta_deg},
                    {"oracle_presets", cfg.sweep.oracle_presets}};
      break;
  }
  if (cfg.qfunction) {
    j["qfunction"] = {{"times", time_json(cfg.qfunction->times)},
                      {"n_theta", cfg.qfunction->n_theta},
                      {"n_phi", cfg.qfunction->n_phi},
                      {"projection", cfg.qfunction->projection == Projection::pole_view ? "pole_view" : "mollweide"}};
  }
  return j;
}

}  // namespace spinor::cli
