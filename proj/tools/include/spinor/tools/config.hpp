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


#pragma once

// Run configuration for spinorsim. Configs are JSON documents in which every
// dimensional number carries a unit, e.g. {"value": 10, "unit": "MHz/2pi"}.
// Parsing collects every schema violation before reporting.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinor/hilbert.hpp"
#include "spinor/models.hpp"
#include "spinor/observables.hpp"
#include "spinor/params.hpp"
#include "spinor/qfunction.hpp"

#include "json.hpp"

namespace spinor::cli {

struct Diagnostic {
  std::string path;  // JSON pointer of the offending field
  std::string message;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<Diagnostic> diagnostics);
  ConfigError(std::string path, std::string message)
      : ConfigError(std::vector<Diagnostic>{{std::move(path), std::move(message)}}) {}
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }
  nlohmann::json to_json() const;

 private:
  std::vector<Diagnostic> diagnostics_;
};

enum class ModelTier { full_dicke, dispersive, spin_mixing };
enum class Method { automatic, pure, no_jump, master, trajectories };

/// Times are stored either in seconds or in units of 1/|Lambda|.
struct TimeAxis {
  std::vector<double> values;
  bool lambda_units = true;
};

struct EffectiveSection {
  // spin_mixing
  double Lambda = 0.0;
  std::optional<double> Gamma, gamma_over_lambda;
  double omega0_prime = 0.0;
  // dispersive / full_dicke
  double cavity_detuning = 0.0, lambda_minus = 0.0, lambda_plus = 0.0, spin_splitting = 0.0, kappa = 0.0;
};

struct MicroscopicSection {
  MicroscopicParams params;
  DetuningModel detuning_model = DetuningModel::large_detuning;
  bool null_omega0_prime = false;
  bool include_residuals = false;
};

struct EvolutionSection {
  Method method = Method::automatic;
  std::size_t n_traj = 1000;
  double rel_tol = 1e-8, abs_tol = 1e-10, jump_time_tol = 1e-10;
  long max_master_dim = 4000;
};

enum class SweepAxis { none, atoms, gamma_over_lambda, theta };

struct SweepSection {
  SweepAxis axis = SweepAxis::none;
  std::vector<int> atoms;
  std::vector<double> gamma_over_lambda;
  std::vector<double> theta_deg;
  bool oracle_presets = false;
};

struct QFunctionSection {
  TimeAxis times;
  std::size_t n_theta = 61, n_phi = 120;
  Projection projection = Projection::pole_view;
};

struct RunConfig {
  ModelTier model = ModelTier::spin_mixing;
  int atoms = 0;
  std::uint64_t seed = 0;
  std::optional<EffectiveSection> effective;
  std::optional<MicroscopicSection> microscopic;
  FockState initial;  // defaults to |0,N,0>
  TimeAxis time;
  EvolutionSection evolution;
  std::vector<std::string> observables;  // moment names; empty means all
  ThetaOptions theta;
  Subspace subspace = Subspace::sx_qyz;
  int photon_cutoff = 8;
  bool cutoff_check = true;
  std::string output_dir = "spinorsim-out";
  std::vector<std::string> formats = {"table", "record"};
  SweepSection sweep;
  std::optional<QFunctionSection> qfunction;

  nlohmann::json source;  // the document as read, for provenance
};

/// Multiplier converting a value in `unit` to rad/s; nullopt for unknown units.
std::optional<double> frequency_unit(const std::string& unit);

/// Validates the document against the schema and resolves units. Throws
/// ConfigError listing every problem found.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

/// The config with defaults filled in, in the same schema (units rad/s).
nlohmann::json resolved_json(const RunConfig& cfg);

const char* to_string(ModelTier m);
const char* to_string(Method m);

}  // namespace spinor::cli
