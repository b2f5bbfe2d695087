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

// Turns a RunConfig into a model and runs it with the requested method.

#include <optional>
#include <string>
#include <vector>

#include "spinor/evolution.hpp"
#include "spinor/observables.hpp"
#include "spinor/params.hpp"
#include "spinor/tools/config.hpp"

namespace spinor::cli {

struct ResolvedModel {
  ModelTier tier = ModelTier::spin_mixing;
  int atoms = 0;
  std::optional<EffectiveDickeParams> dicke;
  double kappa = 0.0;
  DispersiveParams dispersive;  // always filled; sets the Lambda time scale
  std::optional<Feasibility> feasibility;
  bool include_residuals = false;
  std::vector<std::string> warnings;
};

/// Parameter mapping for the config (microscopic or effective path).
ResolvedModel resolve_model(const RunConfig& cfg);

struct System {
  std::optional<SymmetricBasis> atoms_basis;
  std::optional<JointBasis> joint_basis;
  std::optional<LindbladModel> model;
  StateVector psi0;
  Eigen::Index dim() const { return psi0.dim(); }
  MomentEvaluator evaluator() const;
};

System build_system(const RunConfig& cfg, const ResolvedModel& rm, int photon_cutoff);

struct SimulationOutput {
  Method method = Method::pure;
  double lambda_abs = 0.0;
  std::vector<double> times;  // seconds (or 1/|Lambda| when Lambda is given in those units)
  std::vector<Moments> moments;
  std::vector<SqueezingRecord> squeezing;
  // trajectories only
  std::vector<JackknifeEstimate> xi2_jackknife;
  std::vector<std::array<double, Moments::kCount>> moment_se;
  std::vector<JackknifeEstimate> jumps;
  // no_jump only
  std::vector<double> no_jump_probability;
  std::optional<CutoffConvergence> cutoff;
  std::vector<std::string> warnings;
  Eigen::Index dim = 0;

  double lambda_t(std::size_t k) const { return times[k] * lambda_abs; }
  /// Sample with the smallest defined xi2_min; nullopt if none is defined.
  std::optional<std::size_t> peak() const;
  /// xi2_min at sample k with its standard error (zero for deterministic methods).
  JackknifeEstimate xi2_at(std::size_t k) const;
};

/// Runs the configured evolution. threads = 0 uses hardware concurrency.
SimulationOutput simulate(const RunConfig& cfg, unsigned threads);

}  // namespace spinor::cli
