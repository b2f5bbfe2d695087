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

#include "spinor/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spinor/error.hpp"

namespace spinor {

void MicroscopicParams::validate() const {
  if (!(kappa > 0.0)) throw InvalidArgument("kappa must be positive");
  if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
  if (atom_count < 1) throw InvalidArgument("atom_count must be >= 1");
  if (detuning == 0.0) throw InvalidArgument("detuning Delta must be nonzero");
  if (detuning + hyperfine_splitting == 0.0) {
    throw InvalidArgument("Delta + zeta vanishes (resonant F'=2 denominator)");
  }
}

EffectiveDickeParams dicke_params(const MicroscopicParams& p, DetuningModel model) {
  p.validate();
  const double n = static_cast<double>(p.atom_count);
  const double sqrt_n = std::sqrt(n);
  const double op2 = p.rabi_plus * p.rabi_plus;
  const double om2 = p.rabi_minus * p.rabi_minus;
  const double frame_cavity = p.cavity_frequency - 0.5 * (p.laser_plus_frequency + p.laser_minus_frequency);
  const double frame_spin = p.zeeman_splitting + 0.5 * (p.laser_minus_frequency - p.laser_plus_frequency);

  EffectiveDickeParams d;
  d.atom_count = p.atom_count;
  if (model == DetuningModel::large_detuning) {
    const double inv = 1.0 / p.detuning;
    d.cavity_detuning = n * p.g * p.g * inv / 3.0 + frame_cavity;
    d.spin_splitting = (om2 - op2) * inv / 24.0 + frame_spin;
    d.lambda_minus = -sqrt_n * p.g * p.rabi_minus * inv / 12.0;
    d.lambda_plus = -sqrt_n * p.g * p.rabi_plus * inv / 12.0;
    return d;
  }

  const double inv1 = 1.0 / p.detuning;
  const double inv2 = 1.0 / (p.detuning + p.hyperfine_splitting);
  const double split = inv2 - inv1;  // O(zeta / Delta^2)
  d.cavity_detuning = n * p.g * p.g * inv2 / 3.0 + frame_cavity;
  d.spin_splitting = (om2 - op2) / 96.0 * (5.0 * inv2 - inv1) + frame_spin;
  d.lambda_minus = sqrt_n * p.g * p.rabi_minus / 48.0 * (inv1 - 5.0 * inv2);
  d.lambda_plus = sqrt_n * p.g * p.rabi_plus / 48.0 * (inv1 - 5.0 * inv2);
  d.omega_q = (op2 + om2) / 96.0 * split;
  d.delta_q = -p.g * p.g / 6.0 * split;
  d.xi_1 = p.g * p.rabi_minus / 96.0 * split - p.g * p.rabi_plus / 96.0 * split;
  d.xi_2 = p.g * (p.rabi_minus + p.rabi_plus) / 96.0 * split;
  d.h = -p.rabi_plus * p.rabi_minus / 96.0 * split;
  return d;
}

DispersiveParams dispersive_params(const EffectiveDickeParams& d, double kappa) {
  const double w = d.cavity_detuning;
  if (w == 0.0) throw InvalidArgument("cavity detuning omega = 0: dispersive limit undefined");
  if (kappa < 0.0) throw InvalidArgument("kappa must be nonnegative");
  const double lambda = d.lambda_minus;
  DispersiveParams out;
  out.atom_count = d.atom_count;
  out.Lambda = -w * lambda * lambda / (w * w + kappa * kappa);
  // -(kappa/omega) Lambda = kappa lambda^2 / (omega^2 + kappa^2) >= 0.
  out.Gamma = kappa * lambda * lambda / (w * w + kappa * kappa);
  out.omega0_prime = d.spin_splitting + out.Lambda / (2.0 * d.atom_count);
  out.gamma_over_lambda = kappa / std::abs(w);
  return out;
}

Feasibility feasibility(const MicroscopicParams& p, const DispersiveParams& d, DetuningModel model) {
  p.validate();
  const auto dk = dicke_params(p, model);
  Feasibility f;
  const double d2 = p.detuning * p.detuning;
  f.cooperativity = 2.0 * p.g * p.g / (p.kappa * p.gamma);
  f.gamma_sp_plus = p.gamma * p.rabi_plus * p.rabi_plus / (12.0 * d2);
  f.gamma_sp_minus = p.gamma * p.rabi_minus * p.rabi_minus / (12.0 * d2);
  f.gamma_sp_total = f.gamma_sp_plus + f.gamma_sp_minus;
  f.gamma_sp_ratio = d.Lambda != 0.0 ? f.gamma_sp_total / (0.5 * std::abs(d.Lambda))
                                     : std::numeric_limits<double>::infinity();
  f.gamma_sp_ratio_estimate =
      48.0 * std::abs(dk.cavity_detuning) / (p.atom_count * f.cooperativity * p.kappa);
  f.gamma_over_lambda = d.Lambda != 0.0 ? d.Gamma / std::abs(d.Lambda) : 0.0;

  f.detuning_exceeds_splitting = std::abs(p.detuning) >= 10.0 * std::abs(p.hyperfine_splitting);
  const double slow = std::max({std::abs(dk.spin_splitting), std::abs(dk.lambda_minus),
                                std::abs(dk.lambda_plus)});
  f.dispersive_regime = std::abs(dk.cavity_detuning) >= 10.0 * slow;

  if (!f.detuning_exceeds_splitting) {
    f.warnings.emplace_back("|Delta| < 10 |zeta|: large-detuning coefficients are inaccurate");
  }
  if (!f.dispersive_regime) {
    f.warnings.emplace_back("|omega| < 10 max(|omega_0|, |lambda|): cavity elimination is marginal");
  }
  if (f.gamma_over_lambda > 0.1) {
    f.warnings.emplace_back("Gamma/Lambda > 0.1: collective damping is not weak");
  }
  if (p.rabi_plus != 0.0 && p.rabi_minus != 0.0) {
    f.warnings.emplace_back("both lasers on: Gamma_sp reported per laser and summed");
  }
  return f;
}

double zeeman_for_null_omega0_prime(const MicroscopicParams& p, DetuningModel model) {
  // omega_0' is affine in omega_z with unit slope and Lambda does not depend on it.
  MicroscopicParams probe = p;
  probe.zeeman_splitting = 0.0;
  const auto disp = dispersive_params(dicke_params(probe, model), p.kappa);
  return -disp.omega0_prime;
}

}  // namespace spinor
