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

// Laboratory parameters -> effective Dicke and dispersive model coefficients.
// All frequencies and rates are angular (rad/s); helpers in `units` convert
// the "/2pi" values usually quoted for cavity QED setups.

#include <numbers>
#include <string>
#include <vector>

namespace spinor {

namespace units {
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double hz_2pi(double v) { return kTwoPi * v; }
inline constexpr double khz_2pi(double v) { return kTwoPi * 1e3 * v; }
inline constexpr double mhz_2pi(double v) { return kTwoPi * 1e6 * v; }
inline constexpr double ghz_2pi(double v) { return kTwoPi * 1e9 * v; }
inline constexpr double to_khz_2pi(double rad_s) { return rad_s / (kTwoPi * 1e3); }
inline constexpr double to_mhz_2pi(double rad_s) { return rad_s / (kTwoPi * 1e6); }
}  // namespace units

struct MicroscopicParams {
  double g = 0.0;                      // single atom-cavity coupling
  double kappa = 0.0;                  // cavity field decay rate
  double gamma = 0.0;                  // atomic spontaneous linewidth
  double detuning = 0.0;               // Delta, common detuning from F'=1
  double hyperfine_splitting = 0.0;    // zeta = omega_2 - omega_1
  double rabi_plus = 0.0;              // Omega_+
  double rabi_minus = 0.0;             // Omega_-
  double cavity_frequency = 0.0;       // omega_c
  double laser_plus_frequency = 0.0;   // omega_+
  double laser_minus_frequency = 0.0;  // omega_-
  double zeeman_splitting = 0.0;       // omega_z
  int atom_count = 1;

  /// Throws InvalidArgument when kappa, gamma <= 0, N < 1, or a detuning
  /// denominator (Delta, Delta + zeta) vanishes.
  void validate() const;
};

enum class DetuningModel {
  large_detuning,     // Delta >> zeta: excited hyperfine structure ignored
  finite_splitting,   // keep 1/Delta and 1/(Delta + zeta) distinct
};

/// Coefficients of the spin-1 Dicke Hamiltonian
///   H = w a^dag a + w0 S_z + lm/sqrt(2N) (a S+ + a^dag S-) + lp/sqrt(2N) (a S- + a^dag S+)
/// plus, for finite hyperfine splitting, residual terms whose coefficients
/// (omega_q, delta_q, xi_1, xi_2, h) are single-atom values that multiply
/// collective one-body operators.
struct EffectiveDickeParams {
  double cavity_detuning = 0.0;  // omega
  double spin_splitting = 0.0;   // omega_0
  double lambda_minus = 0.0;
  double lambda_plus = 0.0;
  double omega_q = 0.0;
  double delta_q = 0.0;
  double xi_1 = 0.0;
  double xi_2 = 0.0;
  double h = 0.0;
  int atom_count = 1;
};

/// Spin-mixing model after eliminating the cavity (lambda_+ = 0).
struct DispersiveParams {
  double omega0_prime = 0.0;
  double Lambda = 0.0;            // signed, sign = -sign(omega)
  double Gamma = 0.0;             // >= 0
  double gamma_over_lambda = 0.0; // kappa / |omega|
  int atom_count = 1;
};

struct Feasibility {
  double cooperativity = 0.0;        // C = 2 g^2 / (kappa gamma)
  double gamma_sp_plus = 0.0;        // gamma Omega_+^2 / (12 Delta^2)
  double gamma_sp_minus = 0.0;
  double gamma_sp_total = 0.0;
  double gamma_sp_ratio = 0.0;       // Gamma_sp,total / (|Lambda| / 2)
  double gamma_sp_ratio_estimate = 0.0;  // 48 |omega| / (N C kappa)
  double gamma_over_lambda = 0.0;
  bool detuning_exceeds_splitting = false;  // |Delta| >= 10 |zeta|
  bool dispersive_regime = false;           // |omega| >= 10 max(|omega_0|, |lambda_+-|)
  std::vector<std::string> warnings;
};

EffectiveDickeParams dicke_params(const MicroscopicParams& p, DetuningModel model);

/// Throws InvalidArgument if the cavity detuning is zero.
DispersiveParams dispersive_params(const EffectiveDickeParams& d, double kappa);

Feasibility feasibility(const MicroscopicParams& p, const DispersiveParams& d,
                        DetuningModel model = DetuningModel::large_detuning);

/// Zeeman splitting that makes omega_0' vanish for otherwise fixed inputs.
double zeeman_for_null_omega0_prime(const MicroscopicParams& p, DetuningModel model);

}  // namespace spinor
