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

// Undepleted-pump (large N) closed form for the squeezing parameter,
//   xi2 = (cos th + 2 Lambda t sin th)^2 + (1 + 2 Gamma t)^2 sin^2 th,
// and the linear Langevin solution it comes from.

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spinor/observables.hpp"

namespace spinor {

struct OracleParams {
  double Lambda = 0.0;
  double Gamma = 0.0;
  double t = 0.0;
  double theta = 0.0;  // radians
};

double xi2_analytic(const OracleParams& p);

/// Minimum over theta in closed form (smallest eigenvalue of
/// [[1, a], [a, a^2 + b^2]], a = 2 Lambda t, b = 1 + 2 Gamma t).
ThetaMinimum xi2_analytic_min(double Lambda, double Gamma, double t);

/// Second moments <X_i X_j> of X = (A, A^dag, B, B^dag) with
/// A = a_+1 + a_-1^dag and B = a_+1 - a_-1^dag, for vacuum input.
struct LangevinMoments {
  Eigen::Matrix4cd second;

  /// xi2 rebuilt from the moments; equals xi2_analytic.
  double xi2(double theta) const;
  /// Var(S_x)/N in the undepleted limit.
  double var_sx_over_n() const;
};

/// Solution A(t) = A(0), B(t) = B(0) - 2(Gamma + i Lambda) t A(0) - 2 sqrt(2 Gamma) W(t),
/// with W the integrated vacuum noise, <W W^dag> = t.
LangevinMoments langevin_moments(double Lambda, double Gamma, double t);

inline constexpr std::array<double, 3> kDampingPresets = {0.02, 0.05, 0.1};

/// xi2 over a (Lambda t, theta) grid at fixed Gamma/Lambda; rows are times.
struct OracleHeatmap {
  double gamma_over_lambda = 0.0;
  std::vector<double> lambda_t;
  std::vector<double> theta_deg;
  Eigen::MatrixXd xi2;
};

OracleHeatmap oracle_heatmap(double gamma_over_lambda, std::span<const double> lambda_t,
                             std::span<const double> theta_deg);

}  // namespace spinor
