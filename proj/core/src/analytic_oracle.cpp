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

#include "spinor/analytic_oracle.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "spinor/error.hpp"

namespace spinor {

double xi2_analytic(const OracleParams& p) {
  if (p.Gamma < 0.0) throw InvalidArgument("Gamma must be nonnegative");
  const double c = std::cos(p.theta), s = std::sin(p.theta);
  const double u = c + 2.0 * p.Lambda * p.t * s;
  const double v = (1.0 + 2.0 * p.Gamma * p.t) * s;
  return u * u + v * v;
}

ThetaMinimum xi2_analytic_min(double Lambda, double Gamma, double t) {
  if (Gamma < 0.0) throw InvalidArgument("Gamma must be nonnegative");
  const double a = 2.0 * Lambda * t, b = 1.0 + 2.0 * Gamma * t;
  Eigen::Matrix2d m;
  m << 1.0, a, a, a * a + b * b;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
  const Eigen::Vector2d v = es.eigenvectors().col(0);
  double th = std::atan2(v[1], v[0]);
  th = std::fmod(th, std::numbers::pi);
  if (th < 0) th += std::numbers::pi;
  if (th >= std::numbers::pi) th -= std::numbers::pi;
  return {th, es.eigenvalues()[0]};
}

double LangevinMoments::xi2(double theta) const {
  using namespace std::complex_literals;
  const double c = std::cos(theta), s = std::sin(theta);
  // Quadrature (A + A^dag) cos th + i (B - B^dag) sin th, normalized so
  // that vacuum gives 1.
  const Eigen::Vector4cd x(c, c, 1i * s, -1i * s);
  return 0.5 * (x.transpose() * second * x)(0, 0).real();
}

double LangevinMoments::var_sx_over_n() const { return xi2(0.0); }

LangevinMoments langevin_moments(double Lambda, double Gamma, double t) {
  if (Gamma < 0.0) throw InvalidArgument("Gamma must be nonnegative");
  // Initial operators (A0, A0^dag, B0, B0^dag, W, W^dag) and their vacuum
  // products G(i, j) = <X_i X_j>.
  Eigen::Matrix<cplx, 6, 6> g = Eigen::Matrix<cplx, 6, 6>::Zero();
  g(0, 1) = 1.0;
  g(1, 0) = 1.0;
  g(0, 3) = 1.0;
  g(1, 2) = -1.0;
  g(2, 1) = 1.0;
  g(3, 0) = -1.0;
  g(2, 3) = 1.0;
  g(3, 2) = 1.0;
  g(4, 5) = t;

  const cplx c = 2.0 * cplx(Gamma, Lambda) * t;
  const double k = 2.0 * std::sqrt(2.0 * Gamma);
  Eigen::Matrix<cplx, 4, 6> tr = Eigen::Matrix<cplx, 4, 6>::Zero();
  tr(0, 0) = 1.0;
  tr(1, 1) = 1.0;
  tr(2, 2) = 1.0;
  tr(2, 0) = -c;
  tr(2, 4) = -k;
  tr(3, 3) = 1.0;
  tr(3, 1) = -std::conj(c);
  tr(3, 5) = -k;

  LangevinMoments m;
  m.second = tr * g * tr.transpose();
  return m;
}

OracleHeatmap oracle_heatmap(double gamma_over_lambda, std::span<const double> lambda_t,
                             std::span<const double> theta_deg) {
  if (gamma_over_lambda < 0.0) throw InvalidArgument("Gamma/Lambda must be nonnegative");
  OracleHeatmap h;
  h.gamma_over_lambda = gamma_over_lambda;
  h.lambda_t.assign(lambda_t.begin(), lambda_t.end());
  h.theta_deg.assign(theta_deg.begin(), theta_deg.end());
  h.xi2.resize(static_cast<Eigen::Index>(lambda_t.size()), static_cast<Eigen::Index>(theta_deg.size()));
  for (std::size_t i = 0; i < lambda_t.size(); ++i)
    for (std::size_t j = 0; j < theta_deg.size(); ++j)
      h.xi2(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          xi2_analytic({1.0, gamma_over_lambda, lambda_t[i], theta_deg[j] * std::numbers::pi / 180.0});
  return h;
}

}  // namespace spinor
