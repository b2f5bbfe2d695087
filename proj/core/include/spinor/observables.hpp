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

// Moments of the collective spin and quadrupole operators, the
// spin-nematic squeezing parameter and its optimization over the quadrature
// angle, and power-law fits of peak squeezing against atom number.

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spinor/evolution.hpp"
#include "spinor/hilbert.hpp"
#include "spinor/models.hpp"

namespace spinor {

/// The two SU(2) squeezing subspaces: {S_x, Q_yz, Q_zz-Q_yy} and
/// {S_y, Q_xz, Q_zz-Q_xx}.
enum class Subspace { sx_qyz, sy_qxz };

struct Moments {
  static constexpr std::size_t kCount = 18;

  int atom_count = 0;
  double sx = 0, sy = 0, sz = 0, qyz = 0, qxz = 0, dq_yy = 0, dq_xx = 0;
  double sx2 = 0, qyz2 = 0, sx_qyz = 0;  // sx_qyz = <{S_x, Q_yz}>/2
  double sy2 = 0, qxz2 = 0, sy_qxz = 0;
  double n_minus = 0, n_zero = 0, n_plus = 0;
  double splus_sminus = 0;  // <S+ S->, drives the collective decay rate
  double photons = 0;       // <a^dag a>, zero without a cavity mode

  static const std::array<std::string, kCount>& names();
  std::array<double, kCount> pack() const;
  static Moments unpack(std::span<const double> values, int atom_count);
};

/// Evaluates Moments by sparse operator application. Works on the atomic
/// symmetric basis or on the atom x photon product basis.
class MomentEvaluator final : public ObservableEvaluator {
 public:
  explicit MomentEvaluator(const SymmetricBasis& basis);
  explicit MomentEvaluator(const JointBasis& basis);

  int atom_count() const { return n_atoms_; }
  Eigen::Index dim() const { return dim_; }

  Moments evaluate(const CVector& psi, std::span<const Eigen::Index> support);
  Moments evaluate(const StateVector& psi);
  Moments evaluate(const DensityMatrix& rho) const;

  std::vector<std::string> names() const override;
  void evaluate(const CVector& psi, std::span<const Eigen::Index> support, std::span<double> out) override;
  std::unique_ptr<ObservableEvaluator> clone() const override;

 private:
  using ColMat = Eigen::SparseMatrix<cplx, Eigen::ColMajor>;
  void init(const SpinOperators& s, const QuadrupoleOperators& q, std::array<SparseOperator, 3> numbers,
            SparseOperator photons);
  void apply(const ColMat& op, const CVector& psi, std::span<const Eigen::Index> support, CVector& out);
  void clear_touched();

  int n_atoms_ = 0;
  Eigen::Index dim_ = 0;
  // Row-major operators for <psi|O|psi> and Tr(O rho).
  SparseOperator sz_, dq_yy_, dq_xx_, n_minus_, n_zero_, n_plus_, photons_;
  SparseOperator sx_, sy_, qyz_, qxz_, sminus_;
  // Column-major copies for scatter application.
  ColMat sx_c_, sy_c_, qyz_c_, qxz_c_, sminus_c_;
  // Workspace.
  CVector w1_, w2_;
  std::vector<Eigen::Index> touched_;
  std::vector<char> mark_;
};

/// Convenience: builds the evaluator for `basis` and evaluates once.
Moments moments(const SymmetricBasis& basis, const StateVector& psi);
Moments moments(const SymmetricBasis& basis, const DensityMatrix& rho);

/// Variances, symmetrized covariance and the SU(2) z-operator mean of the
/// selected subspace.
struct QuadratureStats {
  double var_a = 0, var_b = 0, cov = 0, denominator = 0;
};
QuadratureStats quadrature_stats(const Moments& m, Subspace subspace = Subspace::sx_qyz);

/// |<Q_zz - Q_yy>| below this is treated as degenerate: 1e-6 * 2N.
double denominator_guard(int atom_count);

/// 2 Var(A cos(theta) + B sin(theta)) / |<D>|; theta in radians.
/// Returns NaN when the denominator is below denominator_guard().
double xi2(const Moments& m, double theta, Subspace subspace = Subspace::sx_qyz);

double to_db(double linear);

struct ThetaOptions {
  std::size_t grid_size = 720;  // points over [0, pi)
  double refine_tol = 1e-8;     // radians
};

struct ThetaMinimum {
  double theta = 0.0;  // radians in [0, pi)
  double value = 0.0;
};

/// Global minimum of a pi-periodic function: uniform grid then
/// golden-section refinement around the best grid point. Exact ties keep the
/// smallest grid angle.
ThetaMinimum minimize_periodic(const std::function<double(double)>& f, const ThetaOptions& opt = {});

struct SqueezingResult {
  bool defined = false;  // false when the denominator guard tripped
  double xi2_min = 0.0, theta_min = 0.0;  // radians
  double xi2_max = 0.0, theta_max = 0.0;  // anti-squeezed quadrature
  double closed_form_xi2 = 0.0, closed_form_theta = 0.0;
};

SqueezingResult optimize_theta(const Moments& m, Subspace subspace = Subspace::sx_qyz, const ThetaOptions& opt = {});

/// Closed form: smallest eigenvalue of (2/|D|) [[Va, C], [C, Vb]] and the
/// angle of its eigenvector, mapped to [0, pi).
ThetaMinimum closed_form_minimum(const QuadratureStats& q);

struct SqueezingRecord {
  double time = 0.0;
  bool defined = false;
  double xi2_min = 0.0;
  double theta_opt_deg = 0.0;
  std::vector<double> xi2_of_theta;  // on the optimization grid, may be empty
  double n_minus = 0, n_zero = 0, n_plus = 0;
  double mean_qzz_minus_qyy = 0;
  QuadratureStats stats;
};

SqueezingRecord squeezing_record(double time, const Moments& m, const ThetaOptions& opt = {},
                                 bool keep_curve = false, Subspace subspace = Subspace::sx_qyz);

struct ScalingFit {
  double exponent = 0.0;
  double prefactor = 0.0;  // c in xi2 = c N^exponent
  double exponent_se = 0.0;
  double ci_low = 0.0, ci_high = 0.0;
  double confidence = 0.95;
  double r_squared = 1.0;
  std::size_t points = 0;
};

/// Least-squares fit of log(xi2) against log(N). Needs at least four
/// distinct N and positive xi2; throws InvalidArgument otherwise.
ScalingFit scaling_fit(std::span<const std::pair<int, double>> peak_xi2_by_n, double confidence = 0.95);

}  // namespace spinor
