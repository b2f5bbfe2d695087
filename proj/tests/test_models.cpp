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

#include <gtest/gtest.h>

#include <cmath>

#include "spinor/error.hpp"
#include "spinor/models.hpp"

using namespace spinor;

namespace {

DispersiveParams sm_params(int n, double lambda, double gamma, double w0 = 0.0) {
  DispersiveParams p;
  p.atom_count = n;
  p.Lambda = lambda;
  p.Gamma = gamma;
  p.omega0_prime = w0;
  return p;
}

}  // namespace

TEST(DoubledDissipator, DoublesCoefficient) {
  const auto b = build_basis(2);
  const auto j = doubled_dissipator(0.25, spin_operators(b).sminus, "c");
  EXPECT_DOUBLE_EQ(j.rate, 0.5);
  EXPECT_THROW(doubled_dissipator(-1.0, spin_operators(b).sminus, "c"), InvalidArgument);
}

TEST(LindbladModel, Validation) {
  const auto b = build_basis(2);
  const auto s = spin_operators(b);
  EXPECT_THROW(LindbladModel(s.splus, {}), InvalidArgument);
  EXPECT_THROW(LindbladModel(s.sz, {JumpOperator{s.sminus, -1.0, "bad"}}), InvalidArgument);
  const auto other = build_basis(3);
  EXPECT_THROW(LindbladModel(s.sz, {JumpOperator{spin_operators(other).sminus, 1.0, "dim"}}), InvalidArgument);
  const LindbladModel m(s.sz, {JumpOperator{s.sminus, 0.4, "ok"}});
  const auto k = m.effective_hamiltonian();
  EXPECT_LT(k.max_abs_diff(s.sz - cplx(0, 0.2) * (s.splus * s.sminus)), 1e-14);
  EXPECT_DOUBLE_EQ(m.with_rate_scale(1.1).jumps()[0].rate, 0.44);
}

TEST(SpinMixing, BosonicFormMatchesSpinForm) {
  const int n = 6;
  const auto b = build_basis(n);
  const auto s = spin_operators(b);
  const double lambda = 1.3, w0 = 0.4;
  const auto m = spin_mixing(sm_params(n, lambda, 0.0, w0), b);
  const SparseOperator spin_form = w0 * s.sz + (lambda / (2.0 * n)) * (s.sx * s.sx + s.sy * s.sy);
  // The bosonic bracket equals S_x^2 + S_y^2 - N.
  const SparseOperator shift = (-lambda / 2.0) * SparseOperator::identity(m.dim());
  EXPECT_LT(m.hamiltonian().max_abs_diff(spin_form + shift), 1e-12);
}

TEST(SpinMixing, PoleMatrixElementAndConservation) {
  for (int n : {1, 6, 30}) {
    const auto b = build_basis(n);
    const auto m = spin_mixing(sm_params(n, 2.0, 0.1, 0.3), b);
    const CVector pole = fock_vector(b, {0, n, 0});
    EXPECT_NEAR(m.hamiltonian().expectation(pole).real(), 1.0, 1e-12);
    EXPECT_LT(commutator(m.hamiltonian(), spin_operators(b).sz).max_abs_entry(), 1e-12);
    EXPECT_TRUE(m.hamiltonian().is_hermitian());
    ASSERT_EQ(m.jumps().size(), 1u);
    EXPECT_NEAR(m.jumps()[0].rate, 0.1 / n, 1e-15);
    EXPECT_LT(m.jumps()[0].op.max_abs_diff(spin_operators(b).sminus), 1e-15);
  }
}

TEST(SpinMixing, RejectsBadInput) {
  const auto b = build_basis(4);
  EXPECT_THROW(spin_mixing(sm_params(4, 1.0, -0.1), b), InvalidArgument);
  EXPECT_THROW(spin_mixing(sm_params(5, 1.0, 0.1), b), InvalidArgument);
}

TEST(Dispersive, OneAxisLimitAndSpinMixingReduction) {
  const int n = 5;
  const auto b = build_basis(n);
  const auto s = spin_operators(b);
  EffectiveDickeParams d;
  d.atom_count = n;
  d.cavity_detuning = 20.0;
  d.lambda_minus = 1.5;
  d.lambda_plus = 1.5;
  d.spin_splitting = 0.2;
  const double kappa = 1.0;
  const auto ota = dispersive(d, kappa, b);
  // lambda+ = lambda-: no S_y^2 term, so [H, S_x] vanishes when omega_0' = 0.
  d.spin_splitting = 0.0;
  const auto ota0 = dispersive(d, kappa, b);
  EXPECT_LT(commutator(ota0.hamiltonian(), s.sx).max_abs_entry(), 1e-12);
  EXPECT_TRUE(ota.hamiltonian().is_hermitian());

  d.lambda_plus = 0.0;
  d.spin_splitting = 0.2;
  const auto disp = dispersive(d, kappa, b);
  const auto p = dispersive_params(d, kappa);
  const auto sm = spin_mixing(p, b);
  // Same dynamics; the Hamiltonians differ by the constant Lambda/2.
  const SparseOperator diff = disp.hamiltonian() - sm.hamiltonian();
  EXPECT_LT(diff.max_abs_diff((p.Lambda / 2.0) * SparseOperator::identity(disp.dim())), 1e-12);
  ASSERT_EQ(disp.jumps().size(), 1u);
  const SparseOperator l_disp = std::sqrt(disp.jumps()[0].rate) * disp.jumps()[0].op;
  const SparseOperator l_sm = std::sqrt(sm.jumps()[0].rate) * sm.jumps()[0].op;
  // Equal up to a global phase (lambda_- < 0 flips the sign).
  EXPECT_LT((l_disp.adjoint() * l_disp).max_abs_diff(l_sm.adjoint() * l_sm), 1e-12);
}

TEST(Dispersive, ZeroKappaAndRegimeWarning) {
  const auto b = build_basis(3);
  EffectiveDickeParams d;
  d.atom_count = 3;
  d.cavity_detuning = 1.0;
  d.lambda_minus = 0.5;
  const auto m = dispersive(d, 0.0, b);
  EXPECT_EQ(m.jumps()[0].rate, 0.0);
  EXPECT_FALSE(m.warnings.empty());
  d.cavity_detuning = 100.0;
  EXPECT_TRUE(dispersive(d, 0.0, b).warnings.empty());
}

TEST(FullDicke, DecoupledLimitIsStationary) {
  const auto jb = JointBasis(build_basis(3), 3);
  EffectiveDickeParams d;
  d.atom_count = 3;
  d.cavity_detuning = 2.0;
  d.spin_splitting = 0.7;
  const auto m = full_dicke(d, 0.5, jb, false);
  const auto& h = m.hamiltonian().matrix();
  for (Eigen::Index i = 0; i < h.outerSize(); ++i)
    for (SparseOperator::Matrix::InnerIterator it(h, i); it; ++it) EXPECT_EQ(it.col(), i);
  CVector vac = CVector::Zero(m.dim());
  vac[static_cast<Eigen::Index>(jb.index(0, 0))] = 1.0;
  EXPECT_LT(m.effective_hamiltonian().apply(vac).norm(), 1e-14);
  EXPECT_DOUBLE_EQ(m.jumps()[0].rate, 1.0);
}

TEST(FullDicke, CouplingMatrixElementAndConservedCharge) {
  const int n = 2;
  const auto atoms = build_basis(n);
  const JointBasis jb(atoms, 3);
  EffectiveDickeParams d;
  d.atom_count = n;
  d.cavity_detuning = 1.1;
  d.spin_splitting = 0.3;
  d.lambda_minus = 0.7;
  const auto m = full_dicke(d, 0.2, jb, false);
  const auto from = static_cast<Eigen::Index>(jb.index(atoms.index_of({0, n, 0}), 0));
  const auto to = static_cast<Eigen::Index>(jb.index(atoms.index_of({1, n - 1, 0}), 1));
  EXPECT_NEAR(std::abs(m.hamiltonian().coeff(to, from) - cplx(0.7)), 0.0, 1e-12);

  // With lambda_+ = 0 the excitation number a^dag a + S_z is conserved.
  const SparseOperator a = jb.cavity_annihilator();
  const SparseOperator charge = a.adjoint() * a + jb.embed_atom(spin_operators(atoms).sz);
  EXPECT_LT(commutator(m.hamiltonian(), charge).max_abs_entry(), 1e-12);
}

TEST(FullDicke, ResidualTermsScaleWithSplitting) {
  const auto jb = JointBasis(build_basis(2), 3);
  EffectiveDickeParams base;
  base.atom_count = 2;
  base.cavity_detuning = 1.0;
  base.lambda_minus = 0.3;
  const auto m0 = full_dicke(base, 0.1, jb, false);
  auto with = [&](double s) {
    EffectiveDickeParams d = base;
    d.omega_q = 0.1 * s;
    d.delta_q = -0.05 * s;
    d.xi_1 = 0.02 * s;
    d.xi_2 = 0.03 * s;
    d.h = -0.04 * s;
    return (full_dicke(d, 0.1, jb, true).hamiltonian() - m0.hamiltonian()).max_abs_entry();
  };
  const double a = with(1.0), b = with(0.5);
  EXPECT_GT(a, 0.0);
  EXPECT_NEAR(b / a, 0.5, 1e-12);
  EXPECT_TRUE(full_dicke(base, 0.1, jb, true).hamiltonian().is_hermitian());
}

TEST(JointBasis, Layout) {
  const JointBasis jb(build_basis(2), 4);
  EXPECT_EQ(jb.dimension(), 6u * 5u);
  EXPECT_EQ(jb.index(1, 2), 7u);
  EXPECT_THROW(JointBasis(build_basis(2), 0), InvalidArgument);
  const auto a = jb.cavity_annihilator();
  CVector v = CVector::Zero(static_cast<Eigen::Index>(jb.dimension()));
  v[static_cast<Eigen::Index>(jb.index(3, 2))] = 1.0;
  const CVector w = a.apply(v);
  EXPECT_NEAR(std::abs(w[static_cast<Eigen::Index>(jb.index(3, 1))]), std::sqrt(2.0), 1e-14);
}
