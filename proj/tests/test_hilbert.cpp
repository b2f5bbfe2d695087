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

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <vector>

#include "spinor/error.hpp"
#include "spinor/hilbert.hpp"

using namespace spinor;

namespace {

double max_diff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Product-space oracle for small N: the symmetric subspace is spanned by
// normalized sums over all orderings of a fixed multiset of single-atom
// slots; collective operators are sums of single-atom operators.
struct ProductSpace {
  int n;
  Eigen::Index dim;
  CMatrix iso;  // columns: symmetric basis states in SymmetricBasis order

  explicit ProductSpace(const SymmetricBasis& b) : n(b.atom_count()) {
    dim = 1;
    for (int k = 0; k < n; ++k) dim *= 3;
    iso = CMatrix::Zero(dim, static_cast<Eigen::Index>(b.dimension()));
    for (Eigen::Index idx = 0; idx < dim; ++idx) {
      int counts[3] = {0, 0, 0};
      Eigen::Index r = idx;
      for (int k = 0; k < n; ++k) {
        ++counts[r % 3];
        r /= 3;
      }
      const FockState s{counts[0], counts[1], counts[2]};
      iso(idx, static_cast<Eigen::Index>(b.index_of(s))) = 1.0;
    }
    for (Eigen::Index c = 0; c < iso.cols(); ++c) iso.col(c).normalize();
  }

  CMatrix collective(const Eigen::Matrix3cd& a) const {
    CMatrix out = CMatrix::Zero(dim, dim);
    Eigen::Index stride = 1;
    for (int k = 0; k < n; ++k, stride *= 3)
      for (Eigen::Index idx = 0; idx < dim; ++idx) {
        const int slot = static_cast<int>((idx / stride) % 3);
        for (int to = 0; to < 3; ++to)
          out(idx + (to - slot) * stride, idx) += a(to, slot);
      }
    return out;
  }

  CMatrix restrict(const CMatrix& full) const { return iso.adjoint() * full * iso; }
};

}  // namespace

TEST(SymmetricBasis, DimensionFormula) {
  for (int n : {1, 2, 3, 7, 120}) {
    const auto b = build_basis(n);
    EXPECT_EQ(b.dimension(), static_cast<std::size_t>((n + 1) * (n + 2) / 2));
    EXPECT_EQ(SymmetricBasis::dimension_for(n), b.dimension());
  }
  EXPECT_EQ(build_basis(120).dimension(), 7381u);
}

TEST(SymmetricBasis, OrderingAndIndex) {
  const auto b = build_basis(5);
  EXPECT_EQ(b.state(0), (FockState{0, 5, 0}));
  EXPECT_EQ(b.pole_index(), 0u);
  for (std::size_t k = 0; k < b.dimension(); ++k) {
    const auto& s = b.state(k);
    EXPECT_EQ(s.total(), 5);
    EXPECT_EQ(b.index_of(s), k);
    if (k > 0) {
      const auto& p = b.state(k - 1);
      const bool descending = p.n_zero > s.n_zero || (p.n_zero == s.n_zero && p.n_plus > s.n_plus);
      EXPECT_TRUE(descending) << k;
    }
  }
}

TEST(SymmetricBasis, RejectsBadInput) {
  EXPECT_THROW(build_basis(0), InvalidArgument);
  EXPECT_THROW(build_basis(-3), InvalidArgument);
  EXPECT_THROW(build_basis(SymmetricBasis::kMaxAtoms + 1), InvalidArgument);
  const auto b = build_basis(3);
  EXPECT_THROW(b.index_of(FockState{1, 1, 0}), InvalidArgument);
  EXPECT_FALSE(b.contains(FockState{2, 2, 0}));
  EXPECT_FALSE(b.contains(FockState{-1, 4, 0}));
}

TEST(SparseOperator, PrunesAndChecksHermiticity) {
  const auto a = SparseOperator::from_triplets(2, 2, {{0, 1, cplx(1e-16)}, {1, 1, cplx(2.0)}});
  EXPECT_EQ(a.nnz(), 1);
  EXPECT_TRUE(a.is_hermitian());
  const auto b = SparseOperator::from_triplets(2, 2, {{0, 1, cplx(1.0)}});
  EXPECT_FALSE(b.is_hermitian());
  EXPECT_THROW(b.require_hermitian("b"), InvalidArgument);
  const auto r = SparseOperator::zero(2, 3);
  EXPECT_THROW((void)r.dim(), InvalidArgument);
}

TEST(SingleAtom, SpinOneAlgebra) {
  using namespace single_atom;
  const cplx i(0, 1);
  EXPECT_LT((s_x() * s_y() - s_y() * s_x() - i * s_z()).cwiseAbs().maxCoeff(), 1e-14);
  const Eigen::Matrix3cd casimir = s_x() * s_x() + s_y() * s_y() + s_z() * s_z();
  EXPECT_LT((casimir - 2.0 * Eigen::Matrix3cd::Identity()).cwiseAbs().maxCoeff(), 1e-14);
  // Q is traceless.
  const cplx tr = quadrupole(0, 0).trace() + quadrupole(1, 1).trace() + quadrupole(2, 2).trace();
  EXPECT_LT(std::abs(tr), 1e-14);
  EXPECT_LT(std::abs(quadrupole(2, 2).trace()), 1e-14);
}

class ProductOracle : public ::testing::TestWithParam<int> {};

TEST_P(ProductOracle, CollectiveOperatorsMatchSymmetrizedProduct) {
  const auto b = build_basis(GetParam());
  const ProductSpace ps(b);
  // The embedding is an isometry.
  EXPECT_LT(max_diff(ps.iso.adjoint() * ps.iso, CMatrix::Identity(ps.iso.cols(), ps.iso.cols())), 1e-12);

  const auto s = spin_operators(b);
  const auto q = quadrupole_operators(b);
  using namespace single_atom;
  EXPECT_LT(max_diff(s.sx.to_dense(), ps.restrict(ps.collective(s_x()))), 1e-12);
  EXPECT_LT(max_diff(s.sy.to_dense(), ps.restrict(ps.collective(s_y()))), 1e-12);
  EXPECT_LT(max_diff(s.sz.to_dense(), ps.restrict(ps.collective(s_z()))), 1e-12);
  EXPECT_LT(max_diff(s.sminus.to_dense(), ps.restrict(ps.collective(s_minus()))), 1e-12);
  EXPECT_LT(max_diff(q.qyz.to_dense(), ps.restrict(ps.collective(quadrupole(1, 2)))), 1e-12);
  EXPECT_LT(max_diff(q.qxz.to_dense(), ps.restrict(ps.collective(quadrupole(0, 2)))), 1e-12);
  EXPECT_LT(max_diff(q.qzz_minus_qyy.to_dense(), ps.restrict(ps.collective(quadrupole(2, 2) - quadrupole(1, 1)))),
            1e-12);
  EXPECT_LT(max_diff(q.qzz_minus_qxx.to_dense(), ps.restrict(ps.collective(quadrupole(2, 2) - quadrupole(0, 0)))),
            1e-12);
  // Products restrict consistently because the symmetric space is invariant.
  const CMatrix sx_full = ps.collective(s_x());
  EXPECT_LT(max_diff((s.sx * s.sx).to_dense(), ps.restrict(sx_full * sx_full)), 1e-12);
}

INSTANTIATE_TEST_SUITE_P(SmallN, ProductOracle, ::testing::Values(1, 2, 3));

TEST(CollectiveOperators, Su2Commutators) {
  const auto b = build_basis(6);
  const auto s = spin_operators(b);
  const cplx i(0, 1);
  EXPECT_LT(commutator(s.sx, s.sy).max_abs_diff(i * s.sz), 1e-12);
  EXPECT_LT(commutator(s.sy, s.sz).max_abs_diff(i * s.sx), 1e-12);
  EXPECT_LT(commutator(s.sz, s.sx).max_abs_diff(i * s.sy), 1e-12);
  EXPECT_LT(commutator(s.sz, s.splus).max_abs_diff(s.splus), 1e-12);

  // {S_x, Q_yz, (Q_zz - Q_yy)/4 ... } closes as su(2) with J = (S_x, Q_yz, D/2)/2.
  const auto q = quadrupole_operators(b);
  const SparseOperator jx = 0.5 * s.sx, jy = 0.5 * q.qyz, jz = 0.25 * q.qzz_minus_qyy;
  EXPECT_LT(commutator(jx, jy).max_abs_diff(i * jz), 1e-12);
  EXPECT_LT(commutator(jy, jz).max_abs_diff(i * jx), 1e-12);
  EXPECT_LT(commutator(jz, jx).max_abs_diff(i * jy), 1e-12);
}

TEST(CollectiveOperators, Hermiticity) {
  const auto b = build_basis(10);
  const auto s = spin_operators(b);
  const auto q = quadrupole_operators(b);
  for (const auto* op : {&s.sx, &s.sy, &s.sz, &q.qyz, &q.qxz, &q.qzz_minus_qyy, &q.qzz_minus_qxx})
    EXPECT_TRUE(op->is_hermitian());
  EXPECT_LT(s.splus.adjoint().max_abs_diff(s.sminus), 1e-14);
}

TEST(CollectiveOperators, PoleStateEigenvalues) {
  for (int n : {1, 4, 40}) {
    const auto b = build_basis(n);
    const CVector pole = fock_vector(b, {0, n, 0});
    const auto q = quadrupole_operators(b);
    EXPECT_LT((q.qzz_minus_qyy.apply(pole) + 2.0 * n * pole).norm(), 1e-12);
    const auto s = spin_operators(b);
    EXPECT_NEAR(s.sz.expectation(pole).real(), 0.0, 1e-14);
    const CVector south = fock_vector(b, {n, 0, 0});
    EXPECT_NEAR(s.sz.expectation(south).real(), -n, 1e-12);
  }
}

TEST(CollectiveOperators, QzzMinusQyyBosonicForm) {
  const auto b = build_basis(5);
  const auto q = quadrupole_operators(b);
  const SparseOperator expected = -2.0 * number(b, Mode::zero) + number(b, Mode::plus) + number(b, Mode::minus) +
                                  transition(b, Mode::plus, Mode::minus) + transition(b, Mode::minus, Mode::plus);
  EXPECT_LT(q.qzz_minus_qyy.max_abs_diff(expected), 1e-12);
}

TEST(LadderOperators, RaisingIdentity) {
  const int n = 7;
  const auto b = build_basis(n);
  const auto lad = ladder_operators(b);
  const auto s = spin_operators(b);
  const auto q = quadrupole_operators(b);
  const cplx i(0, 1);
  EXPECT_LT(lad.plus.max_abs_diff(s.sx + i * q.qyz), 1e-14);
  EXPECT_LT(lad.minus.max_abs_diff(lad.plus.adjoint()), 1e-14);

  // sqrt(2) a0 (a+^dag + a-^dag), assembled from sector maps.
  const auto a0 = annihilator(b, Mode::zero);
  const auto bm = build_basis(n - 1);
  const auto up_p = creator(bm, Mode::plus), up_m = creator(bm, Mode::minus);
  const SparseOperator expected = std::sqrt(2.0) * ((up_p.map + up_m.map) * a0.map);
  EXPECT_LT(lad.plus.max_abs_diff(expected), 1e-12);

  // S+|0,N,0> = sqrt(2N)(|0,N-1,1> + |1,N-1,0>).
  const CVector pole = fock_vector(b, {0, n, 0});
  const CVector target =
      std::sqrt(2.0 * n) * (fock_vector(b, {0, n - 1, 1}) + fock_vector(b, {1, n - 1, 0}));
  EXPECT_LT((lad.plus.apply(pole) - target).norm(), 1e-12);
}

TEST(SectorMaps, BosonicAction) {
  const auto b = build_basis(3);
  const auto a_plus = annihilator(b, Mode::plus);
  EXPECT_EQ(a_plus.source_atoms, 3);
  EXPECT_EQ(a_plus.target_atoms, 2);
  const auto b2 = build_basis(2);
  const CVector out = a_plus.map.apply(fock_vector(b, {0, 1, 2}));
  EXPECT_LT((out - std::sqrt(2.0) * fock_vector(b2, {0, 1, 1})).norm(), 1e-14);
  // a^dag a restricted back to N reproduces the number operator.
  const auto up = creator(b2, Mode::plus);
  EXPECT_LT((up.map * a_plus.map).max_abs_diff(number(b, Mode::plus)), 1e-12);
  // Annihilating the only atom lands in the N=0 sector.
  const auto b1 = build_basis(1);
  const auto a0 = annihilator(b1, Mode::zero);
  EXPECT_EQ(a0.map.rows(), 1);
}

TEST(CollectiveOperators, CasimirOnSymmetricSpace) {
  const int n = 9;
  const auto b = build_basis(n);
  const auto s = spin_operators(b);
  // Symmetric states of spin-1 atoms carry S^2 = S(S+1), S = N, N-2, ...; the
  // operator N(N+1) - S^2 is therefore positive semidefinite.
  const CMatrix s2 = (s.sx * s.sx + s.sy * s.sy + s.sz * s.sz).to_dense();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(s2);
  EXPECT_LE(es.eigenvalues().maxCoeff(), n * (n + 1) + 1e-9);
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double l = es.eigenvalues()[k];
    const double spin = (-1.0 + std::sqrt(1.0 + 4.0 * l)) / 2.0;
    EXPECT_NEAR(spin, std::round(spin), 1e-8);
    EXPECT_EQ(static_cast<int>(std::lround(spin)) % 2, n % 2);
  }
}
