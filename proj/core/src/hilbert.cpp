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

#include "spinor/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spinor/error.hpp"

namespace spinor {

int& FockState::occupation(Mode m) {
  switch (m) {
    case Mode::minus: return n_minus;
    case Mode::zero: return n_zero;
    case Mode::plus: return n_plus;
  }
  return n_zero;
}

int FockState::occupation(Mode m) const {
  return const_cast<FockState&>(*this).occupation(m);
}

SymmetricBasis::SymmetricBasis(int n_atoms) : n_atoms_(n_atoms) {
  if (n_atoms < 0 || n_atoms > kMaxAtoms) {
    throw InvalidArgument("atom count " + std::to_string(n_atoms) + " outside [0, " +
                          std::to_string(kMaxAtoms) + "]");
  }
  states_.reserve(dimension_for(n_atoms));
  for (int n0 = n_atoms; n0 >= 0; --n0) {
    for (int np = n_atoms - n0; np >= 0; --np) {
      states_.push_back({n_atoms - n0 - np, n0, np});
    }
  }
}

bool SymmetricBasis::contains(const FockState& s) const {
  return s.n_minus >= 0 && s.n_zero >= 0 && s.n_plus >= 0 && s.total() == n_atoms_;
}

std::size_t SymmetricBasis::index_of(const FockState& s) const {
  if (!contains(s)) {
    throw InvalidArgument("Fock state not in the N=" + std::to_string(n_atoms_) + " sector");
  }
  // States with larger n_zero come first: sum_{j=1}^{N-n0} j of them.
  const auto gap = static_cast<std::size_t>(n_atoms_ - s.n_zero);
  return gap * (gap + 1) / 2 + (gap - static_cast<std::size_t>(s.n_plus));
}

SymmetricBasis build_basis(int n_atoms) {
  if (n_atoms < 1 || n_atoms > SymmetricBasis::kMaxAtoms) {
    throw InvalidArgument("N must lie in [1, " + std::to_string(SymmetricBasis::kMaxAtoms) +
                          "], got " + std::to_string(n_atoms));
  }
  return SymmetricBasis(n_atoms);
}

// ---------------------------------------------------------------------------

SparseOperator::SparseOperator(Matrix m) : m_(std::move(m)) {
  m_.prune([](Eigen::Index, Eigen::Index, const cplx& v) {
    return std::abs(v) > kPruneThreshold;
  });
  m_.makeCompressed();
}

SparseOperator SparseOperator::from_triplets(Eigen::Index rows, Eigen::Index cols,
                                             const std::vector<Triplet>& entries) {
  Matrix m(rows, cols);
  m.setFromTriplets(entries.begin(), entries.end());
  return SparseOperator(std::move(m));
}

SparseOperator SparseOperator::identity(Eigen::Index dim) {
  Matrix m(dim, dim);
  m.setIdentity();
  return SparseOperator(std::move(m));
}

SparseOperator SparseOperator::zero(Eigen::Index rows, Eigen::Index cols) {
  return SparseOperator(Matrix(rows, cols));
}

Eigen::Index SparseOperator::dim() const {
  if (!is_square()) throw InvalidArgument("dim() of a rectangular operator");
  return m_.rows();
}

cplx SparseOperator::coeff(Eigen::Index row, Eigen::Index col) const {
  return m_.coeff(row, col);
}

Eigen::Index SparseOperator::max_row_nnz() const {
  Eigen::Index best = 0;
  for (Eigen::Index r = 0; r < m_.outerSize(); ++r) {
    best = std::max<Eigen::Index>(best, m_.outerIndexPtr()[r + 1] - m_.outerIndexPtr()[r]);
  }
  return best;
}

CVector SparseOperator::apply(const CVector& psi) const { return m_ * psi; }

cplx SparseOperator::expectation(const CVector& psi) const { return psi.dot(m_ * psi); }

SparseOperator SparseOperator::adjoint() const { return SparseOperator(Matrix(m_.adjoint())); }

CMatrix SparseOperator::to_dense() const { return CMatrix(m_); }

double SparseOperator::hermiticity_error() const {
  if (!is_square()) return std::numeric_limits<double>::infinity();
  const Matrix diff = m_ - Matrix(m_.adjoint());
  double worst = 0.0;
  for (Eigen::Index r = 0; r < diff.outerSize(); ++r) {
    for (Matrix::InnerIterator it(diff, r); it; ++it) worst = std::max(worst, std::abs(it.value()));
  }
  return worst;
}

double SparseOperator::max_abs_entry() const {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < m_.nonZeros(); ++k) worst = std::max(worst, std::abs(m_.valuePtr()[k]));
  return worst;
}

bool SparseOperator::is_hermitian() const {
  return hermiticity_error() < kHermitianTolerance * std::max(1.0, max_abs_entry());
}

const SparseOperator& SparseOperator::require_hermitian(std::string_view what) const {
  if (!is_hermitian()) {
    throw InvalidArgument(std::string(what) + " is not hermitian (max|A-A^dag| = " +
                          std::to_string(hermiticity_error()) + ")");
  }
  return *this;
}

double SparseOperator::max_abs_diff(const SparseOperator& other) const {
  if (rows() != other.rows() || cols() != other.cols()) {
    throw InvalidArgument("max_abs_diff: shape mismatch");
  }
  const Matrix diff = m_ - other.m_;
  double worst = 0.0;
  for (Eigen::Index k = 0; k < diff.nonZeros(); ++k) worst = std::max(worst, std::abs(diff.valuePtr()[k]));
  return worst;
}

SparseOperator operator+(const SparseOperator& a, const SparseOperator& b) {
  return SparseOperator(SparseOperator::Matrix(a.m_ + b.m_));
}

SparseOperator operator-(const SparseOperator& a, const SparseOperator& b) {
  return SparseOperator(SparseOperator::Matrix(a.m_ - b.m_));
}

SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) {
  return SparseOperator(SparseOperator::Matrix(a.m_ * b.m_));
}

SparseOperator operator*(cplx s, const SparseOperator& a) {
  return SparseOperator(SparseOperator::Matrix(s * a.m_));
}

SparseOperator commutator(const SparseOperator& a, const SparseOperator& b) { return a * b - b * a; }

SparseOperator anticommutator(const SparseOperator& a, const SparseOperator& b) { return a * b + b * a; }

// ---------------------------------------------------------------------------

namespace single_atom {

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

Eigen::Matrix3cd s_plus() {
  Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
  m(mode_slot(Mode::zero), mode_slot(Mode::minus)) = kSqrt2;
  m(mode_slot(Mode::plus), mode_slot(Mode::zero)) = kSqrt2;
  return m;
}

Eigen::Matrix3cd s_minus() { return s_plus().adjoint(); }

Eigen::Matrix3cd s_x() { return 0.5 * (s_plus() + s_minus()); }

Eigen::Matrix3cd s_y() { return (s_plus() - s_minus()) / cplx(0.0, 2.0); }

Eigen::Matrix3cd s_z() {
  Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
  m(mode_slot(Mode::plus), mode_slot(Mode::plus)) = 1.0;
  m(mode_slot(Mode::minus), mode_slot(Mode::minus)) = -1.0;
  return m;
}

Eigen::Matrix3cd quadrupole(int i, int j) {
  const Eigen::Matrix3cd s[3] = {s_x(), s_y(), s_z()};
  Eigen::Matrix3cd q = s[i] * s[j] + s[j] * s[i];
  if (i == j) q -= (4.0 / 3.0) * Eigen::Matrix3cd::Identity();
  return q;
}

}  // namespace single_atom

namespace {

constexpr Mode kModes[3] = {Mode::minus, Mode::zero, Mode::plus};

}  // namespace

SparseOperator one_body(const SymmetricBasis& basis, const Eigen::Matrix3cd& single) {
  std::vector<SparseOperator::Triplet> entries;
  entries.reserve(basis.dimension() * 5);
  const auto states = basis.states();
  for (std::size_t col = 0; col < states.size(); ++col) {
    for (Mode from : kModes) {
      const int n_from = states[col].occupation(from);
      if (n_from == 0) continue;
      for (Mode to : kModes) {
        const cplx a = single(mode_slot(to), mode_slot(from));
        if (a == cplx(0.0)) continue;
        FockState target = states[col];
        double amp = std::sqrt(static_cast<double>(n_from));
        --target.occupation(from);
        amp *= std::sqrt(static_cast<double>(target.occupation(to) + 1));
        ++target.occupation(to);
        entries.emplace_back(static_cast<Eigen::Index>(basis.index_of(target)),
                             static_cast<Eigen::Index>(col), a * amp);
      }
    }
  }
  const auto d = static_cast<Eigen::Index>(basis.dimension());
  return SparseOperator::from_triplets(d, d, entries);
}

SparseOperator transition(const SymmetricBasis& basis, Mode to, Mode from) {
  Eigen::Matrix3cd single = Eigen::Matrix3cd::Zero();
  single(mode_slot(to), mode_slot(from)) = 1.0;
  return one_body(basis, single);
}

SparseOperator number(const SymmetricBasis& basis, Mode m) { return transition(basis, m, m); }

namespace {

SectorMap shift_map(const SymmetricBasis& basis, Mode m, int delta) {
  const SymmetricBasis target(basis.atom_count() + delta);
  std::vector<SparseOperator::Triplet> entries;
  const auto states = basis.states();
  for (std::size_t col = 0; col < states.size(); ++col) {
    FockState t = states[col];
    const int n = t.occupation(m);
    if (delta < 0 && n == 0) continue;
    const double amp = std::sqrt(static_cast<double>(delta < 0 ? n : n + 1));
    t.occupation(m) += delta;
    entries.emplace_back(static_cast<Eigen::Index>(target.index_of(t)),
                         static_cast<Eigen::Index>(col), amp);
  }
  return {basis.atom_count(), target.atom_count(),
          SparseOperator::from_triplets(static_cast<Eigen::Index>(target.dimension()),
                                        static_cast<Eigen::Index>(basis.dimension()), entries)};
}

}  // namespace

SectorMap annihilator(const SymmetricBasis& basis, Mode m) { return shift_map(basis, m, -1); }

SectorMap creator(const SymmetricBasis& basis, Mode m) {
  if (basis.atom_count() >= SymmetricBasis::kMaxAtoms) {
    throw InvalidArgument("creator: target sector exceeds the atom ceiling");
  }
  return shift_map(basis, m, +1);
}

SpinOperators spin_operators(const SymmetricBasis& basis) {
  const double r2 = std::sqrt(2.0);
  SparseOperator sminus =
      r2 * (transition(basis, Mode::minus, Mode::zero) + transition(basis, Mode::zero, Mode::plus));
  SparseOperator splus = sminus.adjoint();
  SparseOperator sx = 0.5 * (splus + sminus);
  SparseOperator sy = cplx(0.0, -0.5) * (splus - sminus);
  SparseOperator sz = number(basis, Mode::plus) - number(basis, Mode::minus);
  return {std::move(sx), std::move(sy), std::move(sz), std::move(splus), std::move(sminus)};
}

QuadrupoleOperators quadrupole_operators(const SymmetricBasis& basis) {
  // Explicit bosonic form: -2 n0 + n+ + n- + a+^dag a- + a-^dag a+.
  SparseOperator dq_yy = -2.0 * number(basis, Mode::zero) + number(basis, Mode::plus) +
                         number(basis, Mode::minus) + transition(basis, Mode::plus, Mode::minus) +
                         transition(basis, Mode::minus, Mode::plus);
  SparseOperator qyz = one_body(basis, single_atom::quadrupole(1, 2));
  SparseOperator qxz = one_body(basis, single_atom::quadrupole(0, 2));
  SparseOperator dq_xx =
      one_body(basis, single_atom::quadrupole(2, 2) - single_atom::quadrupole(0, 0));
  return {std::move(qyz), std::move(qxz), std::move(dq_yy), std::move(dq_xx)};
}

LadderOperators ladder_operators(const SymmetricBasis& basis) {
  const auto s = spin_operators(basis);
  const auto q = quadrupole_operators(basis);
  SparseOperator plus = s.sx + cplx(0.0, 1.0) * q.qyz;
  SparseOperator minus = plus.adjoint();
  return {std::move(plus), std::move(minus)};
}

CVector fock_vector(const SymmetricBasis& basis, const FockState& s) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(basis.dimension()));
  v(static_cast<Eigen::Index>(basis.index_of(s))) = 1.0;
  return v;
}

}  // namespace spinor
