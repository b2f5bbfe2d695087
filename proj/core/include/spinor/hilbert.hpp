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

// Symmetric three-mode Fock space of N spin-1 atoms and the sparse operators
// acting on it. Everything here is immutable once built, so operators can be
// shared freely between trajectory workers.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <compare>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace spinor {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Zeeman sublevel m of an F=1 atom.
enum class Mode : int { minus = -1, zero = 0, plus = 1 };

/// Position of a mode in single-atom 3x3 matrices: m=-1 -> 0, m=0 -> 1,
/// m=+1 -> 2.
constexpr int mode_slot(Mode m) { return static_cast<int>(m) + 1; }

struct FockState {
  int n_minus = 0;
  int n_zero = 0;
  int n_plus = 0;

  int total() const { return n_minus + n_zero + n_plus; }
  int& occupation(Mode m);
  int occupation(Mode m) const;

  auto operator<=>(const FockState&) const = default;
};

/// Ordered enumeration of all three-mode Fock states with fixed total N.
///
/// Ordering is lexicographic descending in (n_zero, n_plus), so index 0 is
/// always |0,N,0> and indices are stable across runs and platforms.
class SymmetricBasis {
 public:
  static constexpr int kMaxAtoms = 400;

  /// Builds the N-atom sector. N=0 is accepted here only so that sector maps
  /// out of N=1 have a target; use build_basis() for user-facing input.
  explicit SymmetricBasis(int n_atoms);

  int atom_count() const { return n_atoms_; }
  std::size_t dimension() const { return states_.size(); }
  const FockState& state(std::size_t k) const { return states_.at(k); }
  std::span<const FockState> states() const { return states_; }

  bool contains(const FockState& s) const;
  /// Dense index of s. Throws InvalidArgument if s is not in this sector.
  std::size_t index_of(const FockState& s) const;

  /// Index of |0,N,0>.
  std::size_t pole_index() const { return 0; }

  static std::size_t dimension_for(int n_atoms) {
    const auto n = static_cast<std::size_t>(n_atoms);
    return (n + 1) * (n + 2) / 2;
  }

 private:
  int n_atoms_;
  std::vector<FockState> states_;
};

/// Validated constructor for 1 <= N <= SymmetricBasis::kMaxAtoms.
SymmetricBasis build_basis(int n_atoms);

/// Immutable complex sparse matrix with row-major compressed storage.
/// Entries with |x| <= kPruneThreshold are dropped on construction.
class SparseOperator {
 public:
  using Matrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
  using Triplet = Eigen::Triplet<cplx>;

  static constexpr double kPruneThreshold = 1e-15;
  static constexpr double kHermitianTolerance = 1e-12;

  SparseOperator() = default;
  explicit SparseOperator(Matrix m);

  static SparseOperator from_triplets(Eigen::Index rows, Eigen::Index cols,
                                      const std::vector<Triplet>& entries);
  static SparseOperator identity(Eigen::Index dim);
  static SparseOperator zero(Eigen::Index rows, Eigen::Index cols);

  Eigen::Index rows() const { return m_.rows(); }
  Eigen::Index cols() const { return m_.cols(); }
  /// Square dimension; throws InvalidArgument for rectangular maps.
  Eigen::Index dim() const;
  Eigen::Index nnz() const { return m_.nonZeros(); }
  bool is_square() const { return m_.rows() == m_.cols(); }

  const Matrix& matrix() const { return m_; }
  cplx coeff(Eigen::Index row, Eigen::Index col) const;
  /// Largest number of stored entries in any row.
  Eigen::Index max_row_nnz() const;

  CVector apply(const CVector& psi) const;
  cplx expectation(const CVector& psi) const;
  SparseOperator adjoint() const;
  CMatrix to_dense() const;

  /// max |A_ij - A_ji^*|.
  double hermiticity_error() const;
  double max_abs_entry() const;
  /// True when max|A - A^dag| < kHermitianTolerance * max(1, max|A_ij|).
  bool is_hermitian() const;
  /// Throws InvalidArgument naming `what` if the operator is not hermitian.
  const SparseOperator& require_hermitian(std::string_view what) const;

  /// max |A_ij - B_ij| over the union of both patterns.
  double max_abs_diff(const SparseOperator& other) const;

  friend SparseOperator operator+(const SparseOperator& a, const SparseOperator& b);
  friend SparseOperator operator-(const SparseOperator& a, const SparseOperator& b);
  friend SparseOperator operator*(const SparseOperator& a, const SparseOperator& b);
  friend SparseOperator operator*(cplx s, const SparseOperator& a);
  friend SparseOperator operator*(double s, const SparseOperator& a) { return cplx(s, 0.0) * a; }

 private:
  Matrix m_;
};

SparseOperator commutator(const SparseOperator& a, const SparseOperator& b);
SparseOperator anticommutator(const SparseOperator& a, const SparseOperator& b);

/// Single-atom spin-1 matrices in the slot order of mode_slot().
namespace single_atom {
Eigen::Matrix3cd s_plus();
Eigen::Matrix3cd s_minus();
Eigen::Matrix3cd s_x();
Eigen::Matrix3cd s_y();
Eigen::Matrix3cd s_z();
/// Q_ij = S_i S_j + S_j S_i - (4/3) delta_ij with i, j in {0:x, 1:y, 2:z}.
Eigen::Matrix3cd quadrupole(int i, int j);
}  // namespace single_atom

/// Collective version of a single-atom operator: sum_{m,n} A_mn a_m^dag a_n.
SparseOperator one_body(const SymmetricBasis& basis, const Eigen::Matrix3cd& single);

/// a_to^dag a_from within the fixed-N sector.
SparseOperator transition(const SymmetricBasis& basis, Mode to, Mode from);
SparseOperator number(const SymmetricBasis& basis, Mode m);

/// Rectangular map between atom-number sectors. Only used to construct and
/// cross-check number-conserving operators; models never see these.
struct SectorMap {
  int source_atoms = 0;
  int target_atoms = 0;
  SparseOperator map;  // rows: target sector, cols: source sector
};

/// a_m : N -> N-1.
SectorMap annihilator(const SymmetricBasis& basis, Mode m);
/// a_m^dag : N -> N+1.
SectorMap creator(const SymmetricBasis& basis, Mode m);

struct SpinOperators {
  SparseOperator sx, sy, sz, splus, sminus;
};

struct QuadrupoleOperators {
  SparseOperator qyz, qxz, qzz_minus_qyy, qzz_minus_qxx;
};

/// S_x + i Q_yz and its adjoint: raising/lowering within the
/// {S_x, Q_yz, Q_zz - Q_yy} SU(2) subalgebra.
struct LadderOperators {
  SparseOperator plus, minus;
};

SpinOperators spin_operators(const SymmetricBasis& basis);
QuadrupoleOperators quadrupole_operators(const SymmetricBasis& basis);
LadderOperators ladder_operators(const SymmetricBasis& basis);

/// Basis vector |n_-, n_0, n_+>.
CVector fock_vector(const SymmetricBasis& basis, const FockState& s);

}  // namespace spinor
