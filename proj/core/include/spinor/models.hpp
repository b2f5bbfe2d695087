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

// Hamiltonians and jump operators for the three model tiers: the full spin-1
// Dicke model (atoms x cavity), the general dispersive model, and the
// spin-mixing model.
//
// Every model is expressed in the standard Lindblad form
//   drho/dt = -i[H, rho] + sum_k rate_k (C_k rho C_k^dag - 1/2 {C_k^dag C_k, rho}).
// Physics references write the dissipator as c D[C] with
// D[C]rho = 2 C rho C^dag - {C^dag C, rho}; doubled_dissipator() is the single
// place where that factor of two is absorbed into the rate.

#include <string>
#include <vector>

#include "spinor/hilbert.hpp"
#include "spinor/params.hpp"

namespace spinor {

struct JumpOperator {
  SparseOperator op;  // C_k
  double rate = 0.0;  // L_k = sqrt(rate) C_k
  std::string label;
};

/// Converts c D[C] (factor-two convention) to a standard-form jump.
JumpOperator doubled_dissipator(double coefficient, SparseOperator op, std::string label);

class LindbladModel {
 public:
  /// Throws InvalidArgument if H is not hermitian, a rate is negative, or
  /// operator dimensions disagree.
  LindbladModel(SparseOperator hamiltonian, std::vector<JumpOperator> jumps, std::string label = {});

  const SparseOperator& hamiltonian() const { return hamiltonian_; }
  const std::vector<JumpOperator>& jumps() const { return jumps_; }
  Eigen::Index dim() const { return hamiltonian_.dim(); }
  const std::string& label() const { return label_; }

  /// H - (i/2) sum_k rate_k C_k^dag C_k.
  SparseOperator effective_hamiltonian() const;

  /// Copy with every rate multiplied by `factor`; used for fault injection.
  LindbladModel with_rate_scale(double factor) const;

  std::vector<std::string> warnings;

 private:
  SparseOperator hamiltonian_;
  std::vector<JumpOperator> jumps_;
  std::string label_;
};

/// Atoms x truncated cavity mode; photon number is the fast index.
class JointBasis {
 public:
  JointBasis(SymmetricBasis atoms, int photon_cutoff);

  const SymmetricBasis& atoms() const { return atoms_; }
  int photon_cutoff() const { return cutoff_; }
  std::size_t photon_levels() const { return static_cast<std::size_t>(cutoff_) + 1; }
  std::size_t dimension() const { return atoms_.dimension() * photon_levels(); }
  std::size_t index(std::size_t atom_index, int photons) const {
    return atom_index * photon_levels() + static_cast<std::size_t>(photons);
  }

  /// A (x) 1_photon.
  SparseOperator embed_atom(const SparseOperator& atom_op) const;
  /// 1_atom (x) P.
  SparseOperator embed_photon(const SparseOperator& photon_op) const;
  /// Truncated cavity annihilation operator on the joint space.
  SparseOperator cavity_annihilator() const;

 private:
  SymmetricBasis atoms_;
  int cutoff_;
};

/// Spin-1 Dicke model with cavity decay sqrt(2 kappa) a. With
/// include_residuals the finite-splitting terms omega_q, delta_q, xi_1, xi_2
/// and h are added, each multiplying the collective sum of its single-atom
/// operator.
LindbladModel full_dicke(const EffectiveDickeParams& d, double kappa, const JointBasis& jb,
                         bool include_residuals);

/// Cavity adiabatically eliminated: one-axis terms in S_x^2, S_y^2 and a
/// single collective jump lambda_- S_- + lambda_+ S_+.
LindbladModel dispersive(const EffectiveDickeParams& d, double kappa, const SymmetricBasis& basis);

/// omega_0' S_z + (Lambda/2N)[2 a+^dag a-^dag a0 a0 + h.c. + n0 (1 + 2 n+ + 2 n-)],
/// jump S_- at rate Gamma/N. The bracket equals S_x^2 + S_y^2 - N.
LindbladModel spin_mixing(const DispersiveParams& p, const SymmetricBasis& basis);

}  // namespace spinor
