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

#include "spinor/models.hpp"

#include <algorithm>
#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

#include "spinor/error.hpp"

namespace spinor {

namespace {

constexpr double kDoubledDissipatorFactor = 2.0;

SparseOperator kron(const SparseOperator& a, const SparseOperator& b) {
  SparseOperator::Matrix out = Eigen::kroneckerProduct(a.matrix(), b.matrix());
  return SparseOperator(std::move(out));
}

SparseOperator photon_lowering(int cutoff) {
  std::vector<SparseOperator::Triplet> entries;
  for (int n = 1; n <= cutoff; ++n) entries.emplace_back(n - 1, n, std::sqrt(static_cast<double>(n)));
  return SparseOperator::from_triplets(cutoff + 1, cutoff + 1, entries);
}

Eigen::Matrix3cd ket_bra(Mode to, Mode from) {
  Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
  m(mode_slot(to), mode_slot(from)) = 1.0;
  return m;
}

}  // namespace

JumpOperator doubled_dissipator(double coefficient, SparseOperator op, std::string label) {
  if (coefficient < 0.0) throw InvalidArgument("dissipator coefficient must be nonnegative");
  return {std::move(op), kDoubledDissipatorFactor * coefficient, std::move(label)};
}

LindbladModel::LindbladModel(SparseOperator hamiltonian, std::vector<JumpOperator> jumps, std::string label)
    : hamiltonian_(std::move(hamiltonian)), jumps_(std::move(jumps)), label_(std::move(label)) {
  hamiltonian_.require_hermitian("model Hamiltonian");
  for (const auto& j : jumps_) {
    if (!(j.rate >= 0.0)) throw InvalidArgument("jump '" + j.label + "' has a negative rate");
    if (j.op.rows() != hamiltonian_.dim() || j.op.cols() != hamiltonian_.dim()) {
      throw InvalidArgument("jump '" + j.label + "' dimension does not match the Hamiltonian");
    }
  }
}

SparseOperator LindbladModel::effective_hamiltonian() const {
  SparseOperator heff = hamiltonian_;
  for (const auto& j : jumps_) {
    if (j.rate == 0.0) continue;
    heff = heff - cplx(0.0, 0.5 * j.rate) * (j.op.adjoint() * j.op);
  }
  return heff;
}

LindbladModel LindbladModel::with_rate_scale(double factor) const {
  auto jumps = jumps_;
  for (auto& j : jumps) j.rate *= factor;
  LindbladModel out(hamiltonian_, std::move(jumps), label_);
  out.warnings = warnings;
  return out;
}

// ---------------------------------------------------------------------------

JointBasis::JointBasis(SymmetricBasis atoms, int photon_cutoff)
    : atoms_(std::move(atoms)), cutoff_(photon_cutoff) {
  if (photon_cutoff < 1) throw InvalidArgument("photon cutoff must be >= 1");
}

SparseOperator JointBasis::embed_atom(const SparseOperator& atom_op) const {
  return kron(atom_op, SparseOperator::identity(static_cast<Eigen::Index>(photon_levels())));
}

SparseOperator JointBasis::embed_photon(const SparseOperator& photon_op) const {
  return kron(SparseOperator::identity(static_cast<Eigen::Index>(atoms_.dimension())), photon_op);
}

SparseOperator JointBasis::cavity_annihilator() const { return embed_photon(photon_lowering(cutoff_)); }

LindbladModel full_dicke(const EffectiveDickeParams& d, double kappa, const JointBasis& jb,
                         bool include_residuals) {
  if (kappa < 0.0) throw InvalidArgument("kappa must be nonnegative");
  if (d.atom_count != jb.atoms().atom_count()) {
    throw InvalidArgument("Dicke parameters and joint basis disagree on N");
  }
  const auto& atoms = jb.atoms();
  const auto spin = spin_operators(atoms);
  const SparseOperator a = jb.cavity_annihilator();
  const SparseOperator ad = a.adjoint();
  const SparseOperator n_ph = ad * a;
  const SparseOperator sp = jb.embed_atom(spin.splus);
  const SparseOperator sm = jb.embed_atom(spin.sminus);
  const double scale = 1.0 / std::sqrt(2.0 * d.atom_count);

  SparseOperator h = d.cavity_detuning * n_ph + d.spin_splitting * jb.embed_atom(spin.sz) +
                     (d.lambda_minus * scale) * (a * sp + ad * sm) +
                     (d.lambda_plus * scale) * (a * sm + ad * sp);

  if (include_residuals) {
    const double r2 = std::sqrt(2.0);
    // Collective sums of the single-atom operators, in the normalization the
    // finite-splitting coefficients were derived with.
    const SparseOperator sz2 = jb.embed_atom(number(atoms, Mode::plus) + number(atoms, Mode::minus));
    const Eigen::Matrix3cd qxz1 = r2 * (ket_bra(Mode::plus, Mode::zero) + ket_bra(Mode::zero, Mode::plus) -
                                        ket_bra(Mode::zero, Mode::minus) - ket_bra(Mode::minus, Mode::zero));
    const Eigen::Matrix3cd iqyz1 = r2 * (ket_bra(Mode::plus, Mode::zero) - ket_bra(Mode::zero, Mode::plus) -
                                         ket_bra(Mode::zero, Mode::minus) + ket_bra(Mode::minus, Mode::zero));
    const Eigen::Matrix3cd flips = 2.0 * (ket_bra(Mode::plus, Mode::minus) + ket_bra(Mode::minus, Mode::plus));
    const SparseOperator qxz = jb.embed_atom(one_body(atoms, qxz1));
    const SparseOperator iqyz = jb.embed_atom(one_body(atoms, iqyz1));
    h = h + d.omega_q * sz2 + (0.5 * d.delta_q) * (sz2 * n_ph) + d.xi_1 * (qxz * (a + ad)) +
        d.xi_2 * (iqyz * (a - ad)) + d.h * jb.embed_atom(one_body(atoms, flips));
  }

  std::vector<JumpOperator> jumps;
  jumps.push_back(doubled_dissipator(kappa, a, "cavity decay a"));
  LindbladModel model(std::move(h), std::move(jumps), "full_dicke");
  return model;
}

LindbladModel dispersive(const EffectiveDickeParams& d, double kappa, const SymmetricBasis& basis) {
  if (kappa < 0.0) throw InvalidArgument("kappa must be nonnegative");
  if (d.atom_count != basis.atom_count()) {
    throw InvalidArgument("Dicke parameters and basis disagree on N");
  }
  const double w = d.cavity_detuning;
  if (w == 0.0 && kappa == 0.0) throw InvalidArgument("omega = kappa = 0: cavity cannot be eliminated");
  const double n = static_cast<double>(d.atom_count);
  const double denom = 2.0 * n * (w * w + kappa * kappa);
  const double lm = d.lambda_minus;
  const double lp = d.lambda_plus;
  const auto s = spin_operators(basis);

  const double twist = -w / denom;
  SparseOperator h = (d.spin_splitting + twist * (lm * lm - lp * lp)) * s.sz +
                     (twist * (lm + lp) * (lm + lp)) * (s.sx * s.sx) +
                     (twist * (lm - lp) * (lm - lp)) * (s.sy * s.sy);

  std::vector<JumpOperator> jumps;
  jumps.push_back(doubled_dissipator(kappa / denom, lm * s.sminus + lp * s.splus, "lm S- + lp S+"));
  LindbladModel model(std::move(h), std::move(jumps), "dispersive");

  const double slow = std::max({std::abs(d.spin_splitting), std::abs(lm), std::abs(lp)});
  if (std::abs(w) < 10.0 * slow) {
    model.warnings.emplace_back("|omega| < 10 max(|omega_0|, |lambda|): dispersive elimination is marginal");
  }
  return model;
}

LindbladModel spin_mixing(const DispersiveParams& p, const SymmetricBasis& basis) {
  if (p.Gamma < 0.0) throw InvalidArgument("Gamma must be nonnegative");
  if (p.atom_count != basis.atom_count()) {
    throw InvalidArgument("dispersive parameters and basis disagree on N");
  }
  const double n = static_cast<double>(p.atom_count);
  const SparseOperator n0 = number(basis, Mode::zero);
  const SparseOperator np = number(basis, Mode::plus);
  const SparseOperator nm = number(basis, Mode::minus);
  const SparseOperator pair = transition(basis, Mode::plus, Mode::zero) * transition(basis, Mode::minus, Mode::zero);
  const SparseOperator mixing = 2.0 * (pair + pair.adjoint()) + n0 + 2.0 * (n0 * np) + 2.0 * (n0 * nm);

  SparseOperator h = p.omega0_prime * (np - nm) + (p.Lambda / (2.0 * n)) * mixing;
  const auto s = spin_operators(basis);
  std::vector<JumpOperator> jumps;
  jumps.push_back(doubled_dissipator(p.Gamma / (2.0 * n), s.sminus, "S-"));
  return LindbladModel(std::move(h), std::move(jumps), "spin_mixing");
}

}  // namespace spinor
