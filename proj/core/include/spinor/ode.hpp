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

// Adaptive Dormand-Prince 5(4) integrator for complex vector ODEs with
// fourth-order continuous (dense) output over the last accepted step.

#include <cstddef>
#include <functional>
#include <limits>

#include "spinor/hilbert.hpp"

namespace spinor {

struct OdeOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double initial_step = 0.0;  // 0: pick automatically
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 50'000'000;
};

class DormandPrince45 {
 public:
  using Rhs = std::function<void(double t, const CVector& y, CVector& dydt)>;

  explicit DormandPrince45(Rhs rhs, OdeOptions options = {});

  void reset(double t0, const CVector& y0);

  /// Takes one accepted step that ends no later than t_limit.
  void step(double t_limit);
  /// Steps until time() == t_end exactly.
  void integrate_to(double t_end);

  double time() const { return t_; }
  const CVector& state() const { return y_; }

  /// Interval [step_start(), time()] covered by the dense output.
  double step_start() const { return t_prev_; }
  /// Continuous extension of the last accepted step; t must lie in it.
  void dense_output(double t, CVector& out) const;

  std::size_t accepted_steps() const { return accepted_; }
  std::size_t rejected_steps() const { return rejected_; }
  std::size_t rhs_evaluations() const { return evaluations_; }

 private:
  double error_norm(const CVector& err, const CVector& y0, const CVector& y1) const;
  double initial_step_guess();
  void eval(double t, const CVector& y, CVector& dy);

  Rhs rhs_;
  OdeOptions opt_;
  double t_ = 0.0;
  double t_prev_ = 0.0;
  double h_ = 0.0;
  double fac_old_ = 1e-4;
  CVector y_, y_new_, k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, err_;
  CVector r1_, r2_, r3_, r4_, r5_;  // dense-output coefficients
  bool has_step_ = false;
  std::size_t accepted_ = 0, rejected_ = 0, evaluations_ = 0;
};

}  // namespace spinor
