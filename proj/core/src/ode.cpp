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

#include "spinor/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spinor/error.hpp"

namespace spinor {

namespace {

// Dormand & Prince (1980) tableau; dense output after Hairer, Norsett & Wanner.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;  // PI stabilization
constexpr double kFacMin = 0.2, kFacMax = 10.0;

}  // namespace

DormandPrince45::DormandPrince45(Rhs rhs, OdeOptions options) : rhs_(std::move(rhs)), opt_(options) {
  if (!(opt_.rel_tol > 0.0) || !(opt_.abs_tol >= 0.0)) {
    throw InvalidArgument("ODE tolerances must be positive");
  }
}

void DormandPrince45::eval(double t, const CVector& y, CVector& dy) {
  rhs_(t, y, dy);
  ++evaluations_;
}

void DormandPrince45::reset(double t0, const CVector& y0) {
  t_ = t_prev_ = t0;
  y_ = y0;
  const auto n = y0.size();
  for (CVector* v : {&y_new_, &k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &tmp_, &err_}) v->resize(n);
  eval(t_, y_, k1_);
  h_ = opt_.initial_step > 0.0 ? opt_.initial_step : initial_step_guess();
  fac_old_ = 1e-4;
  has_step_ = false;
}

double DormandPrince45::error_norm(const CVector& err, const CVector& y0, const CVector& y1) const {
  const auto n = err.size();
  if (n == 0) return 0.0;
  // Max norm: an RMS norm would let the many near-zero entries of a density
  // matrix or a mostly empty state vector dilute localized errors.
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sc = opt_.abs_tol + opt_.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    worst = std::max(worst, std::abs(err[i]) / sc);
  }
  return worst;
}

double DormandPrince45::initial_step_guess() {
  // Hairer's starting-step heuristic for a fifth-order method.
  const auto n = static_cast<double>(std::max<Eigen::Index>(y_.size(), 1));
  double dnf = 0.0, dny = 0.0;
  for (Eigen::Index i = 0; i < y_.size(); ++i) {
    const double sk = opt_.abs_tol + opt_.rel_tol * std::abs(y_[i]);
    dnf += std::norm(k1_[i]) / (sk * sk);
    dny += std::norm(y_[i]) / (sk * sk);
  }
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
  h = std::min(h, opt_.max_step);
  tmp_ = y_ + h * k1_;
  eval(t_ + h, tmp_, k2_);
  double der2 = 0.0;
  for (Eigen::Index i = 0; i < y_.size(); ++i) {
    const double sk = opt_.abs_tol + opt_.rel_tol * std::abs(y_[i]);
    der2 += std::norm(k2_[i] - k1_[i]) / (sk * sk);
  }
  der2 = std::sqrt(der2 / n) / h;
  const double der12 = std::max(std::abs(der2), std::sqrt(dnf / n));
  const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
  return std::min({100.0 * h, h1, opt_.max_step});
}

void DormandPrince45::step(double t_limit) {
  if (!(t_limit > t_)) throw InvalidArgument("step: t_limit must lie ahead of the current time");
  const double span = t_limit - t_;
  for (;;) {
    if (accepted_ + rejected_ >= opt_.max_steps) {
      throw IntegrationError("maximum number of steps exceeded", t_);
    }
    bool clipped = false;
    double h = std::min(h_, opt_.max_step);
    if (h >= span * (1.0 - 1e-12)) {
      h = span;
      clipped = true;
    }
    if (h < 1e-14 * std::max(1.0, std::abs(t_))) {
      throw IntegrationError("step size underflow at t = " + std::to_string(t_), t_);
    }

    tmp_ = y_ + h * a21 * k1_;
    eval(t_ + c2 * h, tmp_, k2_);
    tmp_ = y_ + h * (a31 * k1_ + a32 * k2_);
    eval(t_ + c3 * h, tmp_, k3_);
    tmp_ = y_ + h * (a41 * k1_ + a42 * k2_ + a43 * k3_);
    eval(t_ + c4 * h, tmp_, k4_);
    tmp_ = y_ + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
    eval(t_ + c5 * h, tmp_, k5_);
    tmp_ = y_ + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
    eval(t_ + h, tmp_, k6_);
    y_new_ = y_ + h * (a71 * k1_ + a73 * k3_ + a74 * k4_ + a75 * k5_ + a76 * k6_);
    const double t_new = clipped ? t_limit : t_ + h;
    eval(t_new, y_new_, k7_);
    err_ = h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);
    double err = error_norm(err_, y_, y_new_);

    if (!std::isfinite(err)) {
      h_ = 0.1 * h;
      ++rejected_;
      continue;
    }
    const double fac11 = std::pow(std::max(err, 1e-300), 0.2 - 0.75 * kBeta);
    if (err <= 1.0) {
      double fac = fac11 / std::pow(fac_old_, kBeta);
      fac = std::clamp(fac / kSafety, 1.0 / kFacMax, 1.0 / kFacMin);
      const double h_next = h / fac;
      fac_old_ = std::max(err, 1e-4);

      r1_ = y_;
      r2_ = y_new_ - y_;
      r3_ = h * k1_ - r2_;
      r4_ = r2_ - h * k7_ - r3_;
      r5_ = h * (d1 * k1_ + d3 * k3_ + d4 * k4_ + d5 * k5_ + d6 * k6_ + d7 * k7_);

      t_prev_ = t_;
      t_ = t_new;
      y_.swap(y_new_);
      k1_.swap(k7_);
      // A clipped step says nothing about the natural step size.
      h_ = clipped ? std::max(h_, h_next) : h_next;
      has_step_ = true;
      ++accepted_;
      return;
    }
    h_ = h / std::min(1.0 / kFacMin, fac11 / kSafety);
    ++rejected_;
  }
}

void DormandPrince45::integrate_to(double t_end) {
  while (t_ < t_end) step(t_end);
}

void DormandPrince45::dense_output(double t, CVector& out) const {
  if (!has_step_) {
    out = y_;
    return;
  }
  const double h = t_ - t_prev_;
  const double slack = 1e-12 * std::max(std::abs(t_), h);
  if (t < t_prev_ - slack || t > t_ + slack) throw InvalidArgument("dense output requested outside the last step");
  const double s = h > 0.0 ? (t - t_prev_) / h : 1.0;
  const double s1 = 1.0 - s;
  out = r1_ + s * (r2_ + s1 * (r3_ + s * (r4_ + s1 * r5_)));
}

}  // namespace spinor
