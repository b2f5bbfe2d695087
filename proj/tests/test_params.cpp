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
#include "spinor/params.hpp"

using namespace spinor;
using namespace spinor::units;

namespace {

// {g, kappa, gamma}/2pi = {10, 0.2, 6} MHz, N = 1e4, Delta/2pi = 100 GHz,
// Omega_- = 0.0024 Delta (lambda/2pi = 200 kHz), cavity frame chosen so that
// omega/2pi = 4 MHz.
MicroscopicParams feasible_set() {
  MicroscopicParams p;
  p.g = mhz_2pi(10);
  p.kappa = mhz_2pi(0.2);
  p.gamma = mhz_2pi(6);
  p.detuning = ghz_2pi(100);
  p.rabi_minus = 0.0024 * p.detuning;
  p.rabi_plus = 0.0;
  p.atom_count = 10000;
  p.cavity_frequency = mhz_2pi(4) - p.atom_count * p.g * p.g / (3.0 * p.detuning);
  return p;
}

}  // namespace

TEST(DickeParams, FeasibleSetCouplings) {
  const auto p = feasible_set();
  const auto d = dicke_params(p, DetuningModel::large_detuning);
  EXPECT_NEAR(to_mhz_2pi(d.cavity_detuning), 4.0, 1e-9);
  // |lambda| = sqrt(N) g Omega / 12 Delta, stored with the supplement's sign.
  EXPECT_NEAR(std::abs(d.lambda_minus), std::sqrt(1e4) * p.g * p.rabi_minus / (12.0 * p.detuning), 1e-6);
  EXPECT_NEAR(to_khz_2pi(std::abs(d.lambda_minus)), 200.0, 1e-9);
  EXPECT_LT(d.lambda_minus, 0.0);
  EXPECT_EQ(d.lambda_plus, 0.0);
  EXPECT_EQ(d.omega_q, 0.0);
  EXPECT_EQ(d.h, 0.0);
}

TEST(DickeParams, SymmetricCancellationOfOmega0) {
  MicroscopicParams p = feasible_set();
  p.rabi_plus = p.rabi_minus;
  p.laser_plus_frequency = ghz_2pi(1) + mhz_2pi(3);
  p.laser_minus_frequency = ghz_2pi(1);
  p.zeeman_splitting = 0.5 * (p.laser_plus_frequency - p.laser_minus_frequency);
  const auto d = dicke_params(p, DetuningModel::large_detuning);
  EXPECT_NEAR(d.spin_splitting, 0.0, 1e-6);
}

TEST(DickeParams, LambdaScalesAsSqrtN) {
  MicroscopicParams p = feasible_set();
  const auto a = dicke_params(p, DetuningModel::large_detuning);
  p.atom_count *= 2;
  const auto b = dicke_params(p, DetuningModel::large_detuning);
  EXPECT_NEAR(b.lambda_minus / a.lambda_minus, std::sqrt(2.0), 1e-14);
}

TEST(DickeParams, FiniteSplittingResiduals) {
  MicroscopicParams p = feasible_set();
  p.rabi_plus = p.rabi_minus;
  p.hyperfine_splitting = 0.01 * p.detuning;
  const auto d = dicke_params(p, DetuningModel::finite_splitting);
  const double omega = p.rabi_minus;
  const double scale = 0.01 * omega * omega / (48.0 * p.detuning);
  EXPECT_LT(std::abs(d.omega_q), scale);
  EXPECT_LT(std::abs(d.h), scale);
  // Direct evaluation of the residual formulas.
  const double split = 1.0 / (p.detuning + p.hyperfine_splitting) - 1.0 / p.detuning;
  EXPECT_NEAR(d.omega_q, 2.0 * omega * omega / 96.0 * split, 1e-12 * std::abs(d.omega_q));
  EXPECT_NEAR(d.h, -omega * omega / 96.0 * split, 1e-12 * std::abs(d.h));
}

TEST(DickeParams, ResidualsVanishLinearlyInSplitting) {
  MicroscopicParams p = feasible_set();
  p.rabi_plus = 0.5 * p.rabi_minus;
  p.hyperfine_splitting = 0.02 * p.detuning;
  const auto a = dicke_params(p, DetuningModel::finite_splitting);
  p.hyperfine_splitting *= 0.5;
  const auto b = dicke_params(p, DetuningModel::finite_splitting);
  for (auto [x, y] : {std::pair{a.omega_q, b.omega_q}, {a.delta_q, b.delta_q}, {a.xi_1, b.xi_1},
                      {a.xi_2, b.xi_2}, {a.h, b.h}}) {
    ASSERT_NE(x, 0.0);
    EXPECT_NEAR(y / x, 0.5, 0.05);
  }
}

TEST(DickeParams, FiniteSplittingConvergesToLargeDetuning) {
  MicroscopicParams p = feasible_set();
  p.rabi_plus = 0.3 * p.rabi_minus;
  const auto ref = dicke_params(p, DetuningModel::large_detuning);
  double prev = 1.0;
  for (double z : {1e-2, 5e-3, 2.5e-3}) {
    p.hyperfine_splitting = z * p.detuning;
    const auto d = dicke_params(p, DetuningModel::finite_splitting);
    const double rel = std::abs(d.lambda_minus / ref.lambda_minus - 1.0);
    EXPECT_LT(rel, 2.0 * z);
    EXPECT_LT(rel, prev);
    prev = rel;
  }
}

TEST(DickeParams, RejectsDivergentDenominators) {
  MicroscopicParams p = feasible_set();
  p.detuning = 0.0;
  EXPECT_THROW(dicke_params(p, DetuningModel::large_detuning), InvalidArgument);
  p = feasible_set();
  p.hyperfine_splitting = -p.detuning;
  EXPECT_THROW(dicke_params(p, DetuningModel::finite_splitting), InvalidArgument);
  p = feasible_set();
  p.kappa = 0.0;
  EXPECT_THROW(dicke_params(p, DetuningModel::large_detuning), InvalidArgument);
}

TEST(DispersiveParams, FeasibleSetRates) {
  const auto p = feasible_set();
  const auto d = dispersive_params(dicke_params(p, DetuningModel::large_detuning), p.kappa);
  EXPECT_NEAR(to_khz_2pi(std::abs(d.Lambda)), 10.0, 0.1);
  EXPECT_LT(d.Lambda, 0.0);  // sign -sign(omega)
  EXPECT_NEAR(d.Gamma / std::abs(d.Lambda), 0.05, 1e-12);
  EXPECT_NEAR(d.gamma_over_lambda, 0.05, 1e-12);
  EXPECT_NEAR(d.Gamma * mhz_2pi(4), -p.kappa * d.Lambda, 1e-9 * std::abs(p.kappa * d.Lambda));
  EXPECT_NEAR(d.omega0_prime, dicke_params(p, DetuningModel::large_detuning).spin_splitting + d.Lambda / 2e4,
              1e-9);
}

TEST(DispersiveParams, Limits) {
  EffectiveDickeParams e;
  e.cavity_detuning = 5.0;
  e.lambda_minus = 2.0;
  e.atom_count = 10;
  const auto a = dispersive_params(e, 0.0);
  EXPECT_EQ(a.Gamma, 0.0);
  EXPECT_NEAR(std::abs(a.Lambda), 4.0 / 5.0, 1e-15);
  const auto b = dispersive_params(e, 0.3);
  e.cavity_detuning = -5.0;
  const auto c = dispersive_params(e, 0.3);
  EXPECT_NEAR(c.Lambda, -b.Lambda, 1e-15);
  EXPECT_NEAR(c.Gamma, b.Gamma, 1e-15);
  EXPECT_GE(c.Gamma, 0.0);
  e.cavity_detuning = 0.0;
  EXPECT_THROW(dispersive_params(e, 0.3), InvalidArgument);
}

TEST(Feasibility, PaperRatios) {
  const auto p = feasible_set();
  const auto d = dispersive_params(dicke_params(p, DetuningModel::large_detuning), p.kappa);
  const auto f = feasibility(p, d);
  EXPECT_NEAR(f.cooperativity, 166.7, 0.1);
  EXPECT_NEAR(f.gamma_sp_ratio, 6e-4, 0.6e-4);
  EXPECT_NEAR(f.gamma_sp_ratio_estimate, 6e-4, 0.6e-4);
  EXPECT_NEAR(f.gamma_sp_ratio / f.gamma_sp_ratio_estimate, 1.0, 0.01);
  EXPECT_NEAR(f.gamma_over_lambda, 0.05, 1e-12);
  EXPECT_EQ(f.gamma_sp_plus, 0.0);
  EXPECT_TRUE(f.dispersive_regime);
}

TEST(Feasibility, RatioHalvesWithDoubleN) {
  // Doubling N at fixed fields (cavity frame held so omega is unchanged).
  auto p = feasible_set();
  auto ratio = [](const MicroscopicParams& q) {
    return feasibility(q, dispersive_params(dicke_params(q, DetuningModel::large_detuning), q.kappa))
        .gamma_sp_ratio_estimate;
  };
  const double a = ratio(p);
  p.atom_count *= 2;
  p.cavity_frequency = mhz_2pi(4) - p.atom_count * p.g * p.g / (3.0 * p.detuning);
  EXPECT_NEAR(ratio(p) / a, 0.5, 1e-12);
}

TEST(Feasibility, NullingOmega0Prime) {
  auto p = feasible_set();
  p.rabi_plus = 0.5 * p.rabi_minus;
  for (auto model : {DetuningModel::large_detuning, DetuningModel::finite_splitting}) {
    p.hyperfine_splitting = model == DetuningModel::finite_splitting ? 0.01 * p.detuning : 0.0;
    p.zeeman_splitting = zeeman_for_null_omega0_prime(p, model);
    const auto d = dispersive_params(dicke_params(p, model), p.kappa);
    EXPECT_NEAR(d.omega0_prime, 0.0, 1e-6);
  }
}
