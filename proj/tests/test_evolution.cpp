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
#include <cstring>
#include <numeric>

#include "spinor/error.hpp"
#include "spinor/evolution.hpp"
#include "spinor/observables.hpp"

using namespace spinor;

namespace {

DispersiveParams sm_params(int n, double gamma, double w0 = 0.0) {
  DispersiveParams p;
  p.atom_count = n;
  p.Lambda = 1.0;
  p.Gamma = gamma;
  p.omega0_prime = w0;
  return p;
}

StateVector pole(const SymmetricBasis& b) { return StateVector(fock_vector(b, {0, b.atom_count(), 0})); }

std::vector<double> grid(double t_max, int n) {
  std::vector<double> t(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) t[static_cast<std::size_t>(k)] = t_max * k / n;
  return t;
}

}  // namespace

TEST(StateTypes, Basics) {
  EXPECT_THROW(StateVector::normalized(CVector::Zero(3)), InvalidArgument);
  const auto s = StateVector::normalized(CVector::Ones(4));
  EXPECT_NEAR(s.norm(), 1.0, 1e-15);
  const auto rho = DensityMatrix::pure(s);
  EXPECT_NEAR(rho.trace().real(), 1.0, 1e-15);
  EXPECT_NEAR(rho.min_eigenvalue(), 0.0, 1e-14);
  EXPECT_THROW(DensityMatrix(CMatrix::Zero(2, 3)), InvalidArgument);
}

TEST(MasterEquation, IdentityDynamics) {
  const LindbladModel m(SparseOperator::zero(10, 10), {});
  CMatrix r = CMatrix::Random(10, 10);
  r = r * r.adjoint();
  r /= r.trace();
  const DensityMatrix rho0(r);
  const std::vector<double> ts{0.0, 0.5, 3.0};
  for (const auto& rho : evolve_master(m, rho0, ts)) EXPECT_LT((rho.elements() - r).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(MasterEquation, SingleAtomCascade) {
  // N = 1: S- moves |+1> -> |0> -> |-1>, each at rate 2 Gamma.
  const auto b = build_basis(1);
  const double gamma = 0.3;
  const auto m = spin_mixing(sm_params(1, gamma), b);
  const auto rho0 = DensityMatrix::pure(StateVector(fock_vector(b, {0, 0, 1})));
  const auto ts = grid(4.0, 8);
  const auto out = evolve_master(m, rho0, ts);
  const MomentEvaluator ev(b);
  double prev = 2.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double t = ts[k], r = 2.0 * gamma;
    const auto mo = ev.evaluate(out[k]);
    EXPECT_NEAR(mo.n_plus, std::exp(-r * t), 1e-8);
    EXPECT_NEAR(mo.n_zero, r * t * std::exp(-r * t), 1e-8);
    EXPECT_NEAR(mo.n_minus, 1.0 - std::exp(-r * t) - r * t * std::exp(-r * t), 1e-8);
    EXPECT_LT(mo.n_plus, prev);
    prev = mo.n_plus;
  }
}

TEST(MasterEquation, TraceHermiticityPositivity) {
  const int n = 8;
  const auto b = build_basis(n);
  const auto m = spin_mixing(sm_params(n, 0.05, 0.3), b);
  const auto out = evolve_master(m, DensityMatrix::pure(pole(b)), grid(3.0, 6));
  for (const auto& rho : out) {
    EXPECT_LT(std::abs(rho.trace() - 1.0), 1e-8);
    EXPECT_LT(rho.hermiticity_error(), 1e-9);
    EXPECT_GT(rho.min_eigenvalue(), -1e-8);
  }
}

TEST(MasterEquation, ClosedSystemConservation) {
  const int n = 8;
  const auto b = build_basis(n);
  const auto m = spin_mixing(sm_params(n, 0.0), b);
  const auto out = evolve_master(m, DensityMatrix::pure(pole(b)), grid(5.0, 10));
  const double e0 = out.front().expectation(m.hamiltonian()).real();
  const double hnorm = m.hamiltonian().max_abs_entry();
  const auto sz = spin_operators(b).sz;
  for (const auto& rho : out) {
    EXPECT_LT(std::abs(rho.expectation(m.hamiltonian()).real() - e0), 1e-8 * hnorm * n);
    EXPECT_LT(std::abs(rho.expectation(sz).real()), 1e-8 * n);
  }
}

TEST(MasterEquation, CapacityGuard) {
  const auto b = build_basis(10);
  const auto m = spin_mixing(sm_params(10, 0.0), b);
  MasterOptions o;
  o.max_dim = 50;
  const std::vector<double> ts{1.0};
  EXPECT_THROW(evolve_master(m, DensityMatrix::pure(pole(b)), ts, o), CapacityError);
  const auto small = build_basis(2);
  EXPECT_THROW(evolve_master(m, DensityMatrix::pure(pole(small)), ts), InvalidArgument);
}

TEST(NoJump, ClosedSystemMatchesSchrodinger) {
  const int n = 20;
  const auto b = build_basis(n);
  const auto m = spin_mixing(sm_params(n, 0.0), b);
  const auto ts = grid(3.0, 6);
  const auto nj = evolve_no_jump(m, pole(b), ts);
  const auto rho = evolve_master(m, DensityMatrix::pure(pole(b)), ts);
  const auto sz = spin_operators(b).sz;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    EXPECT_NEAR(nj[k].no_jump_probability, 1.0, 1e-8);
    const CVector& psi = nj[k].state.amplitudes();
    const CMatrix pure = psi * psi.adjoint();
    EXPECT_LT((pure - rho[k].elements()).cwiseAbs().maxCoeff(), 1e-7);
    EXPECT_LT(std::abs(sz.expectation(psi).real()), 1e-8 * n);
  }
}

TEST(NoJump, NormDecaysMonotonically) {
  const int n = 30;
  const auto b = build_basis(n);
  const auto m = spin_mixing(sm_params(n, 0.05), b);
  const auto nj = evolve_no_jump(m, pole(b), grid(3.0, 30));
  double prev = 1.0 + 1e-15;
  for (const auto& s : nj) {
    EXPECT_LE(s.no_jump_probability, prev);
    EXPECT_NEAR(s.state.norm(), 1.0, 1e-12);
    prev = s.no_jump_probability;
  }
  EXPECT_LT(prev, 0.9);
}

TEST(Trajectories, ZeroRatesReproduceSchrodinger) {
  const int n = 12;
  const auto b = build_basis(n);
  const auto m = spin_mixing(sm_params(n, 0.0), b);
  TrajectoryConfig cfg;
  cfg.n_traj = 1;
  cfg.sample_times = grid(3.0, 6);
  MomentEvaluator ev(b);
  const auto res = evolve_trajectories(m, pole(b), cfg, ev);
  const auto nj = evolve_no_jump(m, pole(b), cfg.sample_times);
  EXPECT_TRUE(res.jumps[0].empty());
  for (std::size_t s = 0; s < cfg.sample_times.size(); ++s) {
    const auto ref = ev.evaluate(nj[s].state).pack();
    for (std::size_t k = 0; k < Moments::kCount; ++k) EXPECT_NEAR(res.value(0, s, k), ref[k], 1e-9 * std::max(1.0, std::abs(ref[k])));
  }
}

TEST(Trajectories, NumberConservationPerTrajectory) {
  const int n = 10;
  const auto b = build_basis(n);
  const auto m = spin_mixing(sm_params(n, 0.5), b);
  TrajectoryConfig cfg;
  cfg.n_traj = 20;
  cfg.seed = 3;
  cfg.sample_times = grid(2.0, 4);
  MomentEvaluator ev(b);
  const auto res = evolve_trajectories(m, pole(b), cfg, ev);
  const std::size_t nm = res.index_of("n_minus"), nz = res.index_of("n_zero"), np = res.index_of("n_plus");
  std::size_t jumps = 0;
  for (std::size_t t = 0; t < cfg.n_traj; ++t) {
    jumps += res.jumps[t].size();
    for (std::size_t s = 0; s < res.n_samples(); ++s)
      EXPECT_NEAR(res.value(t, s, nm) + res.value(t, s, nz) + res.value(t, s, np), n, 1e-9);
  }
  EXPECT_GT(jumps, 0u);
  EXPECT_THROW((void)res.index_of("nope"), InvalidArgument);
}

TEST(Trajectories, BitwiseReproducibleAcrossThreadCounts) {
  const int n = 16;
  const auto b = build_basis(n);
  const auto m = spin_mixing(sm_params(n, 0.2), b);
  TrajectoryConfig cfg;
  cfg.n_traj = 24;
  cfg.seed = 99;
  cfg.sample_times = grid(2.0, 4);
  MomentEvaluator ev(b);
  cfg.threads = 1;
  const auto a = evolve_trajectories(m, pole(b), cfg, ev);
  cfg.threads = 3;
  const auto c = evolve_trajectories(m, pole(b), cfg, ev);
  ASSERT_EQ(a.per_trajectory.size(), c.per_trajectory.size());
  EXPECT_EQ(0, std::memcmp(a.per_trajectory.data(), c.per_trajectory.data(), a.per_trajectory.size() * sizeof(double)));
  EXPECT_EQ(0, std::memcmp(a.mean.data(), c.mean.data(), static_cast<std::size_t>(a.mean.size()) * sizeof(double)));
  for (std::size_t t = 0; t < cfg.n_traj; ++t) {
    ASSERT_EQ(a.jumps[t].size(), c.jumps[t].size());
    for (std::size_t j = 0; j < a.jumps[t].size(); ++j) EXPECT_EQ(a.jumps[t][j].time, c.jumps[t][j].time);
  }
  cfg.seed = 100;
  const auto d = evolve_trajectories(m, pole(b), cfg, ev);
  EXPECT_NE(0, std::memcmp(a.per_trajectory.data(), d.per_trajectory.data(), a.per_trajectory.size() * sizeof(double)));
}

TEST(Trajectories, InputValidation) {
  const auto b = build_basis(4);
  const auto m = spin_mixing(sm_params(4, 0.1), b);
  MomentEvaluator ev(b);
  TrajectoryConfig cfg;
  cfg.sample_times = {0.0, 1.0};
  EXPECT_THROW(evolve_trajectories(m, StateVector(2.0 * fock_vector(b, {0, 4, 0})), cfg, ev), InvalidArgument);
  cfg.sample_times = {1.0, 0.5};
  EXPECT_THROW(evolve_trajectories(m, pole(b), cfg, ev), InvalidArgument);
  cfg.sample_times = {0.0};
  cfg.n_traj = 0;
  EXPECT_THROW(evolve_trajectories(m, pole(b), cfg, ev), InvalidArgument);
}

TEST(Trajectories, AgreeWithMasterEquation) {
  const int n = 8;
  const auto b = build_basis(n);
  const auto m = spin_mixing(sm_params(n, 0.05), b);
  TrajectoryConfig cfg;
  cfg.n_traj = 2000;
  cfg.seed = 2024;
  cfg.sample_times = {1.0, 2.0, 3.0};
  MomentEvaluator ev(b);
  const auto res = evolve_trajectories(m, pole(b), cfg, ev);
  const auto me = evolve_master(m, DensityMatrix::pure(pole(b)), cfg.sample_times);
  for (std::size_t s = 0; s < cfg.sample_times.size(); ++s) {
    const auto ref = ev.evaluate(me[s]).pack();
    for (const char* name : {"n_plus", "n_zero", "n_minus", "sx2", "qyz2", "sx_qyz", "dq_yy"}) {
      const std::size_t k = res.index_of(name);
      EXPECT_LT(std::abs(res.mean(s, k) - ref[k]), 3.0 * res.std_error(s, k) + 1e-12) << name << " t=" << cfg.sample_times[s];
    }
  }
}

TEST(Trajectories, JumpCountMatchesMasterEquationRate) {
  // Expected jumps up to T: integral of (Gamma/N) <S+ S-> dt.
  const int n = 8;
  const double gamma = 0.3;
  const auto b = build_basis(n);
  const auto m = spin_mixing(sm_params(n, gamma), b);
  const auto ts = grid(2.0, 200);
  const auto me = evolve_master(m, DensityMatrix::pure(pole(b)), ts);
  const MomentEvaluator ev(b);
  double expected = 0.0;
  for (std::size_t k = 0; k + 1 < ts.size(); ++k)
    expected += 0.5 * (ts[k + 1] - ts[k]) * (gamma / n) *
                (ev.evaluate(me[k]).splus_sminus + ev.evaluate(me[k + 1]).splus_sminus);

  TrajectoryConfig cfg;
  cfg.n_traj = 2000;
  cfg.seed = 11;
  cfg.sample_times = {2.0};
  MomentEvaluator ev2(b);
  const auto res = evolve_trajectories(m, pole(b), cfg, ev2);
  const auto jumps = res.mean_jumps_before(2.0);
  EXPECT_LT(std::abs(jumps.value - expected), 3.0 * jumps.std_error) << jumps.value << " vs " << expected;
}

TEST(EnsembleResult, JackknifeOfLinearMeanIsSem) {
  const auto b = build_basis(6);
  const auto m = spin_mixing(sm_params(6, 0.4), b);
  TrajectoryConfig cfg;
  cfg.n_traj = 50;
  cfg.seed = 5;
  cfg.sample_times = {1.5};
  MomentEvaluator ev(b);
  const auto res = evolve_trajectories(m, pole(b), cfg, ev);
  const std::size_t k = res.index_of("n_plus");
  const auto jk = res.jackknife(0, [k](std::span<const double> v) { return v[k]; }, 50);
  EXPECT_NEAR(jk.value, res.mean(0, k), 1e-12);
  EXPECT_NEAR(jk.std_error, res.std_error(0, k), 1e-10);
}

TEST(PhotonCutoff, SyntheticSeries) {
  // Geometric tail: shift between c and c + 4 is 0.5^c (1 - 0.5^4).
  const auto run = [](int c) { return std::vector<double>{1.0 - std::pow(0.5, c)}; };
  const auto r = converge_photon_cutoff(run, 2, 40, 1e-6);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.cutoff, 22);
  EXPECT_EQ(r.reference_cutoff, 26);
  EXPECT_LT(r.max_shift, 1e-6);
  const auto capped = converge_photon_cutoff(run, 2, 10, 1e-6);
  EXPECT_FALSE(capped.converged);
  EXPECT_EQ(capped.reference_cutoff, 14);
  EXPECT_THROW(converge_photon_cutoff(run, 0, 10), InvalidArgument);
}

TEST(PhotonCutoff, FullDickeConverges) {
  EffectiveDickeParams d;
  d.atom_count = 2;
  d.cavity_detuning = 10.0;
  d.lambda_minus = 1.0;
  const std::vector<double> ts = {0.5, 1.0, 2.0};
  const auto run = [&](int cutoff) {
    const JointBasis jb(build_basis(2), cutoff);
    const auto model = full_dicke(d, 0.5, jb, false);
    CVector psi0 = CVector::Zero(static_cast<Eigen::Index>(jb.dimension()));
    psi0[static_cast<Eigen::Index>(jb.index(0, 0))] = 1.0;
    const auto rhos = evolve_master(model, DensityMatrix::pure(StateVector(psi0)), ts);
    const auto np = jb.embed_atom(number(jb.atoms(), Mode::plus));
    std::vector<double> out;
    for (const auto& r : rhos) out.push_back(r.expectation(np).real());
    return out;
  };
  const auto r = converge_photon_cutoff(run, 1, 16, 1e-6);
  EXPECT_TRUE(r.converged);
  EXPECT_GE(r.cutoff, 1);
}
