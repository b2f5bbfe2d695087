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


#include <benchmark/benchmark.h>

#include <array>
#include <vector>

#include "spinor/evolution.hpp"
#include "spinor/hilbert.hpp"
#include "spinor/models.hpp"
#include "spinor/observables.hpp"
#include "spinor/qfunction.hpp"

using namespace spinor;

namespace {

LindbladModel model_for(const SymmetricBasis& b, double gamma_over_lambda) {
  DispersiveParams p;
  p.Lambda = 1.0;
  p.Gamma = gamma_over_lambda;
  p.gamma_over_lambda = gamma_over_lambda;
  p.atom_count = b.atom_count();
  return spin_mixing(p, b);
}

StateVector pole(const SymmetricBasis& b) { return StateVector(fock_vector(b, {0, b.atom_count(), 0})); }

std::vector<double> grid(double stop, int n) {
  std::vector<double> t(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) t[static_cast<std::size_t>(k)] = stop * k / n;
  return t;
}

}  // namespace

static void BM_EffectiveHamiltonianApply(benchmark::State& state) {
  const auto b = build_basis(static_cast<int>(state.range(0)));
  const auto heff = model_for(b, 0.05).effective_hamiltonian();
  CVector psi = CVector::Random(heff.dim());
  for (auto _ : state) {
    CVector out = heff.apply(psi);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(heff.dim()));
}
BENCHMARK(BM_EffectiveHamiltonianApply)->Arg(30)->Arg(120)->Arg(240);

static void BM_PureEvolution(benchmark::State& state) {
  const auto b = build_basis(static_cast<int>(state.range(0)));
  const auto m = model_for(b, 0.0);
  const auto psi0 = pole(b);
  const auto t = grid(3.0, 30);
  for (auto _ : state) benchmark::DoNotOptimize(evolve_no_jump(m, psi0, t));
}
BENCHMARK(BM_PureEvolution)->Arg(30)->Arg(120)->Unit(benchmark::kMillisecond);

static void BM_MasterEquation(benchmark::State& state) {
  const auto b = build_basis(static_cast<int>(state.range(0)));
  const auto m = model_for(b, 0.05);
  const auto rho0 = DensityMatrix::pure(pole(b));
  const auto t = grid(2.0, 10);
  for (auto _ : state) benchmark::DoNotOptimize(evolve_master(m, rho0, t));
}
BENCHMARK(BM_MasterEquation)->Arg(8)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_TrajectoryEnsemble(benchmark::State& state) {
  const auto b = build_basis(40);
  const auto m = model_for(b, 0.05);
  const auto psi0 = pole(b);
  TrajectoryConfig cfg;
  cfg.n_traj = static_cast<std::size_t>(state.range(0));
  cfg.seed = 1;
  cfg.sample_times = grid(3.0, 30);
  cfg.threads = 1;
  const MomentEvaluator ev(b);
  for (auto _ : state) benchmark::DoNotOptimize(evolve_trajectories(m, psi0, cfg, ev));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrajectoryEnsemble)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_ThetaOptimization(benchmark::State& state) {
  const auto b = build_basis(120);
  const auto m = model_for(b, 0.0);
  const std::array<double, 1> t{2.0};
  const auto s = evolve_no_jump(m, pole(b), t);
  MomentEvaluator ev(b);
  const Moments mom = ev.evaluate(s.back().state);
  for (auto _ : state) benchmark::DoNotOptimize(optimize_theta(mom));
}
BENCHMARK(BM_ThetaOptimization);

static void BM_QFunctionGrid(benchmark::State& state) {
  const auto b = build_basis(static_cast<int>(state.range(0)));
  const auto lb = build_ladder(b);
  const auto psi = pole(b);
  for (auto _ : state) benchmark::DoNotOptimize(qfunction(lb, psi, 61, 120));
}
BENCHMARK(BM_QFunctionGrid)->Arg(40)->Arg(120)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
