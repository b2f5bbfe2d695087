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


#include "spinor/tools/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "spinor/error.hpp"

namespace spinor::cli {

namespace {

constexpr double kMaxBasisStates = 5e6;

std::size_t symmetric_dimension(int n) {
  return static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(n + 2) / 2;
}

double max_shift(const SimulationOutput& a, const SimulationOutput& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.moments.size(); ++k) {
    const auto x = a.moments[k].pack(), y = b.moments[k].pack();
    for (std::size_t i = 0; i < x.size(); ++i) s = std::max(s, std::abs(x[i] - y[i]));
  }
  return s;
}

SimulationOutput run_once(const RunConfig& cfg, const ResolvedModel& rm, const std::vector<double>& times,
                          int cutoff, unsigned threads) {
  const System sys = build_system(cfg, rm, cutoff);
  const LindbladModel& model = *sys.model;
  const bool dissipative =
      std::any_of(model.jumps().begin(), model.jumps().end(), [](const JumpOperator& j) { return j.rate > 0.0; });

  SimulationOutput out;
  out.dim = sys.dim();
  out.times = times;
  Method m = cfg.evolution.method;
  if (m == Method::automatic) {
    if (!dissipative) m = Method::pure;
    else m = sys.dim() <= cfg.evolution.max_master_dim ? Method::master : Method::trajectories;
  }
  if (m == Method::pure && dissipative)
    throw ConfigError("/evolution/method", "the model is dissipative; use no_jump, master or trajectories");
  out.method = m;

  OdeOptions ode;
  ode.rel_tol = cfg.evolution.rel_tol;
  ode.abs_tol = cfg.evolution.abs_tol;
  MomentEvaluator ev = sys.evaluator();

  switch (m) {
    case Method::pure:
    case Method::no_jump: {
      const auto states = evolve_no_jump(model, sys.psi0, times, ode);
      for (const auto& s : states) {
        out.moments.push_back(ev.evaluate(s.state));
        if (m == Method::no_jump) out.no_jump_probability.push_back(s.no_jump_probability);
      }
      break;
    }
    case Method::master: {
      MasterOptions mo;
      mo.ode = ode;
      mo.max_dim = cfg.evolution.max_master_dim;
      const auto rhos = evolve_master(model, DensityMatrix::pure(sys.psi0), times, mo);
      for (const auto& r : rhos) out.moments.push_back(ev.evaluate(r));
      break;
    }
    case Method::trajectories: {
      TrajectoryConfig tc;
      tc.n_traj = cfg.evolution.n_traj;
      tc.seed = cfg.seed;
      tc.sample_times = times;
      tc.ode = ode;
      tc.jump_time_tol = cfg.evolution.jump_time_tol;
      tc.threads = threads;
      const auto ens = evolve_trajectories(model, sys.psi0, tc, ev);
      const int n = cfg.atoms;
      const auto f = [&](std::span<const double> v) {
        return optimize_theta(Moments::unpack(v, n), cfg.subspace, cfg.theta).xi2_min;
      };
      for (std::size_t s = 0; s < ens.n_samples(); ++s) {
        std::vector<double> mean(Moments::kCount);
        std::array<double, Moments::kCount> se{};
        for (std::size_t k = 0; k < Moments::kCount; ++k) {
          mean[k] = ens.mean(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(k));
          se[k] = ens.std_error(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(k));
        }
        out.moments.push_back(Moments::unpack(mean, n));
        out.moment_se.push_back(se);
        out.xi2_jackknife.push_back(ens.jackknife(s, f));
        out.jumps.push_back(ens.mean_jumps_before(times[s]));
      }
      break;
    }
    case Method::automatic: break;
  }
  for (std::size_t k = 0; k < times.size(); ++k)
    out.squeezing.push_back(squeezing_record(times[k], out.moments[k], cfg.theta, false, cfg.subspace));
  return out;
}

}  // namespace

ResolvedModel resolve_model(const RunConfig& cfg) {
  ResolvedModel rm;
  rm.tier = cfg.model;
  rm.atoms = cfg.atoms;
  if (cfg.microscopic) {
    MicroscopicParams p = cfg.microscopic->params;
    p.atom_count = cfg.atoms;
    const DetuningModel dm = cfg.microscopic->detuning_model;
    if (cfg.microscopic->null_omega0_prime) p.zeeman_splitting = zeeman_for_null_omega0_prime(p, dm);
    rm.dicke = dicke_params(p, dm);
    rm.kappa = p.kappa;
    rm.dispersive = dispersive_params(*rm.dicke, rm.kappa);
    rm.feasibility = feasibility(p, rm.dispersive, dm);
    rm.warnings = rm.feasibility->warnings;
    rm.include_residuals = cfg.microscopic->include_residuals;
  } else if (cfg.model == ModelTier::spin_mixing) {
    const auto& e = *cfg.effective;
    auto& d = rm.dispersive;
    d.atom_count = cfg.atoms;
    d.Lambda = e.Lambda;
    d.omega0_prime = e.omega0_prime;
    d.Gamma = e.Gamma ? *e.Gamma : e.gamma_over_lambda.value_or(0.0) * std::abs(e.Lambda);
    d.gamma_over_lambda = d.Gamma / std::abs(e.Lambda);
  } else {
    const auto& e = *cfg.effective;
    EffectiveDickeParams d;
    d.atom_count = cfg.atoms;
    d.cavity_detuning = e.cavity_detuning;
    d.lambda_minus = e.lambda_minus;
    d.lambda_plus = e.lambda_plus;
    d.spin_splitting = e.spin_splitting;
    rm.dicke = d;
    rm.kappa = e.kappa;
    rm.dispersive = dispersive_params(d, e.kappa);
  }
  return rm;
}

MomentEvaluator System::evaluator() const {
  return joint_basis ? MomentEvaluator(*joint_basis) : MomentEvaluator(*atoms_basis);
}

System build_system(const RunConfig& cfg, const ResolvedModel& rm, int photon_cutoff) {
  const double states = static_cast<double>(symmetric_dimension(cfg.atoms)) *
                        (rm.tier == ModelTier::full_dicke ? photon_cutoff + 1.0 : 1.0);
  if (states > kMaxBasisStates)
    throw CapacityError("Hilbert space of " + std::to_string(static_cast<long long>(states)) +
                        " states exceeds the 5e6 limit; reduce atoms or the photon cutoff");
  System sys;
  sys.atoms_basis = build_basis(cfg.atoms);
  const CVector atoms0 = fock_vector(*sys.atoms_basis, cfg.initial);
  switch (rm.tier) {
    case ModelTier::spin_mixing:
      sys.model = spin_mixing(rm.dispersive, *sys.atoms_basis);
      sys.psi0 = StateVector(atoms0);
      break;
    case ModelTier::dispersive:
      sys.model = dispersive(*rm.dicke, rm.kappa, *sys.atoms_basis);
      sys.psi0 = StateVector(atoms0);
      break;
    case ModelTier::full_dicke: {
      sys.joint_basis.emplace(*sys.atoms_basis, photon_cutoff);
      sys.model = full_dicke(*rm.dicke, rm.kappa, *sys.joint_basis, rm.include_residuals);
      CVector psi = CVector::Zero(static_cast<Eigen::Index>(sys.joint_basis->dimension()));
      for (Eigen::Index i = 0; i < atoms0.size(); ++i)
        psi[static_cast<Eigen::Index>(sys.joint_basis->index(static_cast<std::size_t>(i), 0))] = atoms0[i];
      sys.psi0 = StateVector(psi);
      break;
    }
  }
  return sys;
}

std::optional<std::size_t> SimulationOutput::peak() const {
  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < squeezing.size(); ++k) {
    if (!squeezing[k].defined) continue;
    if (!best || squeezing[k].xi2_min < squeezing[*best].xi2_min) best = k;
  }
  return best;
}

JackknifeEstimate SimulationOutput::xi2_at(std::size_t k) const {
  if (!xi2_jackknife.empty()) return xi2_jackknife[k];
  return {squeezing[k].xi2_min, 0.0};
}

SimulationOutput simulate(const RunConfig& cfg, unsigned threads) {
  const ResolvedModel rm = resolve_model(cfg);
  const double lam = std::abs(rm.dispersive.Lambda);
  if (cfg.time.lambda_units && !(lam > 0.0))
    throw ConfigError("/time/unit", "Lambda vanishes for these parameters; give times in seconds");
  std::vector<double> times = cfg.time.values;
  if (cfg.time.lambda_units)
    for (double& t : times) t /= lam;

  SimulationOutput out = run_once(cfg, rm, times, cfg.photon_cutoff, threads);
  out.lambda_abs = lam;
  out.warnings = rm.warnings;
  if (rm.tier == ModelTier::full_dicke && cfg.cutoff_check) {
    const SimulationOutput ref = run_once(cfg, rm, times, cfg.photon_cutoff + 4, threads);
    const double shift = max_shift(out, ref);
    out.cutoff = CutoffConvergence{cfg.photon_cutoff, cfg.photon_cutoff + 4, shift, shift < 1e-6};
    if (!out.cutoff->converged)
      out.warnings.push_back("photon cutoff not converged: observables move by " + std::to_string(shift) +
                             " at cutoff + 4");
  }
  return out;
}

}  // namespace spinor::cli
