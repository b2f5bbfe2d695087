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

// Time evolution: exact density-matrix integration of the Lindblad equation
// and Monte-Carlo wavefunction (quantum jump) ensembles.

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "spinor/hilbert.hpp"
#include "spinor/models.hpp"
#include "spinor/ode.hpp"

namespace spinor {

class StateVector {
 public:
  StateVector() = default;
  /// Stores the amplitudes as given (no normalization).
  explicit StateVector(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {}
  static StateVector normalized(CVector amplitudes);

  const CVector& amplitudes() const { return amplitudes_; }
  Eigen::Index dim() const { return amplitudes_.size(); }
  double norm() const { return amplitudes_.norm(); }
  void renormalize();

 private:
  CVector amplitudes_;
};

class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(CMatrix elements);
  static DensityMatrix pure(const StateVector& psi);

  const CMatrix& elements() const { return rho_; }
  Eigen::Index dim() const { return rho_.rows(); }

  cplx trace() const { return rho_.trace(); }
  double hermiticity_error() const;
  double min_eigenvalue() const;
  cplx expectation(const SparseOperator& op) const;

 private:
  CMatrix rho_;
};

struct MasterOptions {
  OdeOptions ode;
  Eigen::Index max_dim = 4000;
};

/// rho(t) at each sample time. Sample times must be nonnegative and sorted;
/// integration starts at t = 0. Throws CapacityError when the dimension
/// exceeds options.max_dim.
std::vector<DensityMatrix> evolve_master(const LindbladModel& model, const DensityMatrix& rho0,
                                         std::span<const double> sample_times,
                                         const MasterOptions& options = {});

/// Per-worker observable evaluation. `support` lists (sorted) the only
/// indices where psi may be nonzero, which lets evaluators skip empty blocks.
class ObservableEvaluator {
 public:
  virtual ~ObservableEvaluator() = default;
  virtual std::vector<std::string> names() const = 0;
  virtual void evaluate(const CVector& psi, std::span<const Eigen::Index> support,
                        std::span<double> out) = 0;
  virtual std::unique_ptr<ObservableEvaluator> clone() const = 0;
};

/// Expectation values of arbitrary hermitian operators (real parts).
class OperatorExpectations final : public ObservableEvaluator {
 public:
  OperatorExpectations(std::vector<SparseOperator> ops, std::vector<std::string> names);
  std::vector<std::string> names() const override { return names_; }
  void evaluate(const CVector& psi, std::span<const Eigen::Index> support, std::span<double> out) override;
  std::unique_ptr<ObservableEvaluator> clone() const override;

 private:
  std::vector<SparseOperator> ops_;
  std::vector<std::string> names_;
};

struct TrajectoryConfig {
  std::size_t n_traj = 1000;
  std::uint64_t seed = 0;
  std::vector<double> sample_times;
  OdeOptions ode;
  double jump_time_tol = 1e-10;  // bisection tolerance relative to the step
  unsigned threads = 0;          // 0: hardware concurrency

  void validate() const;
};

struct JumpRecord {
  double time = 0.0;
  std::size_t channel = 0;
};

struct JackknifeEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct EnsembleResult {
  std::vector<double> sample_times;
  std::vector<std::string> names;
  std::size_t n_traj = 0;
  /// Row-major [trajectory][sample][observable].
  std::vector<double> per_trajectory;
  /// [sample][observable]
  Eigen::MatrixXd mean, variance, std_error;
  std::vector<std::vector<JumpRecord>> jumps;

  std::size_t n_samples() const { return sample_times.size(); }
  std::size_t n_observables() const { return names.size(); }
  double value(std::size_t traj, std::size_t sample, std::size_t obs) const {
    return per_trajectory[(traj * n_samples() + sample) * n_observables() + obs];
  }
  std::span<const double> trajectory_sample(std::size_t traj, std::size_t sample) const {
    return {per_trajectory.data() + (traj * n_samples() + sample) * n_observables(), n_observables()};
  }
  std::size_t index_of(const std::string& name) const;

  /// f evaluated on the ensemble means at one sample time, with a
  /// delete-one-group jackknife error over contiguous trajectory groups.
  JackknifeEstimate jackknife(std::size_t sample,
                              const std::function<double(std::span<const double>)>& f,
                              std::size_t groups = 100) const;

  /// Mean and standard error of the number of jumps up to time t.
  JackknifeEstimate mean_jumps_before(double t) const;
};

/// Monte-Carlo wavefunction ensemble. psi0 must be normalized. Results are
/// bitwise reproducible for fixed (seed, n_traj) regardless of thread count.
EnsembleResult evolve_trajectories(const LindbladModel& model, const StateVector& psi0,
                                   const TrajectoryConfig& cfg, const ObservableEvaluator& observables);

struct NoJumpSample {
  double time = 0.0;
  StateVector state;                // renormalized conditional state
  double no_jump_probability = 1.0; // squared norm of the unnormalized state
};

/// Deterministic evolution under H - (i/2) sum L^dag L, i.e. the state
/// conditioned on no jump having occurred. With all rates zero this is
/// ordinary Schrodinger evolution.
std::vector<NoJumpSample> evolve_no_jump(const LindbladModel& model, const StateVector& psi0,
                                         std::span<const double> sample_times, const OdeOptions& ode = {});

struct CutoffConvergence {
  int cutoff = 0;            // last cutoff tried
  int reference_cutoff = 0;  // cutoff + step
  double max_shift = 0.0;    // max |obs(cutoff) - obs(reference)|
  bool converged = false;
};

/// Photon-cutoff convergence: evaluates run(c) and run(c + step) starting at
/// c = cutoff and raising c by step until every observable moves by less than
/// tol or c exceeds max_cutoff. run must return the same number of values for
/// every cutoff (typically observable time series).
CutoffConvergence converge_photon_cutoff(const std::function<std::vector<double>(int)>& run, int cutoff,
                                         int max_cutoff, double tol = 1e-6, int step = 4);

}  // namespace spinor
