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

#include "spinor/evolution.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <cmath>
#include <numeric>
#include <thread>

#include <Eigen/Eigenvalues>

#include "spinor/error.hpp"
#include "spinor/rng.hpp"

namespace spinor {

StateVector StateVector::normalized(CVector amplitudes) {
  StateVector s(std::move(amplitudes));
  s.renormalize();
  return s;
}

void StateVector::renormalize() {
  const double n = amplitudes_.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("state vector has zero or non-finite norm");
  amplitudes_ /= n;
}

DensityMatrix::DensityMatrix(CMatrix elements) : rho_(std::move(elements)) {
  if (rho_.rows() != rho_.cols()) throw InvalidArgument("density matrix must be square");
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  const CVector& a = psi.amplitudes();
  return DensityMatrix(a * a.adjoint());
}

double DensityMatrix::hermiticity_error() const {
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const CMatrix h = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

cplx DensityMatrix::expectation(const SparseOperator& op) const {
  if (op.rows() != dim() || op.cols() != dim()) throw InvalidArgument("operator/density matrix dimension mismatch");
  // tr(O rho) = sum_ij O_ij rho_ji
  cplx acc = 0.0;
  const auto& m = op.matrix();
  for (Eigen::Index i = 0; i < m.outerSize(); ++i)
    for (SparseOperator::Matrix::InnerIterator it(m, i); it; ++it) acc += it.value() * rho_(it.col(), i);
  return acc;
}

namespace {

void check_sample_times(std::span<const double> ts) {
  for (std::size_t k = 0; k < ts.size(); ++k) {
    if (!std::isfinite(ts[k]) || ts[k] < 0.0) throw InvalidArgument("sample times must be finite and >= 0");
    if (k > 0 && ts[k] < ts[k - 1]) throw InvalidArgument("sample times must be sorted");
  }
}

}  // namespace

std::vector<DensityMatrix> evolve_master(const LindbladModel& model, const DensityMatrix& rho0,
                                         std::span<const double> sample_times, const MasterOptions& options) {
  const Eigen::Index d = model.dim();
  if (d > options.max_dim)
    throw CapacityError("dimension " + std::to_string(d) + " exceeds the density-matrix limit of " +
                        std::to_string(options.max_dim) + "; use trajectories");
  if (rho0.dim() != d) throw InvalidArgument("initial density matrix has the wrong dimension");
  check_sample_times(sample_times);

  using ColMat = Eigen::SparseMatrix<cplx, Eigen::ColMajor>;
  const SparseOperator k_op = model.effective_hamiltonian();
  const SparseOperator::Matrix minus_i_k = cplx(0, -1) * k_op.matrix();
  const ColMat i_kdag = ColMat(cplx(0, 1) * k_op.adjoint().matrix());
  std::vector<SparseOperator::Matrix> c_ops;
  std::vector<ColMat> c_dags;
  for (const auto& j : model.jumps()) {
    if (j.rate == 0.0) continue;
    c_ops.emplace_back(std::sqrt(j.rate) * j.op.matrix());
    c_dags.emplace_back(ColMat(std::sqrt(j.rate) * j.op.adjoint().matrix()));
  }

  CMatrix tmp(d, d);
  auto rhs = [&](double, const CVector& y, CVector& dy) {
    Eigen::Map<const CMatrix> rho(y.data(), d, d);
    Eigen::Map<CMatrix> out(dy.data(), d, d);
    out.noalias() = minus_i_k * rho;
    out.noalias() += rho * i_kdag;
    for (std::size_t k = 0; k < c_ops.size(); ++k) {
      tmp.noalias() = rho * c_dags[k];
      out.noalias() += c_ops[k] * tmp;
    }
  };

  DormandPrince45 ode(rhs, options.ode);
  CVector y = Eigen::Map<const CVector>(rho0.elements().data(), d * d);
  ode.reset(0.0, y);
  std::vector<DensityMatrix> out;
  out.reserve(sample_times.size());
  for (double t : sample_times) {
    if (t > ode.time()) ode.integrate_to(t);
    out.emplace_back(CMatrix(Eigen::Map<const CMatrix>(ode.state().data(), d, d)));
  }
  return out;
}

OperatorExpectations::OperatorExpectations(std::vector<SparseOperator> ops, std::vector<std::string> names)
    : ops_(std::move(ops)), names_(std::move(names)) {
  if (ops_.size() != names_.size()) throw InvalidArgument("operator and name lists differ in length");
}

void OperatorExpectations::evaluate(const CVector& psi, std::span<const Eigen::Index> support,
                                    std::span<double> out) {
  for (std::size_t k = 0; k < ops_.size(); ++k) {
    const auto& m = ops_[k].matrix();
    cplx acc = 0.0;
    for (Eigen::Index i : support) {
      if (psi[i] == cplx(0.0)) continue;
      cplx row = 0.0;
      for (SparseOperator::Matrix::InnerIterator it(m, i); it; ++it) row += it.value() * psi[it.col()];
      acc += std::conj(psi[i]) * row;
    }
    out[k] = acc.real();
  }
}

std::unique_ptr<ObservableEvaluator> OperatorExpectations::clone() const {
  return std::make_unique<OperatorExpectations>(*this);
}

void TrajectoryConfig::validate() const {
  if (n_traj == 0) throw InvalidArgument("n_traj must be positive");
  if (!(jump_time_tol > 0.0 && jump_time_tol < 1.0)) throw InvalidArgument("jump_time_tol must lie in (0, 1)");
  check_sample_times(sample_times);
}

std::size_t EnsembleResult::index_of(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw InvalidArgument("unknown observable '" + name + "'");
  return static_cast<std::size_t>(it - names.begin());
}

JackknifeEstimate EnsembleResult::jackknife(std::size_t sample,
                                            const std::function<double(std::span<const double>)>& f,
                                            std::size_t groups) const {
  if (sample >= n_samples()) throw InvalidArgument("sample index out of range");
  const std::size_t m = n_observables();
  const std::size_t g = std::max<std::size_t>(1, std::min(groups, n_traj));
  std::vector<double> total(m, 0.0);
  std::vector<std::vector<double>> group_sum(g, std::vector<double>(m, 0.0));
  std::vector<std::size_t> group_n(g, 0);
  for (std::size_t t = 0; t < n_traj; ++t) {
    const std::size_t gi = t * g / n_traj;
    auto v = trajectory_sample(t, sample);
    for (std::size_t k = 0; k < m; ++k) {
      total[k] += v[k];
      group_sum[gi][k] += v[k];
    }
    ++group_n[gi];
  }
  std::vector<double> mean(m);
  for (std::size_t k = 0; k < m; ++k) mean[k] = total[k] / static_cast<double>(n_traj);
  JackknifeEstimate est{f(mean), 0.0};
  if (g < 2) return est;

  std::vector<double> loo(g), reduced(m);
  for (std::size_t gi = 0; gi < g; ++gi) {
    const double n_rest = static_cast<double>(n_traj - group_n[gi]);
    for (std::size_t k = 0; k < m; ++k) reduced[k] = (total[k] - group_sum[gi][k]) / n_rest;
    loo[gi] = f(reduced);
  }
  const double bar = std::accumulate(loo.begin(), loo.end(), 0.0) / static_cast<double>(g);
  double ss = 0.0;
  for (double x : loo) ss += (x - bar) * (x - bar);
  est.std_error = std::sqrt(ss * static_cast<double>(g - 1) / static_cast<double>(g));
  return est;
}

JackknifeEstimate EnsembleResult::mean_jumps_before(double t) const {
  double s = 0.0, s2 = 0.0;
  for (const auto& traj : jumps) {
    const auto c = static_cast<double>(
        std::count_if(traj.begin(), traj.end(), [t](const JumpRecord& j) { return j.time <= t; }));
    s += c;
    s2 += c * c;
  }
  const auto n = static_cast<double>(jumps.size());
  if (n == 0) return {};
  const double mean = s / n;
  const double var = n > 1 ? std::max(0.0, (s2 - n * mean * mean) / (n - 1)) : 0.0;
  return {mean, std::sqrt(var / n)};
}

namespace {

// Connected components of the sparsity graph of H_eff. The non-Hermitian
// evolution never couples different components, so a trajectory only has
// to integrate the components where its current state has weight.
class BlockEngine {
 public:
  BlockEngine(const LindbladModel& model) : dim_(model.dim()) {
    const SparseOperator heff = model.effective_hamiltonian();
    const auto& h = heff.matrix();

    std::vector<Eigen::Index> parent(static_cast<std::size_t>(dim_));
    std::iota(parent.begin(), parent.end(), Eigen::Index{0});
    auto find = [&](Eigen::Index x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (Eigen::Index i = 0; i < h.outerSize(); ++i)
      for (SparseOperator::Matrix::InnerIterator it(h, i); it; ++it) {
        const Eigen::Index a = find(i), b = find(it.col());
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }

    block_of_.assign(static_cast<std::size_t>(dim_), -1);
    std::vector<Eigen::Index> root_block(static_cast<std::size_t>(dim_), -1);
    for (Eigen::Index i = 0; i < dim_; ++i) {
      const Eigen::Index r = find(i);
      if (root_block[r] < 0) {
        root_block[r] = static_cast<Eigen::Index>(members_.size());
        members_.emplace_back();
      }
      block_of_[i] = root_block[r];
      members_[root_block[r]].push_back(i);
    }

    local_.assign(static_cast<std::size_t>(dim_), 0);
    for (const auto& mem : members_)
      for (std::size_t k = 0; k < mem.size(); ++k) local_[mem[k]] = static_cast<Eigen::Index>(k);

    for (const auto& mem : members_) {
      const auto n = static_cast<Eigen::Index>(mem.size());
      std::vector<Eigen::Triplet<cplx>> trips;
      for (Eigen::Index r = 0; r < n; ++r)
        for (SparseOperator::Matrix::InnerIterator it(h, mem[r]); it; ++it)
          trips.emplace_back(r, local_[it.col()], cplx(0, -1) * it.value());
      SparseOperator::Matrix m(n, n);
      m.setFromTriplets(trips.begin(), trips.end());
      generators_.push_back(std::move(m));
    }

    for (const auto& j : model.jumps()) {
      rates_.push_back(j.rate);
      jump_cols_.emplace_back(j.op.matrix());
    }
  }

  Eigen::Index dim() const { return dim_; }
  std::size_t block_count() const { return members_.size(); }
  std::size_t n_jumps() const { return rates_.size(); }
  double rate(std::size_t k) const { return rates_[k]; }
  const Eigen::SparseMatrix<cplx, Eigen::ColMajor>& jump(std::size_t k) const { return jump_cols_[k]; }

  // Active set for a full vector: blocks with any nonzero amplitude.
  std::vector<Eigen::Index> active_blocks(const CVector& full, std::span<const Eigen::Index> support) const {
    std::vector<Eigen::Index> blocks;
    for (Eigen::Index i : support)
      if (full[i] != cplx(0.0)) blocks.push_back(block_of_[i]);
    std::sort(blocks.begin(), blocks.end());
    blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());
    return blocks;
  }

  std::vector<Eigen::Index> all_indices() const {
    std::vector<Eigen::Index> v(static_cast<std::size_t>(dim_));
    std::iota(v.begin(), v.end(), Eigen::Index{0});
    return v;
  }

  // Layout of the compact vector for a set of active blocks.
  struct Layout {
    std::vector<Eigen::Index> blocks;
    std::vector<Eigen::Index> offsets;  // size blocks+1
    std::vector<Eigen::Index> support;  // sorted full indices
  };

  Layout layout(std::vector<Eigen::Index> blocks) const {
    Layout l;
    l.blocks = std::move(blocks);
    l.offsets.push_back(0);
    for (Eigen::Index b : l.blocks) {
      l.offsets.push_back(l.offsets.back() + static_cast<Eigen::Index>(members_[b].size()));
      l.support.insert(l.support.end(), members_[b].begin(), members_[b].end());
    }
    std::sort(l.support.begin(), l.support.end());
    return l;
  }

  void gather(const Layout& l, const CVector& full, CVector& compact) const {
    compact.resize(l.offsets.back());
    for (std::size_t bi = 0; bi < l.blocks.size(); ++bi) {
      const auto& mem = members_[l.blocks[bi]];
      for (std::size_t k = 0; k < mem.size(); ++k) compact[l.offsets[bi] + static_cast<Eigen::Index>(k)] = full[mem[k]];
    }
  }

  void scatter(const Layout& l, const CVector& compact, CVector& full) const {
    for (std::size_t bi = 0; bi < l.blocks.size(); ++bi) {
      const auto& mem = members_[l.blocks[bi]];
      for (std::size_t k = 0; k < mem.size(); ++k) full[mem[k]] = compact[l.offsets[bi] + static_cast<Eigen::Index>(k)];
    }
  }

  static void clear(std::span<const Eigen::Index> support, CVector& full) {
    for (Eigen::Index i : support) full[i] = 0.0;
  }

  void apply_generator(const Layout& l, const CVector& y, CVector& dy) const {
    dy.resize(y.size());
    for (std::size_t bi = 0; bi < l.blocks.size(); ++bi) {
      const Eigen::Index o = l.offsets[bi], n = l.offsets[bi + 1] - o;
      dy.segment(o, n).noalias() = generators_[l.blocks[bi]] * y.segment(o, n);
    }
  }

  // out = C_k psi, with psi supported on `support`; returns the support of out.
  std::vector<Eigen::Index> apply_jump(std::size_t k, const CVector& psi, std::span<const Eigen::Index> support,
                                       CVector& out) const {
    std::vector<Eigen::Index> touched;
    const auto& c = jump_cols_[k];
    for (Eigen::Index j : support) {
      const cplx a = psi[j];
      if (a == cplx(0.0)) continue;
      for (Eigen::SparseMatrix<cplx, Eigen::ColMajor>::InnerIterator it(c, j); it; ++it) {
        if (out[it.row()] == cplx(0.0)) touched.push_back(it.row());
        out[it.row()] += it.value() * a;
      }
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    return touched;
  }

 private:
  Eigen::Index dim_;
  std::vector<Eigen::Index> block_of_, local_;
  std::vector<std::vector<Eigen::Index>> members_;
  std::vector<SparseOperator::Matrix> generators_;
  std::vector<double> rates_;
  std::vector<Eigen::SparseMatrix<cplx, Eigen::ColMajor>> jump_cols_;
};

unsigned resolve_threads(unsigned requested, std::size_t work) {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(work, 1)));
}

struct TrajectoryOutput {
  std::vector<JumpRecord> jumps;
};

class TrajectoryRunner {
 public:
  TrajectoryRunner(const BlockEngine& engine, const TrajectoryConfig& cfg, std::unique_ptr<ObservableEvaluator> obs,
                   std::size_t n_obs)
      : eng_(engine), cfg_(cfg), obs_(std::move(obs)), n_obs_(n_obs), full_(CVector::Zero(engine.dim())),
        scratch_(CVector::Zero(engine.dim())),
        ode_([this](double, const CVector& y, CVector& dy) { eng_.apply_generator(layout_, y, dy); }, cfg.ode) {}

  void run(const CVector& psi0, std::size_t traj, std::span<double> out, std::vector<JumpRecord>& jumps) {
    RandomStream rng(cfg_.seed, traj);
    const auto all = eng_.all_indices();
    layout_ = eng_.layout(eng_.active_blocks(psi0, all));
    eng_.gather(layout_, psi0, y_);
    ode_.reset(0.0, y_);
    double threshold = rng.uniform();

    const auto& ts = cfg_.sample_times;
    std::size_t s = 0;
    while (s < ts.size()) {
      if (ts[s] <= ode_.time()) {
        record(ode_.state(), out.subspan(s * n_obs_, n_obs_));
        ++s;
        continue;
      }
      ode_.step(ts[s]);
      if (ode_.state().squaredNorm() > threshold) continue;

      // Norm crossed the threshold inside the last step: bisect on the
      // dense output for the jump time.
      double lo = ode_.step_start(), hi = ode_.time();
      const double tol = cfg_.jump_time_tol * (hi - lo);
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        ode_.dense_output(mid, y_);
        if (y_.squaredNorm() > threshold) lo = mid;
        else hi = mid;
      }
      ode_.dense_output(hi, y_);
      const std::size_t channel = jump(rng);
      jumps.push_back({hi, channel});
      ode_.reset(hi, y_);
      threshold = rng.uniform();
    }
  }

 private:
  void record(const CVector& y, std::span<double> out) {
    eng_.scatter(layout_, y, full_);
    const double n = y.norm();
    for (Eigen::Index i : layout_.support) full_[i] /= n;
    obs_->evaluate(full_, layout_.support, out);
    BlockEngine::clear(layout_.support, full_);
  }

  // Applies a jump to the state in y_; rebuilds layout_ and y_.
  std::size_t jump(RandomStream& rng) {
    eng_.scatter(layout_, y_, full_);
    std::vector<double> weights(eng_.n_jumps(), 0.0);
    double total = 0.0;
    for (std::size_t k = 0; k < eng_.n_jumps(); ++k) {
      if (eng_.rate(k) == 0.0) continue;
      const auto touched = eng_.apply_jump(k, full_, layout_.support, scratch_);
      double w = 0.0;
      for (Eigen::Index i : touched) w += std::norm(scratch_[i]);
      BlockEngine::clear(touched, scratch_);
      weights[k] = eng_.rate(k) * w;
      total += weights[k];
    }
    if (!(total > 0.0)) throw IntegrationError("jump requested but every jump channel annihilates the state", ode_.time());

    const double u = rng.uniform() * total;
    std::size_t channel = 0;
    double acc = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      if (weights[k] == 0.0) continue;
      channel = k;
      acc += weights[k];
      if (u < acc) break;
    }

    const auto touched = eng_.apply_jump(channel, full_, layout_.support, scratch_);
    BlockEngine::clear(layout_.support, full_);
    double n2 = 0.0;
    for (Eigen::Index i : touched) n2 += std::norm(scratch_[i]);
    const double inv = 1.0 / std::sqrt(n2);
    for (Eigen::Index i : touched) scratch_[i] *= inv;

    layout_ = eng_.layout(eng_.active_blocks(scratch_, touched));
    eng_.gather(layout_, scratch_, y_);
    BlockEngine::clear(touched, scratch_);
    return channel;
  }

  const BlockEngine& eng_;
  const TrajectoryConfig& cfg_;
  std::unique_ptr<ObservableEvaluator> obs_;
  std::size_t n_obs_;
  CVector full_, scratch_, y_;
  BlockEngine::Layout layout_;
  DormandPrince45 ode_;
};

}  // namespace

EnsembleResult evolve_trajectories(const LindbladModel& model, const StateVector& psi0,
                                   const TrajectoryConfig& cfg, const ObservableEvaluator& observables) {
  cfg.validate();
  if (psi0.dim() != model.dim()) throw InvalidArgument("initial state has the wrong dimension");
  if (std::abs(psi0.norm() - 1.0) > 1e-10) throw InvalidArgument("initial state must be normalized");

  const BlockEngine engine(model);
  EnsembleResult res;
  res.sample_times = cfg.sample_times;
  res.names = observables.names();
  res.n_traj = cfg.n_traj;
  const std::size_t n_s = res.n_samples(), n_o = res.n_observables();
  res.per_trajectory.assign(cfg.n_traj * n_s * n_o, 0.0);
  res.jumps.assign(cfg.n_traj, {});

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    try {
      TrajectoryRunner runner(engine, cfg, observables.clone(), n_o);
      for (std::size_t t = next++; t < cfg.n_traj && !failed; t = next++) {
        std::span<double> out(res.per_trajectory.data() + t * n_s * n_o, n_s * n_o);
        runner.run(psi0.amplitudes(), t, out, res.jumps[t]);
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      failed = true;
    }
  };

  const unsigned n_threads = resolve_threads(cfg.threads, cfg.n_traj);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  // Fold in trajectory order so the statistics do not depend on scheduling.
  res.mean = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_s), static_cast<Eigen::Index>(n_o));
  res.variance = res.mean;
  for (std::size_t t = 0; t < cfg.n_traj; ++t)
    for (std::size_t s = 0; s < n_s; ++s)
      for (std::size_t k = 0; k < n_o; ++k) res.mean(s, k) += res.value(t, s, k);
  const auto n = static_cast<double>(cfg.n_traj);
  res.mean /= n;
  for (std::size_t t = 0; t < cfg.n_traj; ++t)
    for (std::size_t s = 0; s < n_s; ++s)
      for (std::size_t k = 0; k < n_o; ++k) {
        const double d = res.value(t, s, k) - res.mean(s, k);
        res.variance(s, k) += d * d;
      }
  res.variance /= std::max(1.0, n - 1.0);
  // For a plain mean the delete-one jackknife error is exactly sqrt(var/n).
  res.std_error = (res.variance / n).cwiseSqrt();
  return res;
}

std::vector<NoJumpSample> evolve_no_jump(const LindbladModel& model, const StateVector& psi0,
                                         std::span<const double> sample_times, const OdeOptions& ode_opt) {
  if (psi0.dim() != model.dim()) throw InvalidArgument("initial state has the wrong dimension");
  check_sample_times(sample_times);
  const SparseOperator::Matrix gen = cplx(0, -1) * model.effective_hamiltonian().matrix();
  DormandPrince45 ode([&](double, const CVector& y, CVector& dy) { dy.noalias() = gen * y; }, ode_opt);
  ode.reset(0.0, psi0.amplitudes());
  std::vector<NoJumpSample> out;
  out.reserve(sample_times.size());
  for (double t : sample_times) {
    if (t > ode.time()) ode.integrate_to(t);
    const double p = ode.state().squaredNorm();
    out.push_back({t, StateVector(ode.state() / std::sqrt(p)), p});
  }
  return out;
}

CutoffConvergence converge_photon_cutoff(const std::function<std::vector<double>(int)>& run, int cutoff,
                                         int max_cutoff, double tol, int step) {
  if (cutoff < 1 || step < 1) throw InvalidArgument("photon cutoff and step must be positive");
  if (!(tol > 0.0)) throw InvalidArgument("convergence tolerance must be positive");
  CutoffConvergence res;
  std::vector<double> lo = run(cutoff);
  for (int c = cutoff;; c += step) {
    const std::vector<double> hi = run(c + step);
    if (hi.size() != lo.size()) throw InvalidArgument("observable count changed with the cutoff");
    double shift = 0.0;
    for (std::size_t k = 0; k < lo.size(); ++k) shift = std::max(shift, std::abs(hi[k] - lo[k]));
    res = {c, c + step, shift, shift < tol};
    if (res.converged || c + step > max_cutoff) return res;
    lo = hi;
  }
}

}  // namespace spinor
