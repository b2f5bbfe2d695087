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

#include "spinor/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <boost/math/distributions/students_t.hpp>

#include "spinor/error.hpp"

namespace spinor {

const std::array<std::string, Moments::kCount>& Moments::names() {
  static const std::array<std::string, kCount> n = {
      "sx",   "sy",     "sz",      "qyz",    "qxz",    "dq_yy",   "dq_xx",  "sx2",          "qyz2",
      "sx_qyz", "sy2",  "qxz2",    "sy_qxz", "n_minus", "n_zero", "n_plus", "splus_sminus", "photons"};
  return n;
}

std::array<double, Moments::kCount> Moments::pack() const {
  return {sx,  sy,   sz,     qyz,     qxz,    dq_yy,  dq_xx,        sx2,    qyz2,
          sx_qyz, sy2, qxz2, sy_qxz, n_minus, n_zero, n_plus, splus_sminus, photons};
}

Moments Moments::unpack(std::span<const double> v, int atom_count) {
  if (v.size() != kCount) throw InvalidArgument("moment vector has the wrong length");
  Moments m;
  m.atom_count = atom_count;
  m.sx = v[0];
  m.sy = v[1];
  m.sz = v[2];
  m.qyz = v[3];
  m.qxz = v[4];
  m.dq_yy = v[5];
  m.dq_xx = v[6];
  m.sx2 = v[7];
  m.qyz2 = v[8];
  m.sx_qyz = v[9];
  m.sy2 = v[10];
  m.qxz2 = v[11];
  m.sy_qxz = v[12];
  m.n_minus = v[13];
  m.n_zero = v[14];
  m.n_plus = v[15];
  m.splus_sminus = v[16];
  m.photons = v[17];
  return m;
}

MomentEvaluator::MomentEvaluator(const SymmetricBasis& basis) : n_atoms_(basis.atom_count()) {
  init(spin_operators(basis), quadrupole_operators(basis),
       {number(basis, Mode::minus), number(basis, Mode::zero), number(basis, Mode::plus)},
       SparseOperator::zero(static_cast<Eigen::Index>(basis.dimension()), static_cast<Eigen::Index>(basis.dimension())));
}

MomentEvaluator::MomentEvaluator(const JointBasis& jb) : n_atoms_(jb.atoms().atom_count()) {
  const auto& b = jb.atoms();
  const SpinOperators s = spin_operators(b);
  const QuadrupoleOperators q = quadrupole_operators(b);
  const SparseOperator a = jb.cavity_annihilator();
  init({jb.embed_atom(s.sx), jb.embed_atom(s.sy), jb.embed_atom(s.sz), jb.embed_atom(s.splus),
        jb.embed_atom(s.sminus)},
       {jb.embed_atom(q.qyz), jb.embed_atom(q.qxz), jb.embed_atom(q.qzz_minus_qyy), jb.embed_atom(q.qzz_minus_qxx)},
       {jb.embed_atom(number(b, Mode::minus)), jb.embed_atom(number(b, Mode::zero)),
        jb.embed_atom(number(b, Mode::plus))},
       a.adjoint() * a);
}

void MomentEvaluator::init(const SpinOperators& s, const QuadrupoleOperators& q, std::array<SparseOperator, 3> n,
                           SparseOperator photons) {
  dim_ = s.sx.dim();
  sx_ = s.sx;
  sy_ = s.sy;
  sz_ = s.sz;
  sminus_ = s.sminus;
  qyz_ = q.qyz;
  qxz_ = q.qxz;
  dq_yy_ = q.qzz_minus_qyy;
  dq_xx_ = q.qzz_minus_qxx;
  n_minus_ = std::move(n[0]);
  n_zero_ = std::move(n[1]);
  n_plus_ = std::move(n[2]);
  photons_ = std::move(photons);
  sx_c_ = ColMat(sx_.matrix());
  sy_c_ = ColMat(sy_.matrix());
  qyz_c_ = ColMat(qyz_.matrix());
  qxz_c_ = ColMat(qxz_.matrix());
  sminus_c_ = ColMat(sminus_.matrix());
  w1_ = CVector::Zero(dim_);
  w2_ = CVector::Zero(dim_);
  mark_.assign(static_cast<std::size_t>(dim_), 0);
}

void MomentEvaluator::apply(const ColMat& op, const CVector& psi, std::span<const Eigen::Index> support,
                            CVector& out) {
  for (Eigen::Index j : support) {
    const cplx a = psi[j];
    if (a == cplx(0.0)) continue;
    for (ColMat::InnerIterator it(op, j); it; ++it) {
      const Eigen::Index r = it.row();
      if (!mark_[r]) {
        mark_[r] = 1;
        touched_.push_back(r);
      }
      out[r] += it.value() * a;
    }
  }
}

void MomentEvaluator::clear_touched() {
  for (Eigen::Index r : touched_) {
    mark_[r] = 0;
    w1_[r] = 0.0;
    w2_[r] = 0.0;
  }
  touched_.clear();
}

namespace {

double diag_or_row_expectation(const SparseOperator& op, const CVector& psi, std::span<const Eigen::Index> support) {
  const auto& m = op.matrix();
  cplx acc = 0.0;
  for (Eigen::Index i : support) {
    if (psi[i] == cplx(0.0)) continue;
    cplx row = 0.0;
    for (SparseOperator::Matrix::InnerIterator it(m, i); it; ++it) row += it.value() * psi[it.col()];
    acc += std::conj(psi[i]) * row;
  }
  return acc.real();
}

}  // namespace

Moments MomentEvaluator::evaluate(const CVector& psi, std::span<const Eigen::Index> support) {
  if (psi.size() != dim_) throw InvalidArgument("state dimension does not match the moment evaluator");
  Moments m;
  m.atom_count = n_atoms_;
  m.sz = diag_or_row_expectation(sz_, psi, support);
  m.dq_yy = diag_or_row_expectation(dq_yy_, psi, support);
  m.dq_xx = diag_or_row_expectation(dq_xx_, psi, support);
  m.n_minus = diag_or_row_expectation(n_minus_, psi, support);
  m.n_zero = diag_or_row_expectation(n_zero_, psi, support);
  m.n_plus = diag_or_row_expectation(n_plus_, psi, support);
  m.photons = diag_or_row_expectation(photons_, psi, support);

  // For hermitian A, B: <A> = <psi|A psi>, <AB> = <A psi|B psi>.
  auto pair = [&](const ColMat& a, const ColMat& b, double& ma, double& mb, double& a2, double& b2, double& ab) {
    apply(a, psi, support, w1_);
    apply(b, psi, support, w2_);
    cplx ea = 0.0, eb = 0.0;
    double sa = 0.0, sb = 0.0;
    cplx cab = 0.0;
    for (Eigen::Index r : touched_) {
      ea += std::conj(psi[r]) * w1_[r];
      eb += std::conj(psi[r]) * w2_[r];
      sa += std::norm(w1_[r]);
      sb += std::norm(w2_[r]);
      cab += std::conj(w1_[r]) * w2_[r];
    }
    ma = ea.real();
    mb = eb.real();
    a2 = sa;
    b2 = sb;
    ab = cab.real();
    clear_touched();
  };
  pair(sx_c_, qyz_c_, m.sx, m.qyz, m.sx2, m.qyz2, m.sx_qyz);
  pair(sy_c_, qxz_c_, m.sy, m.qxz, m.sy2, m.qxz2, m.sy_qxz);

  apply(sminus_c_, psi, support, w1_);
  double s2 = 0.0;
  for (Eigen::Index r : touched_) s2 += std::norm(w1_[r]);
  m.splus_sminus = s2;
  clear_touched();
  return m;
}

Moments MomentEvaluator::evaluate(const StateVector& psi) {
  std::vector<Eigen::Index> all(static_cast<std::size_t>(psi.dim()));
  for (Eigen::Index i = 0; i < psi.dim(); ++i) all[static_cast<std::size_t>(i)] = i;
  return evaluate(psi.amplitudes(), all);
}

Moments MomentEvaluator::evaluate(const DensityMatrix& rho) const {
  if (rho.dim() != dim_) throw InvalidArgument("density matrix dimension does not match the moment evaluator");
  const double tr = rho.trace().real();
  auto ex = [&](const SparseOperator& op) { return rho.expectation(op).real() / tr; };
  // tr(AB rho) without forming AB: sum_i (A rho B^T... ) is awkward, so
  // form B rho densely once per pair and contract with A.
  auto ex2 = [&](const SparseOperator& a, const SparseOperator& b) {
    const CMatrix brho = b.matrix() * rho.elements();
    cplx acc = 0.0;
    const auto& am = a.matrix();
    for (Eigen::Index i = 0; i < am.outerSize(); ++i)
      for (SparseOperator::Matrix::InnerIterator it(am, i); it; ++it) acc += it.value() * brho(it.col(), i);
    return acc / tr;
  };
  Moments m;
  m.atom_count = n_atoms_;
  m.sx = ex(sx_);
  m.sy = ex(sy_);
  m.sz = ex(sz_);
  m.qyz = ex(qyz_);
  m.qxz = ex(qxz_);
  m.dq_yy = ex(dq_yy_);
  m.dq_xx = ex(dq_xx_);
  m.n_minus = ex(n_minus_);
  m.n_zero = ex(n_zero_);
  m.n_plus = ex(n_plus_);
  m.photons = ex(photons_);
  m.sx2 = ex2(sx_, sx_).real();
  m.qyz2 = ex2(qyz_, qyz_).real();
  m.sx_qyz = ex2(sx_, qyz_).real();  // Re<AB> = <{A,B}>/2 for hermitian A, B
  m.sy2 = ex2(sy_, sy_).real();
  m.qxz2 = ex2(qxz_, qxz_).real();
  m.sy_qxz = ex2(sy_, qxz_).real();
  m.splus_sminus = ex2(sminus_.adjoint(), sminus_).real();
  return m;
}

std::vector<std::string> MomentEvaluator::names() const {
  const auto& n = Moments::names();
  return {n.begin(), n.end()};
}

void MomentEvaluator::evaluate(const CVector& psi, std::span<const Eigen::Index> support, std::span<double> out) {
  const auto v = evaluate(psi, support).pack();
  std::copy(v.begin(), v.end(), out.begin());
}

std::unique_ptr<ObservableEvaluator> MomentEvaluator::clone() const {
  return std::make_unique<MomentEvaluator>(*this);
}

Moments moments(const SymmetricBasis& basis, const StateVector& psi) {
  MomentEvaluator ev(basis);
  return ev.evaluate(psi);
}

Moments moments(const SymmetricBasis& basis, const DensityMatrix& rho) {
  const MomentEvaluator ev(basis);
  return ev.evaluate(rho);
}

QuadratureStats quadrature_stats(const Moments& m, Subspace subspace) {
  QuadratureStats q;
  if (subspace == Subspace::sx_qyz) {
    q.var_a = m.sx2 - m.sx * m.sx;
    q.var_b = m.qyz2 - m.qyz * m.qyz;
    q.cov = m.sx_qyz - m.sx * m.qyz;
    q.denominator = m.dq_yy;
  } else {
    q.var_a = m.sy2 - m.sy * m.sy;
    q.var_b = m.qxz2 - m.qxz * m.qxz;
    q.cov = m.sy_qxz - m.sy * m.qxz;
    q.denominator = m.dq_xx;
  }
  return q;
}

double denominator_guard(int atom_count) { return 1e-6 * 2.0 * atom_count; }

namespace {

double xi2_from_stats(const QuadratureStats& q, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return 2.0 * (c * c * q.var_a + s * s * q.var_b + 2.0 * s * c * q.cov) / std::abs(q.denominator);
}

double wrap_pi(double theta) {
  double t = std::fmod(theta, std::numbers::pi);
  if (t < 0) t += std::numbers::pi;
  if (t >= std::numbers::pi) t -= std::numbers::pi;
  return t;
}

}  // namespace

double xi2(const Moments& m, double theta, Subspace subspace) {
  const QuadratureStats q = quadrature_stats(m, subspace);
  if (std::abs(q.denominator) <= denominator_guard(m.atom_count)) return std::numeric_limits<double>::quiet_NaN();
  return xi2_from_stats(q, theta);
}

double to_db(double linear) { return 10.0 * std::log10(linear); }

ThetaMinimum minimize_periodic(const std::function<double(double)>& f, const ThetaOptions& opt) {
  if (opt.grid_size < 3) throw InvalidArgument("theta grid needs at least 3 points");
  if (!(opt.refine_tol > 0.0)) throw InvalidArgument("refine_tol must be positive");
  const double step = std::numbers::pi / static_cast<double>(opt.grid_size);
  // Differences at rounding level are ties; ties keep the smaller angle.
  auto margin = [](double v) { return 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(v)); };
  std::size_t best = 0;
  double best_val = f(0.0);
  for (std::size_t k = 1; k < opt.grid_size; ++k) {
    const double v = f(step * static_cast<double>(k));
    if (v < best_val - margin(best_val)) {
      best_val = v;
      best = k;
    }
  }

  // Golden-section search on the bracket around the best grid point.
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = step * (static_cast<double>(best) - 1.0), b = step * (static_cast<double>(best) + 1.0);
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > opt.refine_tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  const double t = 0.5 * (a + b);
  const double ft = f(t);
  ThetaMinimum r{step * static_cast<double>(best), best_val};
  if (ft < best_val - margin(best_val)) r = {wrap_pi(t), ft};
  return r;
}

ThetaMinimum closed_form_minimum(const QuadratureStats& q) {
  const double scale = 2.0 / std::abs(q.denominator);
  Eigen::Matrix2d m;
  m << q.var_a, q.cov, q.cov, q.var_b;
  m *= scale;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
  const Eigen::Vector2d v = es.eigenvectors().col(0);
  return {wrap_pi(std::atan2(v[1], v[0])), es.eigenvalues()[0]};
}

SqueezingResult optimize_theta(const Moments& m, Subspace subspace, const ThetaOptions& opt) {
  SqueezingResult r;
  const QuadratureStats q = quadrature_stats(m, subspace);
  if (std::abs(q.denominator) <= denominator_guard(m.atom_count)) return r;
  r.defined = true;
  const auto lo = minimize_periodic([&](double t) { return xi2_from_stats(q, t); }, opt);
  const auto hi = minimize_periodic([&](double t) { return -xi2_from_stats(q, t); }, opt);
  r.xi2_min = lo.value;
  r.theta_min = lo.theta;
  r.xi2_max = -hi.value;
  r.theta_max = hi.theta;
  const auto cf = closed_form_minimum(q);
  r.closed_form_xi2 = cf.value;
  r.closed_form_theta = cf.theta;
  return r;
}

SqueezingRecord squeezing_record(double time, const Moments& m, const ThetaOptions& opt, bool keep_curve,
                                 Subspace subspace) {
  SqueezingRecord rec;
  rec.time = time;
  rec.n_minus = m.n_minus;
  rec.n_zero = m.n_zero;
  rec.n_plus = m.n_plus;
  rec.stats = quadrature_stats(m, subspace);
  rec.mean_qzz_minus_qyy = m.dq_yy;
  const auto r = optimize_theta(m, subspace, opt);
  rec.defined = r.defined;
  if (r.defined) {
    rec.xi2_min = r.xi2_min;
    rec.theta_opt_deg = r.theta_min * 180.0 / std::numbers::pi;
  } else {
    rec.xi2_min = std::numeric_limits<double>::quiet_NaN();
  }
  if (keep_curve) {
    rec.xi2_of_theta.resize(opt.grid_size);
    const double step = std::numbers::pi / static_cast<double>(opt.grid_size);
    for (std::size_t k = 0; k < opt.grid_size; ++k) rec.xi2_of_theta[k] = xi2(m, step * static_cast<double>(k), subspace);
  }
  return rec;
}

ScalingFit scaling_fit(std::span<const std::pair<int, double>> data, double confidence) {
  std::vector<int> ns;
  for (const auto& [n, v] : data) {
    if (n <= 0) throw InvalidArgument("atom numbers must be positive");
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("peak squeezing values must be positive and finite");
    ns.push_back(n);
  }
  std::sort(ns.begin(), ns.end());
  if (std::unique(ns.begin(), ns.end()) - ns.begin() < 4) throw InvalidArgument("scaling fit needs at least 4 distinct N");
  if (!(confidence > 0.0 && confidence < 1.0)) throw InvalidArgument("confidence must lie in (0, 1)");

  const auto n = static_cast<double>(data.size());
  double mx = 0, my = 0;
  for (const auto& [an, v] : data) {
    mx += std::log(static_cast<double>(an));
    my += std::log(v);
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [an, v] : data) {
    const double dx = std::log(static_cast<double>(an)) - mx, dy = std::log(v) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  ScalingFit fit;
  fit.points = data.size();
  fit.confidence = confidence;
  fit.exponent = sxy / sxx;
  fit.prefactor = std::exp(my - fit.exponent * mx);
  const double sse = std::max(0.0, syy - fit.exponent * sxy);
  fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  const double dof = n - 2.0;
  fit.exponent_se = std::sqrt(sse / dof / sxx);
  const boost::math::students_t dist(dof);
  const double tq = boost::math::quantile(dist, 0.5 + confidence / 2.0);
  fit.ci_low = fit.exponent - tq * fit.exponent_se;
  fit.ci_high = fit.exponent + tq * fit.exponent_se;
  return fit;
}

}  // namespace spinor
