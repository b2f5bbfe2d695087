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

#include "spinor/qfunction.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/legendre.hpp>

#include "spinor/error.hpp"

namespace spinor {

CVector LadderBasis::dense(int m) const { return CVector(kets.at(static_cast<std::size_t>(m))); }

double ladder_step_norm(int n_atoms, int m) {
  return 2.0 * std::sqrt(static_cast<double>(n_atoms - m) * static_cast<double>(m + 1));
}

LadderBasis build_ladder(const SymmetricBasis& basis) {
  const int n = basis.atom_count();
  if (n < 1) throw InvalidArgument("ladder needs at least one atom");
  const SparseOperator raise = ladder_operators(basis).plus;
  LadderBasis lb;
  lb.atom_count = n;
  lb.dim = static_cast<Eigen::Index>(basis.dimension());
  CVector v = CVector::Zero(lb.dim);
  v[static_cast<Eigen::Index>(basis.pole_index())] = 1.0;
  auto store = [&](const CVector& x) {
    Eigen::SparseVector<cplx> s(lb.dim);
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (x[i] != cplx(0.0)) s.insert(i) = x[i];
    lb.kets.push_back(std::move(s));
  };
  store(v);
  lb.norms.push_back(1.0);
  for (int m = 1; m <= n; ++m) {
    CVector w = raise.apply(v);
    const double nw = w.norm();
    lb.norms.push_back(nw);
    v = w / nw;
    store(v);
  }
  return lb;
}

CVector coherent_coefficients(int n_atoms, double theta_s, double phi) {
  if (n_atoms < 1) throw InvalidArgument("coherent state needs at least one atom");
  if (!(theta_s >= 0.0 && theta_s <= std::numbers::pi)) throw InvalidArgument("theta_s must lie in [0, pi]");
  const double lc = std::log(std::abs(std::cos(0.5 * theta_s)));
  const double ls = std::log(std::abs(std::sin(0.5 * theta_s)));
  const double lgn = std::lgamma(n_atoms + 1.0);
  std::vector<double> logs(static_cast<std::size_t>(n_atoms) + 1);
  double top = -std::numeric_limits<double>::infinity();
  for (int m = 0; m <= n_atoms; ++m) {
    double l = 0.5 * (lgn - std::lgamma(m + 1.0) - std::lgamma(n_atoms - m + 1.0));
    if (n_atoms - m > 0) l += (n_atoms - m) * lc;
    if (m > 0) l += m * ls;
    logs[static_cast<std::size_t>(m)] = l;
    top = std::max(top, l);
  }
  CVector c(n_atoms + 1);
  for (int m = 0; m <= n_atoms; ++m)
    c[m] = std::exp(logs[static_cast<std::size_t>(m)] - top) * std::polar(1.0, m * phi);
  c /= c.norm();
  return c;
}

StateVector coherent_state(const LadderBasis& ladder, double theta_s, double phi) {
  const CVector c = coherent_coefficients(ladder.atom_count, theta_s, phi);
  CVector psi = CVector::Zero(ladder.dim);
  for (int m = 0; m <= ladder.atom_count; ++m)
    for (Eigen::SparseVector<cplx>::InnerIterator it(ladder.kets[static_cast<std::size_t>(m)]); it; ++it)
      psi[it.index()] += c[m] * it.value();
  return StateVector(std::move(psi));
}

double LadderProjection::q(double theta_s, double phi) const {
  const CVector c = coherent_coefficients(atom_count, theta_s, phi);
  return (c.adjoint() * rho * c)(0, 0).real();
}

LadderProjection project(const LadderBasis& ladder, const StateVector& psi) {
  if (psi.dim() != ladder.dim) throw InvalidArgument("state dimension does not match the ladder basis");
  const auto n = static_cast<Eigen::Index>(ladder.kets.size());
  CVector p(n);
  for (Eigen::Index m = 0; m < n; ++m) {
    cplx acc = 0.0;
    for (Eigen::SparseVector<cplx>::InnerIterator it(ladder.kets[static_cast<std::size_t>(m)]); it; ++it)
      acc += std::conj(it.value()) * psi.amplitudes()[it.index()];
    p[m] = acc;
  }
  return {ladder.atom_count, p * p.adjoint()};
}

LadderProjection project(const LadderBasis& ladder, const DensityMatrix& rho) {
  if (rho.dim() != ladder.dim) throw InvalidArgument("density matrix dimension does not match the ladder basis");
  const auto n = static_cast<Eigen::Index>(ladder.kets.size());
  LadderProjection lp{ladder.atom_count, CMatrix(n, n)};
  CVector u(ladder.dim);
  for (Eigen::Index b = 0; b < n; ++b) {
    u.setZero();
    for (Eigen::SparseVector<cplx>::InnerIterator it(ladder.kets[static_cast<std::size_t>(b)]); it; ++it)
      u += rho.elements().col(it.index()) * it.value();
    for (Eigen::Index a = 0; a < n; ++a) {
      cplx acc = 0.0;
      for (Eigen::SparseVector<cplx>::InnerIterator it(ladder.kets[static_cast<std::size_t>(a)]); it; ++it)
        acc += std::conj(it.value()) * u[it.index()];
      lp.rho(a, b) = acc;
    }
  }
  return lp;
}

SphereGrid qfunction(const LadderProjection& proj, std::size_t n_theta, std::size_t n_phi) {
  if (n_theta < 2 || n_phi < 1) throw InvalidArgument("Q-function grid needs n_theta >= 2 and n_phi >= 1");
  SphereGrid g;
  g.atom_count = proj.atom_count;
  g.projected_weight = proj.weight();
  for (std::size_t i = 0; i < n_theta; ++i)
    g.theta.push_back(std::numbers::pi * static_cast<double>(i) / static_cast<double>(n_theta - 1));
  for (std::size_t j = 0; j < n_phi; ++j)
    g.phi.push_back(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n_phi));
  g.values.reserve(n_theta * n_phi);
  for (double th : g.theta)
    for (double ph : g.phi) g.values.push_back(proj.q(th, ph));
  return g;
}

SphereGrid qfunction(const LadderBasis& ladder, const StateVector& psi, std::size_t n_theta, std::size_t n_phi) {
  return qfunction(project(ladder, psi), n_theta, n_phi);
}

SphereGrid qfunction(const LadderBasis& ladder, const DensityMatrix& rho, std::size_t n_theta, std::size_t n_phi) {
  return qfunction(project(ladder, rho), n_theta, n_phi);
}

double normalized_sphere_integral(const LadderProjection& proj) {
  // Q is a polynomial of degree N in cos(theta_s) after the phi integral,
  // and a trigonometric polynomial of degree N in phi.
  const int n = proj.atom_count;
  const int order = n / 2 + 2;
  std::vector<double> nodes;
  for (double z : boost::math::legendre_p_zeros<double>(order)) {
    nodes.push_back(z);
    if (z != 0.0) nodes.push_back(-z);
  }
  const int n_phi = 2 * n + 2;
  double acc = 0.0;
  for (double x : nodes) {
    const double dp = boost::math::legendre_p_prime(order, x);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    double ring = 0.0;
    for (int j = 0; j < n_phi; ++j) ring += proj.q(std::acos(x), 2.0 * std::numbers::pi * j / n_phi);
    acc += w * ring * 2.0 * std::numbers::pi / n_phi;
  }
  return acc * (n + 1) / (4.0 * std::numbers::pi);
}

PlanePoint pole_view(double theta_s, double phi) {
  const double r = 2.0 * std::sin(0.5 * theta_s);
  return {r * std::cos(phi), r * std::sin(phi)};
}

PlanePoint mollweide(double theta_s, double phi) {
  const double lat = theta_s - 0.5 * std::numbers::pi;
  const double lon = phi - std::numbers::pi;
  double psi = lat;
  if (std::abs(std::abs(lat) - 0.5 * std::numbers::pi) > 1e-12) {
    const double target = std::numbers::pi * std::sin(lat);
    for (int it = 0; it < 50; ++it) {
      const double f = 2.0 * psi + std::sin(2.0 * psi) - target;
      const double step = f / (2.0 + 2.0 * std::cos(2.0 * psi));
      psi -= step;
      if (std::abs(step) < 1e-14) break;
    }
  }
  return {2.0 * std::numbers::sqrt2 / std::numbers::pi * lon * std::cos(psi), std::numbers::sqrt2 * std::sin(psi)};
}

// Coarse viridis-like ramp.
std::string colour_ramp(double v) {
  static constexpr std::array<std::array<double, 3>, 5> ramp = {{
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  v = std::clamp(v, 0.0, 1.0) * (ramp.size() - 1);
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(v), ramp.size() - 2);
  const double f = v - static_cast<double>(k);
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(ramp[k][0] + f * (ramp[k + 1][0] - ramp[k][0])),
                static_cast<int>(ramp[k][1] + f * (ramp[k + 1][1] - ramp[k][1])),
                static_cast<int>(ramp[k][2] + f * (ramp[k + 1][2] - ramp[k][2])));
  return buf;
}


std::string render_svg(const SphereGrid& grid, Projection projection, const std::string& title) {
  const double vmax = grid.values.empty() ? 1.0 : *std::max_element(grid.values.begin(), grid.values.end());
  const double norm = vmax > 0.0 ? 1.0 / vmax : 1.0;
  const double scale = 100.0;
  const double half_w = projection == Projection::pole_view ? 2.0 : 2.0 * std::numbers::sqrt2;
  const double half_h = projection == Projection::pole_view ? 2.0 : std::numbers::sqrt2;
  const double w = 2.0 * half_w * scale + 20.0, h = 2.0 * half_h * scale + 50.0;
  auto map = [&](double th, double ph) {
    const PlanePoint p = projection == Projection::pole_view ? pole_view(th, ph) : mollweide(th, ph);
    return PlanePoint{10.0 + (p.x + half_w) * scale, 40.0 + (half_h - p.y) * scale};
  };

  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
     << ' ' << h << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) os << "<text x=\"10\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
  const std::size_t nt = grid.n_theta(), np = grid.n_phi();
  for (std::size_t i = 0; i + 1 < nt; ++i)
    for (std::size_t j = 0; j < np; ++j) {
      const std::size_t j1 = (j + 1) % np;
      const double ph0 = grid.phi[j];
      const double ph1 = j1 == 0 ? 2.0 * std::numbers::pi : grid.phi[j1];
      const double v = 0.25 * (grid.at(i, j) + grid.at(i + 1, j) + grid.at(i, j1) + grid.at(i + 1, j1)) * norm;
      const std::array<PlanePoint, 4> c = {map(grid.theta[i], ph0), map(grid.theta[i + 1], ph0),
                                           map(grid.theta[i + 1], ph1), map(grid.theta[i], ph1)};
      const std::string col = colour_ramp(v);
      os << "<polygon points=\"";
      for (const auto& p : c) os << p.x << ',' << p.y << ' ';
      os << "\" fill=\"" << col << "\" stroke=\"" << col << "\" stroke-width=\"0.8\" stroke-linejoin=\"round\"/>\n";
    }
  os << "</svg>\n";
  return os.str();
}

}  // namespace spinor
