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

// Ladder basis of the {S_x, Q_yz, Q_zz - Q_yy} SU(2) subalgebra, its
// coherent states, and the Husimi Q-function on the sphere.
//
// Sphere convention: |M=0> = |0,N,0> sits at theta_s = 0 (the "south pole"
// of the squeezing sphere), eta = exp(i phi) tan(theta_s / 2).

#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "spinor/evolution.hpp"
#include "spinor/hilbert.hpp"

namespace spinor {

struct LadderBasis {
  int atom_count = 0;
  Eigen::Index dim = 0;  // dimension of the full symmetric space
  /// |M>, M = 0..N, normalized.
  std::vector<Eigen::SparseVector<cplx>> kets;
  /// norms[M] = ||S+ |M-1>|| divided out when building |M>; norms[0] = 1.
  std::vector<double> norms;

  CVector dense(int m) const;
};

/// ||(S_x + i Q_yz)|M>|| for the normalized ladder state: 2 sqrt((N-M)(M+1)).
double ladder_step_norm(int n_atoms, int m);

LadderBasis build_ladder(const SymmetricBasis& basis);

/// Coefficients <M|eta> for M = 0..N, computed in log space.
CVector coherent_coefficients(int n_atoms, double theta_s, double phi);
StateVector coherent_state(const LadderBasis& ladder, double theta_s, double phi);

/// <M|psi> or <M|rho|M'> restricted to the ladder subspace.
struct LadderProjection {
  int atom_count = 0;
  CMatrix rho;  // (N+1) x (N+1)
  double weight() const { return rho.trace().real(); }
  double q(double theta_s, double phi) const;
};

LadderProjection project(const LadderBasis& ladder, const StateVector& psi);
LadderProjection project(const LadderBasis& ladder, const DensityMatrix& rho);

struct SphereGrid {
  int atom_count = 0;
  std::vector<double> theta;  // theta_i = i pi / (n_theta - 1)
  std::vector<double> phi;    // phi_j = 2 pi j / n_phi
  std::vector<double> values; // row-major [theta][phi]
  double projected_weight = 0.0;

  std::size_t n_theta() const { return theta.size(); }
  std::size_t n_phi() const { return phi.size(); }
  double at(std::size_t i, std::size_t j) const { return values[i * phi.size() + j]; }
};

SphereGrid qfunction(const LadderProjection& proj, std::size_t n_theta, std::size_t n_phi);
SphereGrid qfunction(const LadderBasis& ladder, const StateVector& psi, std::size_t n_theta, std::size_t n_phi);
SphereGrid qfunction(const LadderBasis& ladder, const DensityMatrix& rho, std::size_t n_theta, std::size_t n_phi);

/// ((N+1) / 4 pi) * integral of Q over the sphere, using Gauss-Legendre in
/// cos(theta_s) and a uniform rule in phi that are exact for this Q.
double normalized_sphere_integral(const LadderProjection& proj);

enum class Projection { pole_view, mollweide };

struct PlanePoint {
  double x = 0.0, y = 0.0;
};

/// Lambert azimuthal equal-area view centred on theta_s = 0 (radius <= 2).
PlanePoint pole_view(double theta_s, double phi);
/// Mollweide with latitude theta_s - pi/2 and longitude phi - pi.
PlanePoint mollweide(double theta_s, double phi);

/// Viridis-like colour for v in [0, 1] as "#rrggbb"; v is clamped.
std::string colour_ramp(double v);

/// Self-contained SVG heatmap, colour scale normalized to the grid maximum.
std::string render_svg(const SphereGrid& grid, Projection projection, const std::string& title = {});

}  // namespace spinor
