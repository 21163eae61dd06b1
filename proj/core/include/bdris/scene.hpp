// Copyright 2026 The bdris Authors
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

// Physical scene: a single-antenna target, a linear reflecting surface with
// N_R elements and a linear N_BS-antenna base station. The only propagation
// route is target -> surface -> base station.
//
// Angle conventions (all angles measured from the array broadside):
//   surface: normal is -y, positive angles toward +x;
//   base station: normal is +x, positive angles toward +y.

#include <cstdint>
#include <limits>
#include <optional>

#include "bdris/matrix_kernels.hpp"
#include "bdris/scattering.hpp"

namespace bdris {

struct Position2 {
  double x = 0.0;
  double y = 0.0;
};

struct ScenePositions {
  Position2 target{5.0, 0.0};
  Position2 ris{0.0, 20.0};
  Position2 bs{-10.0, 0.0};
};

struct Scenario {
  Eigen::Index n_bs = 8;
  Eigen::Index n_r = 8;
  double d_bs = 0.5;        // wavelengths
  double d_ris = 0.5;       // wavelengths
  double wavelength = 0.1;  // m
  double theta = 0.0;       // target -> surface AOA
  double phi_r = 0.0;       // surface -> BS AOD at the surface
  double phi_bs = 0.0;      // surface -> BS AOA at the BS
  Complex alpha{1.0, 0.0};
  double power = 0.1;         // W
  double noise_power = 1e-15; // W
  Eigen::Index slots = 256;
  double pathloss_exponent = 2.0;
  /// Rician K-factor (linear) of the surface -> BS link. Infinity gives the
  /// pure line-of-sight, rank-one link.
  double rician_k = 10.0;
  std::uint64_t channel_seed = 1;
  std::optional<ScenePositions> positions;

  /// Throws InvalidArgument on a violated invariant.
  void validate() const;
};

inline constexpr double kLineOfSightOnly = std::numeric_limits<double>::infinity();

/// Entry k is exp(-j 2 pi spacing k sin(beta)).
ComplexVector steering_vector(double beta, Eigen::Index n, double spacing);

/// d/d(theta) of steering_vector(theta, n, spacing). cos(theta) is taken as
/// exactly zero at theta = +-pi/2.
ComplexVector steering_derivative(double theta, Eigen::Index n, double spacing);

struct GeometryOptions {
  /// Amplitude gain of the two hops at 1 m each; defaults to (lambda / 4 pi)^2.
  std::optional<double> reference_gain;
  /// Seed for a uniform phase of alpha; phase 0 when absent.
  std::optional<std::uint64_t> alpha_phase_seed;
};

/// Angle of `point` seen from the surface / BS, measured from broadside.
/// Throws InvalidArgument when the point is not strictly in front of the array.
double ris_angle_to(const Position2& ris, const Position2& point);
double bs_angle_to(const Position2& bs, const Position2& point);

/// Fills theta, phi_r, phi_bs and alpha from positions, using the product
/// of hop path losses |alpha| = g0 / (d1^(eps/2) d2^(eps/2)).
Scenario geometry_to_scene(const Position2& target, const Position2& ris, const Position2& bs,
                           const Scenario& base, const GeometryOptions& options = {});

/// Scenario built from the default positions (target [5,0], surface [0,20],
/// BS [-10,0]) with the given array sizes.
Scenario default_scenario(Eigen::Index n_bs = 8, Eigen::Index n_r = 8);

/// Surface -> BS channel G (N_BS x N_R): LoS part a_BS(phi_bs) a_RIS(phi_r)^H
/// mixed with a seeded i.i.d. CN(0,1) scattered part according to rician_k.
ComplexMatrix ris_bs_channel(const Scenario& scene);

struct ChannelBundle {
  ComplexVector a_bs;
  ComplexVector a_ris_theta;
  ComplexVector a_ris_phi;
  ComplexVector a_ris_dot;
  ComplexMatrix g_mat;
  ComplexVector h;      // alpha G Phi a_RIS(theta)
  ComplexVector h_dot;  // alpha G Phi a_RIS'(theta)
};

/// Scene quantities that do not depend on Phi, cached once. Evaluating the
/// channel for a new Phi is then two mat-vec products.
class ChannelModel {
 public:
  explicit ChannelModel(const Scenario& scene);

  const Scenario& scene() const { return scene_; }
  Eigen::Index n_r() const { return scene_.n_r; }
  const ComplexMatrix& g_mat() const { return g_mat_; }
  const ComplexVector& a_ris_theta() const { return a_theta_; }
  const ComplexVector& a_ris_dot() const { return a_dot_; }

  /// Full bundle for an arbitrary N_R x N_R matrix (not required unitary).
  ChannelBundle bundle(const ComplexMatrix& phi) const;

  /// h and h_dot from p = Phi a_RIS(theta) and q = Phi a_RIS'(theta).
  ComplexVector h_from(const ComplexVector& p) const { return scene_.alpha * (g_mat_ * p); }

  /// Objective g for an arbitrary N_R x N_R matrix; throws DegenerateScene.
  double objective(const ComplexMatrix& phi) const;
  /// Objective from p = Phi a and q = Phi a'.
  double objective_from(const ComplexVector& p, const ComplexVector& q) const;

 private:
  Scenario scene_;
  ComplexVector a_bs_;
  ComplexVector a_theta_;
  ComplexVector a_phi_;
  ComplexVector a_dot_;
  ComplexMatrix g_mat_;
};

/// Validates `phi` against `scene` and returns the cached channel quantities.
ChannelBundle build_channel(const Scenario& scene, const ScatteringMatrix& phi);

}  // namespace bdris
