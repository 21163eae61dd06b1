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

#include "bdris/scene.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bdris/errors.hpp"
#include "bdris/fisher.hpp"
#include "bdris/random.hpp"

namespace bdris {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;

void require_count(Eigen::Index n, const char* what) {
  if (n < 1) throw InvalidArgument(std::string(what) + " must be >= 1");
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidArgument(std::string(what) + " must be finite and > 0");
  }
}

void require_angle(double v, const char* what) {
  if (!std::isfinite(v) || std::abs(v) > kHalfPi) {
    throw InvalidArgument(std::string(what) + " must lie in [-pi/2, pi/2]");
  }
}

// cos() at the double nearest pi/2 is 6e-17, not 0; the endpoint is where
// theta stops being identifiable, so make it exact.
double broadside_cos(double theta) {
  return std::abs(theta) == kHalfPi ? 0.0 : std::cos(theta);
}

double distance(const Position2& a, const Position2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

// Angle from broadside given the direction's components along the array
// normal and along the array axis.
double broadside_angle(double along_normal, double along_axis, const char* what) {
  if (!(along_normal > 0.0)) {
    throw InvalidArgument(std::string(what) + ": point is not in front of the array");
  }
  const double angle = std::atan2(along_axis, along_normal);
  if (!(std::abs(angle) < kHalfPi)) {
    throw InvalidArgument(std::string(what) + ": angle outside (-pi/2, pi/2)");
  }
  return angle;
}

}  // namespace

void Scenario::validate() const {
  require_count(n_bs, "n_bs");
  require_count(n_r, "n_r");
  require_count(slots, "slots");
  require_positive(d_bs, "d_bs");
  require_positive(d_ris, "d_ris");
  require_positive(wavelength, "wavelength");
  require_positive(power, "power");
  require_positive(noise_power, "noise_power");
  require_angle(theta, "theta");
  require_angle(phi_r, "phi_r");
  require_angle(phi_bs, "phi_bs");
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
    throw InvalidArgument("alpha must be finite");
  }
  if (!std::isfinite(pathloss_exponent) || pathloss_exponent < 0.0) {
    throw InvalidArgument("pathloss_exponent must be finite and >= 0");
  }
  if (std::isnan(rician_k) || rician_k < 0.0) {
    throw InvalidArgument("rician_k must be >= 0 (infinity for line of sight only)");
  }
}

ComplexVector steering_vector(double beta, Eigen::Index n, double spacing) {
  require_count(n, "steering_vector: n");
  const double step = -2.0 * kPi * spacing * std::sin(beta);
  ComplexVector a(n);
  for (Eigen::Index k = 0; k < n; ++k) a[k] = std::polar(1.0, step * static_cast<double>(k));
  return a;
}

ComplexVector steering_derivative(double theta, Eigen::Index n, double spacing) {
  ComplexVector a = steering_vector(theta, n, spacing);
  const Complex factor{0.0, -2.0 * kPi * spacing * broadside_cos(theta)};
  for (Eigen::Index k = 0; k < n; ++k) a[k] *= factor * static_cast<double>(k);
  return a;
}

double ris_angle_to(const Position2& ris, const Position2& point) {
  const double dx = point.x - ris.x;
  const double dy = point.y - ris.y;
  return broadside_angle(-dy, dx, "surface angle");
}

double bs_angle_to(const Position2& bs, const Position2& point) {
  const double dx = point.x - bs.x;
  const double dy = point.y - bs.y;
  return broadside_angle(dx, dy, "base-station angle");
}

Scenario geometry_to_scene(const Position2& target, const Position2& ris, const Position2& bs,
                           const Scenario& base, const GeometryOptions& options) {
  const double d_target_ris = distance(target, ris);
  const double d_ris_bs = distance(ris, bs);
  if (!(d_target_ris > 0.0) || !(d_ris_bs > 0.0) || !(distance(target, bs) > 0.0)) {
    throw InvalidArgument("geometry_to_scene: positions must be pairwise distinct");
  }

  Scenario scene = base;
  scene.theta = ris_angle_to(ris, target);
  scene.phi_r = ris_angle_to(ris, bs);
  scene.phi_bs = bs_angle_to(bs, ris);

  const double g0 = options.reference_gain.value_or(
      std::pow(base.wavelength / (4.0 * kPi), 2.0));
  const double half_exponent = base.pathloss_exponent / 2.0;
  const double magnitude =
      g0 / (std::pow(d_target_ris, half_exponent) * std::pow(d_ris_bs, half_exponent));
  double phase = 0.0;
  if (options.alpha_phase_seed) {
    phase = 2.0 * kPi * uniform_at(*options.alpha_phase_seed, RandomStream::alpha_phase, 0);
  }
  scene.alpha = std::polar(magnitude, phase);
  scene.positions = ScenePositions{target, ris, bs};
  scene.validate();
  return scene;
}

Scenario default_scenario(Eigen::Index n_bs, Eigen::Index n_r) {
  Scenario base;
  base.n_bs = n_bs;
  base.n_r = n_r;
  const ScenePositions pos;
  return geometry_to_scene(pos.target, pos.ris, pos.bs, base);
}

ComplexMatrix ris_bs_channel(const Scenario& scene) {
  scene.validate();
  const ComplexVector a_bs = steering_vector(scene.phi_bs, scene.n_bs, scene.d_bs);
  const ComplexVector a_phi = steering_vector(scene.phi_r, scene.n_r, scene.d_ris);
  ComplexMatrix g = a_bs * a_phi.adjoint();
  if (std::isinf(scene.rician_k)) return g;

  const double los_weight = std::sqrt(scene.rician_k / (1.0 + scene.rician_k));
  const double nlos_weight = std::sqrt(1.0 / (1.0 + scene.rician_k));
  g *= los_weight;
  for (Eigen::Index i = 0; i < scene.n_bs; ++i) {
    for (Eigen::Index j = 0; j < scene.n_r; ++j) {
      g(i, j) += nlos_weight *
                 complex_gaussian_at(scene.channel_seed, RandomStream::nlos_channel,
                                     entry_index(static_cast<std::uint64_t>(i),
                                                 static_cast<std::uint64_t>(j)));
    }
  }
  return g;
}

ChannelModel::ChannelModel(const Scenario& scene)
    : scene_(scene),
      a_bs_(steering_vector(scene.phi_bs, scene.n_bs, scene.d_bs)),
      a_theta_(steering_vector(scene.theta, scene.n_r, scene.d_ris)),
      a_phi_(steering_vector(scene.phi_r, scene.n_r, scene.d_ris)),
      a_dot_(steering_derivative(scene.theta, scene.n_r, scene.d_ris)),
      g_mat_(ris_bs_channel(scene)) {}

ChannelBundle ChannelModel::bundle(const ComplexMatrix& phi) const {
  if (phi.rows() != scene_.n_r || phi.cols() != scene_.n_r) {
    throw InvalidArgument("scattering matrix is " + std::to_string(phi.rows()) + "x" +
                          std::to_string(phi.cols()) + ", scene has N_R = " +
                          std::to_string(scene_.n_r));
  }
  ChannelBundle b;
  b.a_bs = a_bs_;
  b.a_ris_theta = a_theta_;
  b.a_ris_phi = a_phi_;
  b.a_ris_dot = a_dot_;
  b.g_mat = g_mat_;
  b.h = h_from(phi * a_theta_);
  b.h_dot = h_from(phi * a_dot_);
  return b;
}

double ChannelModel::objective(const ComplexMatrix& phi) const {
  if (phi.rows() != scene_.n_r || phi.cols() != scene_.n_r) {
    throw InvalidArgument("objective: scattering matrix does not match N_R");
  }
  return objective_from(phi * a_theta_, phi * a_dot_);
}

double ChannelModel::objective_from(const ComplexVector& p, const ComplexVector& q) const {
  return objective_from_channel(h_from(p), h_from(q));
}

ChannelBundle build_channel(const Scenario& scene, const ScatteringMatrix& phi) {
  phi.validate();
  return ChannelModel(scene).bundle(phi.matrix());
}

}  // namespace bdris
