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

#include "bdris/fisher.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "bdris/errors.hpp"
#include "bdris/scene.hpp"

namespace bdris {

namespace {

void require_finite(const ComplexVector& v, const char* what) {
  if (!v.real().allFinite() || !v.imag().allFinite()) {
    throw InvalidArgument(std::string(what) + " has non-finite entries");
  }
}

}  // namespace

double fisher_prefactor(const Scenario& scene) {
  return 2.0 * static_cast<double>(scene.slots) * scene.power / scene.noise_power;
}

double objective_from_channel(const ComplexVector& h, const ComplexVector& h_dot) {
  const double energy = h.squaredNorm();
  if (!(energy > kEpsChannel)) {
    throw DegenerateScene("cascaded channel energy " + std::to_string(energy) +
                          " is at or below the degeneracy threshold");
  }
  const Complex coefficient = h.dot(h_dot) / energy;  // h^H h_dot / ||h||^2
  const double g = (h_dot - coefficient * h).squaredNorm();
  return g <= kParallelTolerance * h_dot.squaredNorm() ? 0.0 : g;
}

double objective_g(const ChannelBundle& bundle) {
  require_finite(bundle.h, "h");
  require_finite(bundle.h_dot, "h_dot");
  return objective_from_channel(bundle.h, bundle.h_dot);
}

double crb_from_objective(double g, const Scenario& scene) {
  if (g <= 0.0) return std::numeric_limits<double>::infinity();
  return scene.noise_power / (2.0 * static_cast<double>(scene.slots) * scene.power * g);
}

double crb_theta(const ChannelBundle& bundle, const Scenario& scene) {
  return crb_from_objective(objective_g(bundle), scene);
}

FisherBlocks fim_blocks(const ChannelBundle& bundle, const Scenario& scene) {
  FisherBlocks blocks;
  blocks.g_value = objective_g(bundle);
  blocks.crb_theta = crb_from_objective(blocks.g_value, scene);

  const double k = fisher_prefactor(scene);
  const Complex c = bundle.h_dot.dot(bundle.h);  // h_dot^H h = tr(h h_dot^H)
  blocks.f_theta_theta = k * bundle.h_dot.squaredNorm();
  // Re{c [1, j]}
  blocks.f_theta_alpha << k * c.real(), -k * c.imag();
  blocks.f_alpha_alpha = k * bundle.h.squaredNorm() * Eigen::Matrix2d::Identity();
  return blocks;
}

Eigen::Matrix3d assemble_fim(const FisherBlocks& blocks) {
  Eigen::Matrix3d f;
  f(0, 0) = blocks.f_theta_theta;
  f.block<1, 2>(0, 1) = blocks.f_theta_alpha;
  f.block<2, 1>(1, 0) = blocks.f_theta_alpha.transpose();
  f.block<2, 2>(1, 1) = blocks.f_alpha_alpha;
  return f;
}

double crb_by_inversion(const FisherBlocks& blocks) {
  const Eigen::Matrix3d f = assemble_fim(blocks);
  Eigen::FullPivLU<Eigen::Matrix3d> lu(f);
  if (!lu.isInvertible()) return std::numeric_limits<double>::infinity();
  return lu.inverse()(0, 0);
}

}  // namespace bdris
