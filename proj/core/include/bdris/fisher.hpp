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

#include <Eigen/Dense>

#include "bdris/matrix_kernels.hpp"

namespace bdris {

struct Scenario;
struct ChannelBundle;

/// ||h||^2 at or below this is a degenerate scene.
inline constexpr double kEpsChannel = 1e-30;

/// g values at or below kParallelTolerance * ||h_dot||^2 are rounding noise
/// from h_dot being parallel to h, and are reported as exactly zero.
inline constexpr double kParallelTolerance = 1e-24;

/// Fisher information for xi = [theta, nuisance(alpha)] in block form.
///
/// The alpha blocks use the amplitude/phase nuisance coordinates
/// (ln|alpha|, arg alpha), in which they take the compact form
///   F_ta = k [Re c, -Im c],  F_aa = k ||h||^2 I,  c = h_dot^H h,
/// with k = 2 L P / sigma^2. The CRB on theta does not depend on how the
/// nuisance is parameterized.
struct FisherBlocks {
  double f_theta_theta = 0.0;
  Eigen::RowVector2d f_theta_alpha = Eigen::RowVector2d::Zero();
  Eigen::Matrix2d f_alpha_alpha = Eigen::Matrix2d::Zero();
  double crb_theta = 0.0;  ///< +inf when g_value == 0
  double g_value = 0.0;
};

/// 2 L P / sigma^2.
double fisher_prefactor(const Scenario& scene);

/// ||h_dot||^2 - |h_dot^H h|^2 / ||h||^2, evaluated as the squared norm of
/// the component of h_dot orthogonal to h. Throws DegenerateScene when
/// ||h||^2 <= kEpsChannel.
double objective_from_channel(const ComplexVector& h, const ComplexVector& h_dot);

double objective_g(const ChannelBundle& bundle);

/// sigma^2 / (2 L P g); +infinity for g == 0.
double crb_from_objective(double g, const Scenario& scene);

double crb_theta(const ChannelBundle& bundle, const Scenario& scene);

FisherBlocks fim_blocks(const ChannelBundle& bundle, const Scenario& scene);

/// Full 3x3 FIM [[F_tt, F_ta], [F_ta^T, F_aa]].
Eigen::Matrix3d assemble_fim(const FisherBlocks& blocks);

/// [F^-1]_(1,1) from an explicit inverse of the assembled FIM. Kept as an
/// independent cross-check of the closed-form Schur complement.
double crb_by_inversion(const FisherBlocks& blocks);

}  // namespace bdris
