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

#include "bdris/matrix_kernels.hpp"
#include "bdris/scattering.hpp"
#include "bdris/scene.hpp"

namespace bdris {

/// Intermediate terms of the conjugate Wirtinger gradient of
///   g(Phi) = ||h_dot||^2 - |tr A|^2 / tr B,  A = h h_dot^H,  B = h h^H.
///
/// With K = |alpha|^2 G^H G, a = a_RIS(theta) and a' its theta-derivative:
///   lambda2   = K Phi a' a'^H                  d||h_dot||^2 / dPhi*
///   omega     = tr(A)* a a'^H + tr(A) a' a^H
///   c2        = K Phi omega                    d|tr A|^2 / dPhi*
///   d2        = K Phi a a^H                    d tr B / dPhi*
///   euclidean = lambda2 - c2 / tr B + |tr A|^2 d2 / (tr B)^2
/// All matrices are stored in dg/dPhi* orientation (no transposes).
struct GradientWorkspace {
  Complex a_mat;   ///< tr(A) = h_dot^H h
  double b_tr = 0; ///< tr(B) = ||h||^2
  ComplexMatrix omega;
  ComplexMatrix lambda2;
  ComplexMatrix c2;
  ComplexMatrix d2;
  ComplexMatrix euclidean;
};

/// Fills every workspace term for an arbitrary (not necessarily unitary)
/// Phi. Throws DegenerateScene when tr B <= kEpsChannel.
GradientWorkspace gradient_workspace(const ChannelModel& model, const ComplexMatrix& phi);

/// dg/dPhi*, the ascent direction in the ambient space. Costs
/// O(N_BS N_R + N_R^2): every term is an outer product.
ComplexMatrix euclidean_gradient(const ChannelModel& model, const ComplexMatrix& phi);
ComplexMatrix euclidean_gradient(const ScatteringMatrix& phi, const Scenario& scene);

/// Gamma - Phi Gamma^H Phi, tangent at Phi. Throws InvalidArgument unless Phi
/// is unitary to kUnitaryTolerance.
ComplexMatrix riemannian_gradient(const ComplexMatrix& phi, const ComplexMatrix& gamma_euc);

/// Gamma Phi^H - Phi Gamma^H (skew-Hermitian by construction). Same
/// precondition as riemannian_gradient.
ComplexMatrix geodesic_gradient(const ComplexMatrix& phi, const ComplexMatrix& gamma_euc);

/// 1/2 Re tr(X Y^H).
double riemannian_metric(const ComplexMatrix& x, const ComplexMatrix& y);

/// ||Phi^H Z + Z^H Phi||_F / (1 + ||Z||_F).
double tangent_residual(const ComplexMatrix& phi, const ComplexMatrix& z);

}  // namespace bdris
