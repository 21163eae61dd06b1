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

#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

#include "bdris/matrix_kernels.hpp"
#include "bdris/scattering.hpp"
#include "bdris/scene.hpp"

namespace bdris {

/// Received block Y = sqrt(P) h s^T + N over L slots, where s holds the
/// unit-modulus symbols sent in each slot.
struct ObservationBlock {
  ComplexMatrix y;        // N_BS x L
  ComplexVector pilots;   // s, length L
  std::uint64_t seed = 0;
};

enum class PilotKind { all_ones, qpsk };

struct SynthesisOptions {
  bool noiseless = false;
  PilotKind pilots = PilotKind::all_ones;
};

ObservationBlock synthesize(const Scenario& scene, const ScatteringMatrix& phi,
                            std::uint64_t seed, const SynthesisOptions& options = {});

/// ln f(Y | theta, alpha), including the -N_BS L ln(pi sigma^2) constant.
/// Evaluated in expanded form ||Y||^2 - 2 sqrt(P) Re tr(Y^H h s^T) + P L ||h||^2.
double log_likelihood(const ObservationBlock& obs, double theta, Complex alpha,
                      const ScatteringMatrix& phi, const Scenario& scene);

struct ThetaGrid {
  double lo = -std::numbers::pi / 2.0 + 0.01;
  double hi = std::numbers::pi / 2.0 - 0.01;
  int points = 2001;

  double at(int k) const { return points == 1 ? lo : lo + (hi - lo) * k / (points - 1); }
};

struct EstimateResult {
  double theta_hat = 0.0;
  Complex alpha_hat;
  double concentrated_loglik = 0.0;
};

/// Concentrated maximum-likelihood estimator of theta with alpha profiled out.
///
/// For u(theta) = G Phi a_RIS(theta) and z = Y conj(s), the profile is
/// |u^H z|^2 / ||u||^2; it is scanned on the grid, refined once by a parabola
/// through the best point and its neighbours (kept only if it scores higher),
/// and alpha_hat = u^H z / (sqrt(P) L ||u||^2). The steering responses on the
/// grid do not depend on the data and are computed once per estimator.
class MlEstimator {
 public:
  /// `scene` supplies everything except theta and alpha.
  MlEstimator(const Scenario& scene, const ScatteringMatrix& phi, ThetaGrid grid = {});

  EstimateResult estimate(const ObservationBlock& obs) const;

  const ThetaGrid& grid() const { return grid_; }

 private:
  double profile(const ComplexVector& u, double u_norm2, const ComplexVector& z) const;
  ComplexVector response(double theta) const;

  Scenario scene_;
  ThetaGrid grid_;
  ComplexMatrix g_phi_;                 // G Phi
  std::vector<ComplexVector> responses_;
  std::vector<double> norms2_;
};

EstimateResult ml_estimate(const ObservationBlock& obs, const ScatteringMatrix& phi,
                           const Scenario& scene_known, const ThetaGrid& grid = {});

struct MonteCarloResult {
  int trials = 0;
  double mse = 0.0;
  double mean_error = 0.0;
  double crb = 0.0;
  double ratio = 0.0;  ///< mse / crb
};

/// Sample MSE of theta_hat over independent noise draws, trial t seeded with
/// derive_seed(seed, t).
MonteCarloResult monte_carlo_mse(const Scenario& scene, const ScatteringMatrix& phi, int trials,
                                 std::uint64_t seed, const ThetaGrid& grid = {});

using MatrixFunctional = std::function<double(const ComplexMatrix&)>;

/// Central-difference Wirtinger gradient of a real functional:
///   D_mn = 1/2 (df/dRe Phi_mn + j df/dIm Phi_mn).
/// Perturbations stay off the manifold. `step` must lie in [1e-8, 1e-4].
ComplexMatrix fd_wirtinger_gradient(const MatrixFunctional& f, const ComplexMatrix& phi,
                                    double step);

/// fd_wirtinger_gradient applied to g(Phi) of `scene`.
ComplexMatrix fd_gradient_oracle(const ComplexMatrix& phi, const Scenario& scene, double step);

}  // namespace bdris
