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

// Adaptive Riemannian steepest ascent of g(Phi) over (block-diagonal)
// unitary scattering matrices.
//
// Each iteration forms the geodesic direction S = Gamma Phi^H - Phi Gamma^H
// (per diagonal block), factors it once, then adapts the step mu:
//   halve  while g(exp(mu S) Phi) - g(Phi) <  mu/2 * eta
//   double while g(exp(2mu S) Phi) - g(Phi) >= mu * eta
// with eta = <S, S>, and moves Phi <- exp(mu S) Phi. The factorization
// makes each trial an O(N_R^2) operation, and mu carries over between
// iterations.

#include <cstdint>
#include <string_view>
#include <vector>

#include "bdris/scattering.hpp"
#include "bdris/scene.hpp"

namespace bdris {

struct OptimizerConfig {
  double mu_init = 1e-2;
  double epsilon = 1e-6;  ///< relative change in g that stops the ascent
  int max_iters = 2000;
  int max_halvings = 30;
  int max_doublings = 30;
  int restarts = 4;
  std::uint64_t seed = 1;

  void validate() const;
};

enum class AscentStatus { converged, max_iters, degenerate };

std::string_view to_string(AscentStatus status);

struct IterationRecord {
  double g_value = 0.0;
  double crb_theta = 0.0;
  double mu = 0.0;
  double eta = 0.0;
  double unitarity_drift = 0.0;  ///< max block drift after the update
  double skew_residual = 0.0;    ///< of the geodesic direction used
  int halvings = 0;
  int doublings = 0;
  bool reunitarized = false;
};

/// mu and eta refer to the normalized objective g / objective_scale, where
/// objective_scale = |alpha|^2 ||G||_F^2 ||a_RIS'||^2 is fixed per scene;
/// g_value and crb_theta are in physical units.
struct OptimizerTrace {
  double objective_scale = 1.0;
  double initial_g = 0.0;
  double initial_eta = 0.0;
  /// eta evaluated at the returned Phi.
  double final_eta = 0.0;
  std::vector<IterationRecord> records;
  AscentStatus status = AscentStatus::max_iters;
  /// Which start produced this trace: restart index, or restarts + k for
  /// the k-th warm start.
  int start_index = 0;

  double final_g() const { return records.empty() ? initial_g : records.back().g_value; }
};

struct AscentResult {
  ScatteringMatrix phi;
  OptimizerTrace trace;
};

/// Single ascent run from phi0; the block structure of phi0 (its group size)
/// is preserved exactly. Returns status `degenerate` without iterating if the
/// channel at phi0 is degenerate.
AscentResult ascent(const Scenario& scene, const ScatteringMatrix& phi0,
                    const OptimizerConfig& config);

/// Best of `config.restarts` ascents from random_scattering(N_R, group_size,
/// derive_seed(config.seed, r)), plus one ascent from each warm start (which
/// must already have a compatible block structure). Ties keep the earlier
/// start.
AscentResult ascent_grouped(const Scenario& scene, Eigen::Index group_size,
                            const OptimizerConfig& config,
                            const std::vector<ScatteringMatrix>& warm_starts = {});

struct RandomBaselineStats {
  int samples = 0;
  double mean_g = 0.0;
  double min_g = 0.0;
  double max_g = 0.0;
  double mean_crb = 0.0;  ///< may be +inf if any sample has g == 0
  double min_crb = 0.0;
  double max_crb = 0.0;
  std::vector<double> g_values;
};

/// g and CRB statistics over Haar-random fully-connected surfaces, sample i
/// drawn with derive_seed(seed, i).
RandomBaselineStats random_unitary_objective(const Scenario& scene, std::uint64_t seed,
                                             int samples);

}  // namespace bdris
