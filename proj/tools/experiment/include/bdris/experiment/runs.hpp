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

// Batch runs behind the command-line tool. All results are pure functions of
// the config (including its seed); wall times are reported separately.

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bdris/experiment/config.hpp"
#include "bdris/optimizer.hpp"

namespace bdris::experiment {

struct SweepRow {
  double axis_value = 0.0;
  Scheme scheme = Scheme::proposed;
  double g_value = 0.0;
  double crb_theta = 0.0;  ///< +inf sentinel when g == 0
  double crb_db = 0.0;
  int iterations = 0;      ///< ascent iterations of the best start; 0 for random_unitary
  double wall_seconds = 0.0;
};

/// Per-scheme result at one scene.
///
/// proposed: best of `restarts` ascents at the configured group size.
/// diagonal_baseline: the same with single-connected (diagonal) Phi.
/// random_unitary: mean g and mean CRB over `random_samples` Haar-random
/// fully-connected Phi.
///
/// For the slots and noise_power axes Phi is optimized once at the base scene
/// and frozen (g does not depend on L or sigma^2), so the CRB column scales
/// exactly. Along group_size the proposed scheme warm-starts each group size
/// from the optimum of the previous value when it nests.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config, std::size_t workers);

/// Header: axis,axis_value,scheme,g_value,crb_theta,crb_db,iterations
void write_sweep_csv(const ExperimentConfig& config, const std::vector<SweepRow>& rows,
                     std::ostream& out);
/// Header: axis_value,scheme,wall_seconds
void write_timing_csv(const std::vector<SweepRow>& rows, std::ostream& out);

struct ConvergenceResult {
  Scenario scene;
  OptimizerTrace trace;  ///< best proposed start
  std::optional<ScatteringMatrix> phi;
  double random_unitary_g = 0.0;
  double random_unitary_crb = 0.0;
  double diagonal_g = 0.0;
  double diagonal_crb = 0.0;
};

/// Proposed-scheme trace at the configured scene plus the baselines' levels.
/// Requires "proposed" among the schemes.
ConvergenceResult run_convergence(const ExperimentConfig& config, std::size_t workers);

/// Header: scheme,iteration,g_value,crb_theta,crb_db,mu,eta. Iteration 0 is
/// the starting point. Baselines repeat their level at every iteration of
/// the proposed trace (empty mu and eta).
void write_trace_csv(const ExperimentConfig& config, const ConvergenceResult& result,
                     std::ostream& out);

/// Gnuplot script plotting crb_db from sweep.csv and trace.csv in `dir`.
std::string gnuplot_script(const ExperimentConfig& config);

/// Seeded abstract scene for oracle checks: angles uniform in (-1.2, 1.2),
/// alpha ~ CN(0, 1), Rician surface link with channel_seed = seed, default
/// power, noise and slots.
Scenario draw_scene(std::uint64_t seed, Eigen::Index n_bs, Eigen::Index n_r);

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string relation;  ///< how measured compares to threshold, e.g. "<="
  std::string detail;
  /// Extra named measurements, in insertion order.
  std::vector<std::pair<std::string, double>> values;
};

struct VerifyReport {
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  bool passed() const;
};

/// Oracle suites: FD gradient, Schur-vs-inversion, CRB scaling laws, manifold
/// integrity of an ascent, and Monte Carlo MSE of the ML estimator vs CRB.
VerifyReport run_verify(const ExperimentConfig& config, std::size_t workers);

/// verify.json; no timings, so the file is reproducible.
std::string verify_json(const VerifyReport& report);

}  // namespace bdris::experiment
