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

// Experiment configuration: one JSON document, every key optional.
//
//   {
//     "scenario": {
//       "n_bs": 8, "n_r": 64, "group_size": null,     // null: fully connected
//       "slots": 256, "noise_power_dbm": -120, "power_dbm": 20,
//       "wavelength": 0.1, "d_bs": 0.5, "d_ris": 0.5,
//       "pathloss_exponent": 2.0, "rician_k": 10,     // null or "inf": LoS only
//       "channel_seed": 1, "reference_gain": null, "alpha_phase_seed": null,
//       "target": [5, 0], "ris": [0, 20], "bs": [-10, 0]
//     },
//     "optimizer": { "mu_init": 0.01, "epsilon": 1e-6, "max_iters": 2000,
//                    "max_halvings": 30, "max_doublings": 30 },
//     "sweep": { "axis": "n_r", "values": [8, 16, 32, 64] },
//     "schemes": ["proposed", "random_unitary", "diagonal_baseline"],
//     "restarts": 4, "seed": 1, "random_samples": 100, "output": "out",
//     "verify": { ... see VerifyConfig ... }
//   }
//
// Sweep values are in the axis' natural unit: dBm for noise_power, metres
// for ris_x_position, counts otherwise.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bdris/errors.hpp"
#include "bdris/optimizer.hpp"
#include "bdris/scene.hpp"

namespace bdris::experiment {

/// Invalid configuration. what() is "<source>:<line>: <message>".
class ConfigError : public Error {
 public:
  ConfigError(std::string source, int line, const std::string& message);

  const std::string& source() const { return source_; }
  int line() const { return line_; }

 private:
  std::string source_;
  int line_;
};

enum class SweepAxis { iterations, group_size, noise_power, slots, n_r, ris_x_position };
enum class Scheme { proposed, random_unitary, diagonal_baseline };

std::string_view to_string(SweepAxis axis);
std::string_view to_string(Scheme scheme);
/// Throws InvalidArgument on an unknown name.
Scheme parse_scheme(std::string_view name);

struct ScenarioConfig {
  Eigen::Index n_bs = 8;
  Eigen::Index n_r = 64;
  std::optional<Eigen::Index> group_size;
  Eigen::Index slots = 256;
  double noise_power_dbm = -120.0;
  double power_dbm = 20.0;
  double wavelength = 0.1;
  double d_bs = 0.5;
  double d_ris = 0.5;
  double pathloss_exponent = 2.0;
  double rician_k = 10.0;
  std::uint64_t channel_seed = 1;
  std::optional<double> reference_gain;
  std::optional<std::uint64_t> alpha_phase_seed;
  ScenePositions positions;
};

struct VerifyConfig {
  int gradient_pairs = 50;
  double fd_step = 1e-6;
  double gradient_tolerance = 1e-6;
  int schur_draws = 1000;
  double schur_tolerance = 1e-9;
  double scaling_tolerance = 1e-12;
  Eigen::Index integrity_n_r = 16;
  int integrity_iters = 300;
  Eigen::Index mc_n_r = 16;
  int mc_trials = 500;
  /// First entry is the high-SNR operating point checked against the band.
  std::vector<double> mc_noise_power_dbm{-120.0, -110.0, -100.0, -90.0, -80.0};
  double mse_band_low = 0.8;
  double mse_band_high = 2.0;
  /// Test hook: flips the sign of the analytic gradient in the FD check.
  bool corrupt_gradient = false;
};

struct ExperimentConfig {
  ScenarioConfig scenario;
  OptimizerConfig optimizer;  // restarts and seed mirror the top-level keys
  SweepAxis axis = SweepAxis::n_r;
  std::vector<double> values{8.0, 16.0, 32.0, 64.0};
  std::vector<Scheme> schemes{Scheme::proposed, Scheme::random_unitary,
                              Scheme::diagonal_baseline};
  int restarts = 4;
  std::uint64_t seed = 1;
  int random_samples = 100;
  std::filesystem::path output = "out";
  VerifyConfig verify;

  /// Name used in error messages.
  std::string source = "<defaults>";

  bool has_scheme(Scheme scheme) const;
  /// optimizer with restarts and seed copied in.
  OptimizerConfig optimizer_config() const;
  /// Scene for the configured scenario.
  Scenario scene() const;
  /// Scene with the sweep axis set to `value` (identity for iterations and
  /// group_size).
  Scenario scene_at(double value) const;
  /// Group size of the proposed scheme at `value`.
  Eigen::Index group_size_at(double value) const;
};

ExperimentConfig default_config();

/// Parses and validates a config document. Errors carry the line of the
/// offending key (or of the syntax error).
ExperimentConfig parse_config(std::string_view text, std::string_view source = "<config>");

ExperimentConfig load_config(const std::filesystem::path& path);

/// Re-validates after command-line overrides; errors point at line 0.
void validate(const ExperimentConfig& config);

double dbm_to_watts(double dbm);

}  // namespace bdris::experiment
