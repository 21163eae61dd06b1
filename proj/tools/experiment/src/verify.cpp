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

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "bdris/estimator.hpp"
#include "bdris/experiment/io.hpp"
#include "bdris/experiment/runs.hpp"
#include "bdris/fisher.hpp"
#include "bdris/gradient.hpp"
#include "bdris/random.hpp"

namespace bdris::experiment {

namespace {

constexpr std::array<Eigen::Index, 3> kSmallSizes{2, 4, 8};

enum CheckTag : std::uint64_t {
  kGradientTag = 101,
  kSchurTag = 102,
  kScalingTag = 103,
  kIntegrityTag = 104,
  kMonteCarloTag = 105,
};

std::uint64_t child(std::uint64_t seed, CheckTag tag, std::size_t i) {
  return derive_seed(derive_seed(seed, tag), static_cast<std::uint64_t>(i));
}

double relative(double a, double b) {
  if (a == b) return 0.0;  // also covers matching infinities
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

CheckResult check_at_most(std::string name, double measured, double threshold,
                          std::string detail) {
  return {std::move(name), measured <= threshold, measured, threshold, "<=", std::move(detail), {}};
}

CheckResult gradient_check(const ExperimentConfig& config) {
  const VerifyConfig& v = config.verify;
  double worst = 0.0;
  for (int i = 0; i < v.gradient_pairs; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const std::uint64_t s = child(config.seed, kGradientTag, k);
    const Scenario scene = draw_scene(s, kSmallSizes[(k / 3) % 3], kSmallSizes[k % 3]);
    const ComplexMatrix phi = haar_random_unitary(scene.n_r, s);
    ComplexMatrix analytic = euclidean_gradient(ChannelModel(scene), phi);
    if (v.corrupt_gradient) analytic = -analytic;
    const ComplexMatrix fd = fd_gradient_oracle(phi, scene, v.fd_step);
    worst = std::max(worst, (analytic - fd).norm() / fd.norm());
  }
  return check_at_most("gradient_fd", worst, v.gradient_tolerance,
                       "max relative Frobenius error, analytic vs central-difference Wirtinger "
                       "gradient, N_R and N_BS in {2,4,8}" +
                           std::string(v.corrupt_gradient ? " (analytic gradient sign-flipped)" : ""));
}

CheckResult schur_check(const ExperimentConfig& config) {
  double worst = 0.0;
  for (int i = 0; i < config.verify.schur_draws; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const std::uint64_t s = child(config.seed, kSchurTag, k);
    const Eigen::Index n_r = kSmallSizes[k % 3];
    const Scenario scene = draw_scene(s, kSmallSizes[(k / 3) % 3], n_r);
    // Cycle through fully, group (2) and single-connected surfaces.
    const Eigen::Index group = k % 3 == 0 ? n_r : (k % 3 == 1 ? 2 : 1);
    const ScatteringMatrix phi = random_scattering(n_r, group, s);
    const FisherBlocks blocks = fim_blocks(build_channel(scene, phi), scene);
    worst = std::max(worst, relative(blocks.crb_theta, crb_by_inversion(blocks)));
  }
  return check_at_most("schur_crosscheck", worst, config.verify.schur_tolerance,
                       "max relative gap, closed-form CRB vs [F^-1]_11 of the 3x3 FIM");
}

CheckResult scaling_check(const ExperimentConfig& config) {
  double worst_slots = 0.0;
  double worst_noise = 0.0;
  double worst_power = 0.0;
  for (std::size_t i = 0; i < 16; ++i) {
    const std::uint64_t s = child(config.seed, kScalingTag, i);
    const Scenario scene = draw_scene(s, kSmallSizes[i % 3], kSmallSizes[(i / 3) % 3]);
    const ScatteringMatrix phi = random_scattering(scene.n_r, scene.n_r, s);
    auto crb_at = [&phi](const Scenario& sc) { return crb_theta(build_channel(sc, phi), sc); };
    const double base = crb_at(scene);
    Scenario twice_slots = scene;
    twice_slots.slots *= 2;
    Scenario twice_noise = scene;
    twice_noise.noise_power *= 2.0;
    Scenario twice_power = scene;
    twice_power.power *= 2.0;
    worst_slots = std::max(worst_slots, relative(crb_at(twice_slots) / base, 0.5));
    worst_noise = std::max(worst_noise, relative(crb_at(twice_noise) / base, 2.0));
    worst_power = std::max(worst_power, relative(crb_at(twice_power) / base, 0.5));
  }
  const double worst = std::max({worst_slots, worst_noise, worst_power});
  CheckResult r = check_at_most("crb_scaling", worst, config.verify.scaling_tolerance,
                                "max relative deviation of CRB(2L)/CRB(L) = 0.5, "
                                "CRB(2 sigma^2)/CRB(sigma^2) = 2, CRB(2P)/CRB(P) = 0.5");
  r.values = {{"slots", worst_slots}, {"noise_power", worst_noise}, {"power", worst_power}};
  return r;
}

std::vector<CheckResult> integrity_checks(const ExperimentConfig& config) {
  ExperimentConfig at = config;
  at.scenario.n_r = config.verify.integrity_n_r;
  at.scenario.group_size.reset();
  const Scenario scene = at.scene();
  OptimizerConfig opt = config.optimizer_config();
  opt.max_iters = config.verify.integrity_iters;
  opt.epsilon = std::numeric_limits<double>::min();  // run until stationary or max_iters
  const ScatteringMatrix phi0 =
      random_scattering(scene.n_r, scene.n_r, child(config.seed, kIntegrityTag, 0));
  const AscentResult r = ascent(scene, phi0, opt);
  const OptimizerTrace& t = r.trace;

  double drift = 0.0;
  double skew = 0.0;
  double drop = 0.0;
  double previous = t.initial_g / t.objective_scale;
  for (const IterationRecord& rec : t.records) {
    drift = std::max(drift, rec.unitarity_drift);
    skew = std::max(skew, rec.skew_residual);
    const double g = rec.g_value / t.objective_scale;
    drop = std::max(drop, previous - g);
    previous = g;
  }
  const std::string where = "ascent at N_R = " + std::to_string(scene.n_r) + ", " +
                            std::to_string(t.records.size()) + " iterations";
  std::vector<CheckResult> out;
  out.push_back(check_at_most("unitarity_drift", drift, 1e-9,
                              "max ||Phi^H Phi - I||_F over iterates, " + where));
  out.push_back(check_at_most("geodesic_skew_residual", skew, 1e-10,
                              "max skew-Hermitian residual of the geodesic direction, " + where));
  out.push_back(check_at_most("monotone_ascent", drop, 1e-12,
                              "max decrease of normalized g between iterates, " + where));
  out.back().values = {{"initial_g", t.initial_g}, {"final_g", t.final_g()}};
  return out;
}

std::vector<CheckResult> monte_carlo_checks(const ExperimentConfig& config, std::size_t workers) {
  const VerifyConfig& v = config.verify;
  ExperimentConfig at = config;
  at.scenario.n_r = v.mc_n_r;
  at.scenario.group_size.reset();
  const Scenario scene = at.scene();
  const ScatteringMatrix phi = ascent_grouped(scene, scene.n_r, config.optimizer_config()).phi;

  std::vector<MonteCarloResult> results(v.mc_noise_power_dbm.size());
  parallel_for(results.size(), workers, [&](std::size_t i) {
    Scenario point = scene;
    point.noise_power = dbm_to_watts(v.mc_noise_power_dbm[i]);
    results[i] = monte_carlo_mse(point, phi, v.mc_trials, child(config.seed, kMonteCarloTag, i));
  });

  CheckResult band;
  band.name = "mse_vs_crb_high_snr";
  band.measured = results[0].ratio;
  band.threshold = v.mse_band_high;
  band.relation =
      "in [" + format_number(v.mse_band_low) + ", " + format_number(v.mse_band_high) + "]";
  band.passed = results[0].ratio >= v.mse_band_low && results[0].ratio <= v.mse_band_high;
  band.detail = std::to_string(v.mc_trials) + "-trial ML MSE / CRB at " +
                format_number(v.mc_noise_power_dbm[0]) + " dBm noise, N_R = " +
                std::to_string(scene.n_r);
  band.values = {{"mse", results[0].mse}, {"crb", results[0].crb}};

  CheckResult floor;
  floor.name = "mse_lower_bound";
  floor.relation = ">=";
  floor.threshold = v.mse_band_low;
  floor.measured = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < results.size(); ++i) {
    floor.measured = std::min(floor.measured, results[i].ratio);
    floor.values.emplace_back("ratio@" + format_number(v.mc_noise_power_dbm[i]) + "dBm",
                              results[i].ratio);
  }
  floor.passed = floor.measured >= v.mse_band_low;
  floor.detail = "min over tested noise powers of ML MSE / CRB";
  return {band, floor};
}

}  // namespace

Scenario draw_scene(std::uint64_t seed, Eigen::Index n_bs, Eigen::Index n_r) {
  auto angle = [seed](std::uint64_t k) {
    return 2.4 * uniform_at(seed, RandomStream::scene_draw, k) - 1.2;
  };
  Scenario scene;
  scene.n_bs = n_bs;
  scene.n_r = n_r;
  scene.theta = angle(0);
  scene.phi_r = angle(1);
  scene.phi_bs = angle(2);
  scene.alpha = complex_gaussian_at(seed, RandomStream::scene_draw, 3);
  scene.channel_seed = seed;
  scene.validate();
  return scene;
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

VerifyReport run_verify(const ExperimentConfig& config, std::size_t workers) {
  validate(config);
  VerifyReport report;
  report.seed = config.seed;
  report.checks.push_back(gradient_check(config));
  report.checks.push_back(schur_check(config));
  report.checks.push_back(scaling_check(config));
  for (CheckResult& c : integrity_checks(config)) report.checks.push_back(std::move(c));
  for (CheckResult& c : monte_carlo_checks(config, workers)) report.checks.push_back(std::move(c));
  return report;
}

std::string verify_json(const VerifyReport& report) {
  // JSON has no infinities; non-finite measurements are written as strings.
  auto number = [](double x) -> nlohmann::ordered_json {
    if (std::isfinite(x)) return x;
    return format_number(x);
  };
  nlohmann::ordered_json doc;
  doc["seed"] = report.seed;
  doc["passed"] = report.passed();
  doc["checks"] = nlohmann::ordered_json::array();
  for (const CheckResult& c : report.checks) {
    nlohmann::ordered_json item;
    item["name"] = c.name;
    item["passed"] = c.passed;
    item["measured"] = number(c.measured);
    item["relation"] = c.relation;
    item["threshold"] = number(c.threshold);
    item["detail"] = c.detail;
    if (!c.values.empty()) {
      nlohmann::ordered_json values;
      for (const auto& [key, x] : c.values) values[key] = number(x);
      item["values"] = std::move(values);
    }
    doc["checks"].push_back(std::move(item));
  }
  return doc.dump(2) + "\n";
}

}  // namespace bdris::experiment
