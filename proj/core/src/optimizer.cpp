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

#include "bdris/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "bdris/errors.hpp"
#include "bdris/fisher.hpp"
#include "bdris/gradient.hpp"
#include "bdris/random.hpp"

namespace bdris {

namespace {

constexpr double kMinusInf = -std::numeric_limits<double>::infinity();

// Geodesic direction at Phi restricted to the diagonal blocks.
struct Direction {
  ComplexMatrix s;
  double eta = 0.0;
  double skew_residual = 0.0;
};

Direction geodesic_direction(const ChannelModel& model, const ComplexMatrix& phi,
                             Eigen::Index group, double scale) {
  const Eigen::Index n = phi.rows();
  const ComplexMatrix gamma = mask_to_blocks(euclidean_gradient(model, phi), group) / scale;
  Direction d;
  d.s = ComplexMatrix::Zero(n, n);
  for (Eigen::Index start = 0; start < n; start += group) {
    const ComplexMatrix x = gamma.block(start, start, group, group) *
                            phi.block(start, start, group, group).adjoint();
    d.s.block(start, start, group, group) = x - x.adjoint();
  }
  d.eta = riemannian_metric(d.s, d.s);
  d.skew_residual = skew_residual(d.s);
  return d;
}

// Factored direction plus the current Phi a, Phi a' in each block's
// eigenbasis, so g(exp(mu S) Phi) costs O(N_R^2 + N_BS N_R) for any mu.
class StepEvaluator {
 public:
  StepEvaluator(const ChannelModel& model, const ComplexMatrix& phi, const ComplexMatrix& s,
                Eigen::Index group, double scale)
      : model_(model), group_(group), scale_(scale) {
    const ComplexVector p = phi * model.a_ris_theta();
    const ComplexVector q = phi * model.a_ris_dot();
    for (Eigen::Index start = 0; start < phi.rows(); start += group) {
      spectra_.push_back(SkewSpectrum::factor(s.block(start, start, group, group)));
      p_coords_.push_back(spectra_.back().to_eigenbasis(p.segment(start, group)));
      q_coords_.push_back(spectra_.back().to_eigenbasis(q.segment(start, group)));
    }
  }

  /// g(exp(mu S) Phi) / scale; -inf if that point is degenerate.
  double objective(double mu) const {
    const Eigen::Index n = model_.n_r();
    ComplexVector p(n);
    ComplexVector q(n);
    for (std::size_t b = 0; b < spectra_.size(); ++b) {
      const Eigen::Index start = static_cast<Eigen::Index>(b) * group_;
      p.segment(start, group_) = spectra_[b].apply_exp(mu, p_coords_[b]);
      q.segment(start, group_) = spectra_[b].apply_exp(mu, q_coords_[b]);
    }
    try {
      return model_.objective_from(p, q) / scale_;
    } catch (const DegenerateScene&) {
      return kMinusInf;
    }
  }

  /// exp(mu S) Phi, block by block.
  ComplexMatrix rotate(double mu, const ComplexMatrix& phi) const {
    ComplexMatrix next = ComplexMatrix::Zero(phi.rows(), phi.cols());
    for (std::size_t b = 0; b < spectra_.size(); ++b) {
      const Eigen::Index start = static_cast<Eigen::Index>(b) * group_;
      next.block(start, start, group_, group_) =
          spectra_[b].exp(mu) * phi.block(start, start, group_, group_);
    }
    return next;
  }

 private:
  const ChannelModel& model_;
  Eigen::Index group_;
  double scale_;
  std::vector<SkewSpectrum> spectra_;
  std::vector<ComplexVector> p_coords_;
  std::vector<ComplexVector> q_coords_;
};

// Phi-independent magnitude of g: |alpha|^2 ||G||_F^2 ||a'||^2 bounds
// ||h_dot||^2 for unitary Phi. Dividing by it makes mu_init and the step
// tests independent of the physical units of the scene.
double objective_scale(const ChannelModel& model) {
  const double scale = std::norm(model.scene().alpha) * model.g_mat().squaredNorm() *
                       model.a_ris_dot().squaredNorm();
  return scale > 0.0 && std::isfinite(scale) ? scale : 1.0;
}

// Pulls each block back onto the unitary group when its drift exceeds the
// threshold (1x1 blocks are always renormalized). Returns the largest block
// drift after correction.
double restore_unitarity(ComplexMatrix& phi, Eigen::Index group, bool& corrected) {
  corrected = false;
  double worst = 0.0;
  for (Eigen::Index start = 0; start < phi.rows(); start += group) {
    auto block = phi.block(start, start, group, group);
    if (group == 1) {
      const double modulus = std::abs(block(0, 0));
      if (modulus != 1.0) {
        block(0, 0) /= modulus;
        corrected = true;
      }
      worst = std::max(worst, std::abs(std::norm(block(0, 0)) - 1.0));
      continue;
    }
    double drift = unitarity_report(block).frobenius_drift;
    if (drift > kReunitarizeThreshold) {
      block = reunitarize(block);
      drift = unitarity_report(block).frobenius_drift;
      corrected = true;
    }
    worst = std::max(worst, drift);
  }
  return worst;
}

}  // namespace

void OptimizerConfig::validate() const {
  if (!(mu_init > 0.0) || !std::isfinite(mu_init)) {
    throw InvalidArgument("optimizer: mu_init must be finite and > 0");
  }
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw InvalidArgument("optimizer: epsilon must lie in (0, 1)");
  }
  if (max_iters < 1) throw InvalidArgument("optimizer: max_iters must be >= 1");
  if (max_halvings < 1 || max_doublings < 1) {
    throw InvalidArgument("optimizer: max_halvings and max_doublings must be >= 1");
  }
  if (restarts < 1) throw InvalidArgument("optimizer: restarts must be >= 1");
}

std::string_view to_string(AscentStatus status) {
  switch (status) {
    case AscentStatus::converged: return "converged";
    case AscentStatus::max_iters: return "max_iters";
    case AscentStatus::degenerate: return "degenerate";
  }
  return "unknown";
}

AscentResult ascent(const Scenario& scene, const ScatteringMatrix& phi0,
                    const OptimizerConfig& config) {
  config.validate();
  scene.validate();
  phi0.validate();
  if (phi0.size() != scene.n_r) {
    throw InvalidArgument("ascent: Phi is " + std::to_string(phi0.size()) +
                          "x" + std::to_string(phi0.size()) + " but N_R = " +
                          std::to_string(scene.n_r));
  }

  const ChannelModel model(scene);
  const Eigen::Index group = phi0.group_size();
  const double scale = objective_scale(model);
  ComplexMatrix phi = phi0.matrix();
  OptimizerTrace trace;
  trace.objective_scale = scale;

  double g;  // normalized objective g(Phi) / scale
  try {
    g = model.objective(phi) / scale;
  } catch (const DegenerateScene&) {
    trace.status = AscentStatus::degenerate;
    return {phi0, trace};
  }
  trace.initial_g = g * scale;

  double mu = config.mu_init;
  trace.status = AscentStatus::max_iters;
  Direction dir = geodesic_direction(model, phi, group, scale);
  trace.initial_eta = dir.eta;

  auto finish_record = [&](IterationRecord& rec) {
    rec.g_value = g * scale;
    rec.crb_theta = crb_from_objective(rec.g_value, scene);
    rec.mu = mu;
    trace.records.push_back(rec);
  };

  for (int iter = 0; iter < config.max_iters; ++iter) {
    IterationRecord rec;
    rec.eta = dir.eta;
    rec.skew_residual = dir.skew_residual;
    rec.unitarity_drift = unitarity_report(phi).frobenius_drift;

    if (!(dir.eta > 0.0)) {
      // Stationary: nothing to follow.
      finish_record(rec);
      trace.status = AscentStatus::converged;
      break;
    }

    const StepEvaluator step(model, phi, dir.s, group, scale);
    double gain = step.objective(mu) - g;
    while (gain < 0.5 * mu * dir.eta && rec.halvings < config.max_halvings) {
      mu *= 0.5;
      ++rec.halvings;
      gain = step.objective(mu) - g;
    }
    if (gain < 0.5 * mu * dir.eta && !(gain > 0.0)) {
      // Even the smallest tested step does not improve g.
      finish_record(rec);
      trace.status = AscentStatus::converged;
      break;
    }
    while (rec.doublings < config.max_doublings &&
           step.objective(2.0 * mu) - g >= mu * dir.eta) {
      mu *= 2.0;
      ++rec.doublings;
    }

    ComplexMatrix next = step.rotate(mu, phi);
    rec.unitarity_drift = restore_unitarity(next, group, rec.reunitarized);
    double g_next;
    try {
      g_next = model.objective(next) / scale;
    } catch (const DegenerateScene&) {
      g_next = kMinusInf;
    }
    if (!(g_next >= g)) {
      // Rounding ate the predicted gain; stop at the current point.
      finish_record(rec);
      trace.status = AscentStatus::converged;
      break;
    }

    const double relative_change = g > 0.0 ? std::abs(g_next - g) / g
                                           : (g_next > 0.0 ? 1.0 : 0.0);
    phi = std::move(next);
    g = g_next;
    finish_record(rec);

    dir = geodesic_direction(model, phi, group, scale);
    if (relative_change <= config.epsilon) {
      trace.status = AscentStatus::converged;
      break;
    }
  }

  trace.final_eta = dir.eta;
  return {ScatteringMatrix::with_group_size(std::move(phi), group), std::move(trace)};
}

AscentResult ascent_grouped(const Scenario& scene, Eigen::Index group_size,
                            const OptimizerConfig& config,
                            const std::vector<ScatteringMatrix>& warm_starts) {
  config.validate();
  scene.validate();
  if (group_size < 1 || scene.n_r % group_size != 0) {
    throw InvalidArgument("ascent_grouped: group size " + std::to_string(group_size) +
                          " does not divide N_R = " + std::to_string(scene.n_r));
  }

  std::optional<AscentResult> best;
  auto consider = [&](AscentResult candidate, int index) {
    candidate.trace.start_index = index;
    if (candidate.trace.status == AscentStatus::degenerate) {
      if (!best) best = std::move(candidate);
      return;
    }
    if (!best || best->trace.status == AscentStatus::degenerate ||
        candidate.trace.final_g() > best->trace.final_g()) {
      best = std::move(candidate);
    }
  };

  for (int r = 0; r < config.restarts; ++r) {
    const ScatteringMatrix start =
        random_scattering(scene.n_r, group_size, derive_seed(config.seed, static_cast<std::uint64_t>(r)));
    consider(ascent(scene, start, config), r);
  }
  for (std::size_t k = 0; k < warm_starts.size(); ++k) {
    const ScatteringMatrix& warm = warm_starts[k];
    if (warm.size() != scene.n_r || group_size % warm.group_size() != 0) {
      throw InvalidArgument("ascent_grouped: warm start " + std::to_string(k) +
                            " is not feasible for group size " + std::to_string(group_size));
    }
    const ScatteringMatrix start = ScatteringMatrix::with_group_size(warm.matrix(), group_size);
    consider(ascent(scene, start, config), config.restarts + static_cast<int>(k));
  }
  return std::move(*best);
}

RandomBaselineStats random_unitary_objective(const Scenario& scene, std::uint64_t seed,
                                             int samples) {
  if (samples < 1) throw InvalidArgument("random_unitary_objective: samples must be >= 1");
  const ChannelModel model(scene);
  RandomBaselineStats stats;
  stats.samples = samples;
  stats.min_g = std::numeric_limits<double>::infinity();
  stats.max_g = kMinusInf;
  double sum_g = 0.0;
  double sum_crb = 0.0;
  stats.min_crb = std::numeric_limits<double>::infinity();
  stats.max_crb = 0.0;
  for (int i = 0; i < samples; ++i) {
    const ComplexMatrix phi =
        haar_random_unitary(scene.n_r, derive_seed(seed, static_cast<std::uint64_t>(i)));
    const double g = model.objective(phi);
    const double crb = crb_from_objective(g, scene);
    stats.g_values.push_back(g);
    sum_g += g;
    sum_crb += crb;
    stats.min_g = std::min(stats.min_g, g);
    stats.max_g = std::max(stats.max_g, g);
    stats.min_crb = std::min(stats.min_crb, crb);
    stats.max_crb = std::max(stats.max_crb, crb);
  }
  stats.mean_g = sum_g / samples;
  stats.mean_crb = sum_crb / samples;
  return stats;
}

}  // namespace bdris
