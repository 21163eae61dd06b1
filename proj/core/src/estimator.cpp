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

#include "bdris/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bdris/errors.hpp"
#include "bdris/fisher.hpp"
#include "bdris/random.hpp"

namespace bdris {

namespace {

constexpr double kPi = std::numbers::pi;

double log_normalizer(const Scenario& scene, Eigen::Index slots) {
  return -static_cast<double>(scene.n_bs * slots) * std::log(kPi * scene.noise_power);
}

ComplexVector make_pilots(Eigen::Index slots, std::uint64_t seed, PilotKind kind) {
  ComplexVector s = ComplexVector::Ones(slots);
  if (kind == PilotKind::qpsk) {
    for (Eigen::Index l = 0; l < slots; ++l) {
      const double u = uniform_at(seed, RandomStream::pilots, static_cast<std::uint64_t>(l));
      const int quadrant = std::min(3, static_cast<int>(4.0 * (1.0 - u)));
      s[l] = std::polar(1.0, kPi / 4.0 + kPi / 2.0 * quadrant);
    }
  }
  return s;
}

void require_observation(const ObservationBlock& obs, const Scenario& scene) {
  if (obs.y.rows() != scene.n_bs || obs.y.cols() != obs.pilots.size() || obs.pilots.size() < 1) {
    throw InvalidArgument("observation block does not match the scene dimensions");
  }
}

}  // namespace

ObservationBlock synthesize(const Scenario& scene, const ScatteringMatrix& phi,
                            std::uint64_t seed, const SynthesisOptions& options) {
  scene.validate();
  const ChannelBundle bundle = build_channel(scene, phi);
  ObservationBlock obs;
  obs.seed = seed;
  obs.pilots = make_pilots(scene.slots, seed, options.pilots);
  obs.y = std::sqrt(scene.power) * (bundle.h * obs.pilots.transpose());
  if (!options.noiseless) {
    const double sigma = std::sqrt(scene.noise_power);
    for (Eigen::Index i = 0; i < obs.y.rows(); ++i) {
      for (Eigen::Index l = 0; l < obs.y.cols(); ++l) {
        obs.y(i, l) += sigma * complex_gaussian_at(seed, RandomStream::noise,
                                                   entry_index(static_cast<std::uint64_t>(i),
                                                               static_cast<std::uint64_t>(l)));
      }
    }
  }
  return obs;
}

double log_likelihood(const ObservationBlock& obs, double theta, Complex alpha,
                      const ScatteringMatrix& phi, const Scenario& scene) {
  require_observation(obs, scene);
  Scenario at = scene;
  at.theta = theta;
  at.alpha = alpha;
  const ChannelBundle bundle = build_channel(at, phi);
  const ComplexVector& h = bundle.h;
  // tr(Y^H h s^T) = s^T (Y^H h)
  const Complex cross = obs.pilots.transpose() * (obs.y.adjoint() * h);
  const double quadratic = obs.y.squaredNorm() - 2.0 * std::sqrt(scene.power) * cross.real() +
                           scene.power * obs.pilots.squaredNorm() * h.squaredNorm();
  return log_normalizer(scene, obs.pilots.size()) - quadratic / scene.noise_power;
}

MlEstimator::MlEstimator(const Scenario& scene, const ScatteringMatrix& phi, ThetaGrid grid)
    : scene_(scene), grid_(grid) {
  if (grid_.points < 1) throw InvalidArgument("ml_estimate: empty theta grid");
  if (!(grid_.lo > -kPi / 2.0) || !(grid_.hi < kPi / 2.0) || grid_.lo > grid_.hi) {
    throw InvalidArgument("ml_estimate: grid must lie inside (-pi/2, pi/2)");
  }
  phi.validate();
  if (phi.size() != scene.n_r) throw InvalidArgument("ml_estimate: Phi does not match N_R");
  g_phi_ = ris_bs_channel(scene) * phi.matrix();
  responses_.reserve(static_cast<std::size_t>(grid_.points));
  norms2_.reserve(static_cast<std::size_t>(grid_.points));
  for (int k = 0; k < grid_.points; ++k) {
    responses_.push_back(response(grid_.at(k)));
    norms2_.push_back(responses_.back().squaredNorm());
  }
}

ComplexVector MlEstimator::response(double theta) const {
  return g_phi_ * steering_vector(theta, scene_.n_r, scene_.d_ris);
}

double MlEstimator::profile(const ComplexVector& u, double u_norm2, const ComplexVector& z) const {
  if (!(u_norm2 > kEpsChannel)) return -std::numeric_limits<double>::infinity();
  return std::norm(u.dot(z)) / u_norm2;
}

EstimateResult MlEstimator::estimate(const ObservationBlock& obs) const {
  require_observation(obs, scene_);
  const ComplexVector z = obs.y * obs.pilots.conjugate();

  int best = -1;
  double best_score = -std::numeric_limits<double>::infinity();
  std::vector<double> scores(static_cast<std::size_t>(grid_.points));
  for (int k = 0; k < grid_.points; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    scores[ks] = profile(responses_[ks], norms2_[ks], z);
    if (scores[ks] > best_score) {
      best_score = scores[ks];
      best = k;
    }
  }
  if (best < 0) throw DegenerateScene("ml_estimate: every grid response is degenerate");

  double theta_hat = grid_.at(best);
  ComplexVector u = responses_[static_cast<std::size_t>(best)];
  if (best > 0 && best + 1 < grid_.points) {
    const double left = scores[static_cast<std::size_t>(best - 1)];
    const double right = scores[static_cast<std::size_t>(best + 1)];
    const double curvature = left - 2.0 * best_score + right;
    if (curvature < 0.0 && std::isfinite(curvature)) {
      const double offset = 0.5 * (left - right) / curvature;
      const double spacing = (grid_.hi - grid_.lo) / (grid_.points - 1);
      const double refined = theta_hat + offset * spacing;
      const ComplexVector u_refined = response(refined);
      const double score = profile(u_refined, u_refined.squaredNorm(), z);
      if (score > best_score) {
        theta_hat = refined;
        best_score = score;
        u = u_refined;
      }
    }
  }

  const double pilot_energy = obs.pilots.squaredNorm();
  EstimateResult result;
  result.theta_hat = theta_hat;
  result.alpha_hat = u.dot(z) / (std::sqrt(scene_.power) * pilot_energy * u.squaredNorm());
  result.concentrated_loglik =
      log_normalizer(scene_, obs.pilots.size()) -
      (obs.y.squaredNorm() - best_score / pilot_energy) / scene_.noise_power;
  return result;
}

EstimateResult ml_estimate(const ObservationBlock& obs, const ScatteringMatrix& phi,
                           const Scenario& scene_known, const ThetaGrid& grid) {
  return MlEstimator(scene_known, phi, grid).estimate(obs);
}

MonteCarloResult monte_carlo_mse(const Scenario& scene, const ScatteringMatrix& phi, int trials,
                                 std::uint64_t seed, const ThetaGrid& grid) {
  if (trials < 1) throw InvalidArgument("monte_carlo_mse: trials must be >= 1");
  const MlEstimator estimator(scene, phi, grid);
  MonteCarloResult result;
  result.trials = trials;
  double sum_sq = 0.0;
  double sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    const ObservationBlock obs =
        synthesize(scene, phi, derive_seed(seed, static_cast<std::uint64_t>(t)));
    const double error = estimator.estimate(obs).theta_hat - scene.theta;
    sum += error;
    sum_sq += error * error;
  }
  result.mse = sum_sq / trials;
  result.mean_error = sum / trials;
  result.crb = crb_theta(build_channel(scene, phi), scene);
  result.ratio = result.mse / result.crb;
  return result;
}

ComplexMatrix fd_wirtinger_gradient(const MatrixFunctional& f, const ComplexMatrix& phi,
                                    double step) {
  if (!(step >= 1e-8 && step <= 1e-4)) {
    throw InvalidArgument("fd_wirtinger_gradient: step " + std::to_string(step) +
                          " outside [1e-8, 1e-4]");
  }
  ComplexMatrix grad(phi.rows(), phi.cols());
  ComplexMatrix probe = phi;
  for (Eigen::Index m = 0; m < phi.rows(); ++m) {
    for (Eigen::Index n = 0; n < phi.cols(); ++n) {
      const Complex original = phi(m, n);
      probe(m, n) = original + step;
      const double re_plus = f(probe);
      probe(m, n) = original - step;
      const double re_minus = f(probe);
      probe(m, n) = original + Complex{0.0, step};
      const double im_plus = f(probe);
      probe(m, n) = original - Complex{0.0, step};
      const double im_minus = f(probe);
      probe(m, n) = original;
      const double d_re = (re_plus - re_minus) / (2.0 * step);
      const double d_im = (im_plus - im_minus) / (2.0 * step);
      grad(m, n) = Complex{0.5 * d_re, 0.5 * d_im};
    }
  }
  return grad;
}

ComplexMatrix fd_gradient_oracle(const ComplexMatrix& phi, const Scenario& scene, double step) {
  const ChannelModel model(scene);
  return fd_wirtinger_gradient([&model](const ComplexMatrix& m) { return model.objective(m); },
                               phi, step);
}

}  // namespace bdris
