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


#include <doctest.h>

#include <cmath>

#include "bdris/bdris.hpp"
#include "bdris/experiment/runs.hpp"
#include "oracles.hpp"

using namespace bdris;
using bdris::experiment::draw_scene;

namespace {

double rel_fro(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).norm() / b.norm(); }

oracle::Functional objective_of(const Scenario& s) {
  return [s](const ComplexMatrix& m) { return oracle::objective(oracle::channel(s, m)); };
}

}  // namespace

TEST_SUITE("gradient") {

TEST_CASE("Euclidean gradient vs finite differences") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Scenario s = draw_scene(seed, 4, 4);
    const ComplexMatrix phi = haar_random_unitary(4, seed);
    const ComplexMatrix fd = oracle::wirtinger_fd(objective_of(s), phi, 1e-6);
    CHECK(rel_fro(euclidean_gradient(ChannelModel(s), phi), fd) <= 1e-6);
  }
}

TEST_CASE("gradient off the manifold") {
  // The Euclidean gradient is an ambient object: it must hold for any Phi.
  const Scenario s = draw_scene(40, 3, 5);
  const ComplexMatrix phi = oracle::random_complex(5, 5, 40);
  const ComplexMatrix fd = oracle::wirtinger_fd(objective_of(s), phi, 1e-6);
  CHECK(rel_fro(euclidean_gradient(ChannelModel(s), phi), fd) <= 1e-6);
}

TEST_CASE("workspace terms") {
  const Scenario s = draw_scene(41, 4, 6);
  const ComplexMatrix phi = haar_random_unitary(6, 41);
  const ChannelModel model(s);
  const GradientWorkspace ws = gradient_workspace(model, phi);
  CHECK(rel_fro(ws.euclidean, euclidean_gradient(model, phi)) <= 1e-12);
  const ComplexMatrix k = std::norm(s.alpha) * model.g_mat().adjoint() * model.g_mat();
  CHECK(rel_fro(ws.c2, k * phi * ws.omega) <= 1e-12);
  CHECK(rel_fro(ws.lambda2, k * phi * model.a_ris_dot() * model.a_ris_dot().adjoint()) <= 1e-12);
}

TEST_CASE("gradient at theta = pi/2 is zero") {
  Scenario s = draw_scene(2, 4, 4);
  s.theta = oracle::kPi / 2.0;
  CHECK(euclidean_gradient(ChannelModel(s), haar_random_unitary(4, 1)).norm() == 0.0);
  CHECK(fd_gradient_oracle(haar_random_unitary(4, 1), s, 1e-6).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("gradient is quadratic in |alpha|") {
  Scenario s = draw_scene(3, 4, 4);
  const ComplexMatrix phi = haar_random_unitary(4, 3);
  const ComplexMatrix base = euclidean_gradient(ChannelModel(s), phi);
  const Complex c{1.5, -0.5};
  s.alpha *= c;
  CHECK(rel_fro(euclidean_gradient(ChannelModel(s), phi), std::norm(c) * base) <= 1e-14);
}

TEST_CASE("Riemannian and geodesic directions") {
  const ComplexMatrix phi = haar_random_unitary(5, 8);
  const ComplexMatrix gamma = oracle::random_complex(5, 5, 8);
  CHECK(riemannian_gradient(phi, ComplexMatrix::Zero(5, 5)).norm() == 0.0);
  CHECK(geodesic_gradient(phi, ComplexMatrix::Zero(5, 5)).norm() == 0.0);

  const ComplexMatrix herm = gamma + gamma.adjoint();
  CHECK(riemannian_gradient(ComplexMatrix::Identity(5, 5), herm).norm() <= 1e-15);

  const ComplexMatrix rie = riemannian_gradient(phi, gamma);
  CHECK(tangent_residual(phi, rie) <= 1e-10);
  const ComplexMatrix geo = geodesic_gradient(phi, gamma);
  CHECK((geo + geo.adjoint()).norm() <= 1e-10);
  CHECK((geo - rie * phi.adjoint()).norm() <= 1e-12 * (1.0 + geo.norm()));

  CHECK_THROWS_AS(riemannian_gradient(2.0 * phi, gamma), InvalidArgument);
  CHECK_THROWS_AS(geodesic_gradient(phi, ComplexMatrix::Zero(4, 4)), InvalidArgument);
}

TEST_CASE("metric") {
  CHECK(riemannian_metric(ComplexMatrix::Identity(6, 6), ComplexMatrix::Identity(6, 6)) == 3.0);
  const ComplexMatrix x = oracle::random_complex(4, 4, 1);
  const ComplexMatrix y = oracle::random_complex(4, 4, 2);
  CHECK(riemannian_metric(x, y) == doctest::Approx(riemannian_metric(y, x)).epsilon(1e-15));
  CHECK(std::abs(riemannian_metric(oracle::kJ * x, x)) <= 1e-14);
}

TEST_CASE("FD Wirtinger convention on a linear functional") {
  const ComplexMatrix m = oracle::random_complex(3, 3, 77);
  const ComplexMatrix phi = oracle::random_complex(3, 3, 78);
  const MatrixFunctional linear = [&m](const ComplexMatrix& p) { return (m * p).trace().real(); };
  // Re tr(M Phi) = 1/2 (tr(M Phi) + conj) => d/dPhi* = M^H / 2
  CHECK((fd_wirtinger_gradient(linear, phi, 1e-6) - 0.5 * m.adjoint()).norm() <= 1e-9);
}

TEST_CASE("FD oracle error is second order") {
  const Scenario s = draw_scene(12, 4, 4);
  const ComplexMatrix phi = haar_random_unitary(4, 12);
  const ComplexMatrix exact = euclidean_gradient(ChannelModel(s), phi);
  const double coarse = (fd_gradient_oracle(phi, s, 1e-4) - exact).norm();
  const double fine = (fd_gradient_oracle(phi, s, 5e-5) - exact).norm();
  const double ratio = coarse / fine;
  CHECK(ratio >= 3.0);
  CHECK(ratio <= 5.0);
}

TEST_CASE("library FD oracle agrees with the test FD and the analytic gradient") {
  const Scenario s = draw_scene(13, 2, 8);
  const ComplexMatrix phi = haar_random_unitary(8, 13);
  const ComplexMatrix lib = fd_gradient_oracle(phi, s, 1e-6);
  CHECK(rel_fro(lib, oracle::wirtinger_fd(objective_of(s), phi, 1e-6)) <= 1e-7);
  CHECK(rel_fro(euclidean_gradient(ChannelModel(s), phi), lib) <= 1e-6);
  CHECK_THROWS_AS(fd_gradient_oracle(phi, s, 1e-3), InvalidArgument);
  CHECK_THROWS_AS(fd_gradient_oracle(phi, s, 1e-9), InvalidArgument);
}

}  // TEST_SUITE

TEST_SUITE("optimizer") {

TEST_CASE("stationary start returns after one iteration") {
  Scenario s = default_scenario(4, 4);
  s.theta = oracle::kPi / 2.0;
  const ScatteringMatrix phi0 = random_scattering(4, 4, 2);
  const AscentResult r = ascent(s, phi0, OptimizerConfig{});
  CHECK(r.trace.status == AscentStatus::converged);
  CHECK(r.trace.records.size() == 1);
  CHECK(r.phi.matrix() == phi0.matrix());
}

TEST_CASE("N_R = 2 reaches the U(2) grid maximum") {
  const Scenario s = draw_scene(2024, 2, 2);
  OptimizerConfig c;
  c.epsilon = 1e-12;
  const double best = ascent_grouped(s, 2, c).trace.final_g();
  const double grid = oracle::u2_grid_max(s, oracle::kPi / 200.0);
  CHECK(std::abs(best - grid) / grid <= 1e-3);
  CHECK(best >= grid * (1.0 - 1e-12));
}

TEST_CASE("N_R = 8 trace is monotone and stays unitary") {
  const Scenario s = default_scenario(8, 8);
  const AscentResult r = ascent(s, random_scattering(8, 8, 5), OptimizerConfig{});
  double previous = r.trace.initial_g;
  for (const IterationRecord& rec : r.trace.records) {
    CHECK(rec.g_value >= previous);
    CHECK(rec.unitarity_drift <= 1e-9);
    CHECK(rec.skew_residual <= 1e-10);
    previous = rec.g_value;
  }
  CHECK(unitarity_report(r.phi.matrix()).frobenius_drift <= 1e-9);
  CHECK(r.trace.final_g() > r.trace.initial_g);
}

TEST_CASE("block structure is preserved") {
  const Scenario s = default_scenario(8, 8);
  const AscentResult r = ascent(s, random_scattering(8, 2, 6), OptimizerConfig{});
  CHECK(r.phi.group_size() == 2);
  CHECK(r.phi.matrix().block(0, 2, 2, 6).norm() == 0.0);
  CHECK_NOTHROW(r.phi.validate());

  const AscentResult d = ascent_grouped(s, 1, OptimizerConfig{});
  for (Eigen::Index k = 0; k < 8; ++k) {
    CHECK(std::abs(std::abs(d.phi.matrix()(k, k)) - 1.0) <= 1e-12);
  }
  CHECK((d.phi.matrix() - ComplexMatrix(d.phi.matrix().diagonal().asDiagonal())).norm() == 0.0);
}

TEST_CASE("single block grouped run equals a plain run") {
  const Scenario s = default_scenario(8, 6);
  OptimizerConfig c;
  c.restarts = 1;
  c.seed = 31;
  const AscentResult grouped = ascent_grouped(s, 6, c);
  const AscentResult plain = ascent(s, random_scattering(6, 6, derive_seed(31, 0)), c);
  CHECK(grouped.phi.matrix() == plain.phi.matrix());
  CHECK(grouped.trace.final_g() == plain.trace.final_g());
}

TEST_CASE("nested group sizes at N_R = 8") {
  const Scenario s = default_scenario(8, 8);
  const double g8 = ascent_grouped(s, 8, OptimizerConfig{}).trace.final_g();
  const double g2 = ascent_grouped(s, 2, OptimizerConfig{}).trace.final_g();
  const double g1 = ascent_grouped(s, 1, OptimizerConfig{}).trace.final_g();
  CHECK(g8 >= g2 * (1.0 - 1e-9));
  CHECK(g2 >= g1 * (1.0 - 1e-9));
}

TEST_CASE("warm starts") {
  const Scenario s = default_scenario(8, 8);
  OptimizerConfig c;
  c.restarts = 1;
  const AscentResult diag = ascent_grouped(s, 1, c);
  const AscentResult warm = ascent_grouped(s, 4, c, {diag.phi});
  CHECK(warm.trace.final_g() >= diag.trace.final_g());
  CHECK_THROWS_AS(ascent_grouped(s, 4, c, {random_scattering(8, 8, 1)}), InvalidArgument);
}

TEST_CASE("random baseline") {
  const Scenario s = default_scenario(8, 8);
  CHECK(random_unitary_objective(s, 4, 1).g_values == random_unitary_objective(s, 4, 1).g_values);
  const RandomBaselineStats stats = random_unitary_objective(s, 4, 100);
  CHECK(ascent_grouped(s, 8, OptimizerConfig{}).trace.final_g() >= stats.max_g);
  CHECK(stats.min_g <= stats.mean_g);
  CHECK(stats.mean_g <= stats.max_g);

  Scenario edge = s;
  edge.theta = oracle::kPi / 2.0;
  for (double g : random_unitary_objective(edge, 4, 10).g_values) CHECK(g == 0.0);
}

TEST_CASE("config validation") {
  OptimizerConfig c;
  CHECK_NOTHROW(c.validate());
  c.max_iters = 0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = OptimizerConfig{};
  c.epsilon = 1.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = OptimizerConfig{};
  c.mu_init = -1.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  CHECK_THROWS_AS(ascent_grouped(default_scenario(8, 8), 3, OptimizerConfig{}), InvalidArgument);
}

}  // TEST_SUITE
