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

#include <limits>

#include <benchmark/benchmark.h>

#include "bdris/bdris.hpp"

namespace {

using namespace bdris;

ComplexMatrix skew_direction(Eigen::Index n) {
  const ComplexMatrix a = haar_random_unitary(n, 3);
  return 0.5 * (a - a.adjoint());
}

void BM_ExpmSpectral(benchmark::State& state) {
  const ComplexMatrix s = skew_direction(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(expm_skew(s, 0.1));
}
BENCHMARK(BM_ExpmSpectral)->RangeMultiplier(2)->Range(8, 64);

void BM_ExpmPade(benchmark::State& state) {
  const ComplexMatrix s = 0.1 * skew_direction(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(expm_pade(s));
}
BENCHMARK(BM_ExpmPade)->RangeMultiplier(2)->Range(8, 64);

// One factorization, many step sizes: what the step search does.
void BM_ExpmSpectralReuse(benchmark::State& state) {
  const SkewSpectrum spectrum = SkewSpectrum::factor(skew_direction(state.range(0)));
  double mu = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectrum.exp(mu));
    mu *= 1.0001;
  }
}
BENCHMARK(BM_ExpmSpectralReuse)->RangeMultiplier(2)->Range(8, 64);

void BM_EuclideanGradient(benchmark::State& state) {
  const Scenario s = default_scenario(8, state.range(0));
  const ChannelModel model(s);
  const ComplexMatrix phi = haar_random_unitary(s.n_r, 5);
  for (auto _ : state) benchmark::DoNotOptimize(euclidean_gradient(model, phi));
}
BENCHMARK(BM_EuclideanGradient)->RangeMultiplier(2)->Range(8, 64);

void BM_AscentIterations(benchmark::State& state) {
  const Scenario s = default_scenario(8, state.range(0));
  OptimizerConfig c;
  c.max_iters = 50;
  c.epsilon = std::numeric_limits<double>::min();
  const ScatteringMatrix phi0 = random_scattering(s.n_r, s.n_r, 7);
  for (auto _ : state) benchmark::DoNotOptimize(ascent(s, phi0, c).trace.final_g());
  state.SetItemsProcessed(state.iterations() * c.max_iters);
}
BENCHMARK(BM_AscentIterations)->RangeMultiplier(2)->Range(8, 64)->Unit(benchmark::kMillisecond);

void BM_MlEstimate(benchmark::State& state) {
  const Scenario s = default_scenario(8, state.range(0));
  const ScatteringMatrix phi = random_scattering(s.n_r, s.n_r, 9);
  const MlEstimator est(s, phi);
  const ObservationBlock obs = synthesize(s, phi, 11);
  for (auto _ : state) benchmark::DoNotOptimize(est.estimate(obs).theta_hat);
}
BENCHMARK(BM_MlEstimate)->Arg(16)->Arg(64)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
