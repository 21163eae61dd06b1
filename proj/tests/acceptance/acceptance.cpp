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

// Acceptance suite: one PASS/FAIL line per criterion, INFO lines for
// reported-only numbers. Usage: bdris_acceptance [path/to/bdris]
// (without the CLI path, criterion 10 runs through the library).

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "bdris/bdris.hpp"
#include "bdris/experiment/config.hpp"
#include "bdris/experiment/runs.hpp"
#include "oracles.hpp"

using namespace bdris;
namespace ex = bdris::experiment;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed = false;
  std::string summary;
};

int g_failures = 0;

void criterion(int id, const char* title, double budget_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = budget_seconds <= 0.0 || secs < budget_seconds;
  const bool ok = o.passed && in_time;
  if (!ok) ++g_failures;
  std::string timing = std::to_string(secs).substr(0, std::to_string(secs).find('.') + 3) + " s";
  if (budget_seconds > 0.0) timing += " of " + std::to_string(static_cast<int>(budget_seconds)) + " s";
  std::printf("[%s] %2d %s: %s (%s)\n", ok ? "PASS" : "FAIL", id, title, o.summary.c_str(),
              timing.c_str());
  std::fflush(stdout);
}

void info(const std::string& text) {
  std::printf("[INFO]    %s\n", text.c_str());
  std::fflush(stdout);
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

double rel(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

// 1. analytic Euclidean gradient vs central-FD Wirtinger oracle
Outcome gradient_correctness() {
  const Eigen::Index sizes[] = {2, 4, 8};
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const std::uint64_t seed = derive_seed(0xA1, static_cast<std::uint64_t>(i));
    const Scenario s = ex::draw_scene(seed, sizes[(i / 3) % 3], sizes[i % 3]);
    const ComplexMatrix phi = haar_random_unitary(s.n_r, seed);
    const oracle::Functional g = [&s](const ComplexMatrix& m) {
      return oracle::objective(oracle::channel(s, m));
    };
    const ComplexMatrix fd = oracle::wirtinger_fd(g, phi, 1e-6);
    worst = std::max(worst, (euclidean_gradient(ChannelModel(s), phi) - fd).norm() / fd.norm());
  }
  return {worst <= 1e-6, "50 pairs, max relative Frobenius error " + sci(worst) + " <= 1e-6"};
}

// 2. unitarity and skew residuals over long ascents at N_R = 64
Outcome manifold_integrity() {
  const Scenario s = default_scenario(8, 64);
  OptimizerConfig c;
  c.max_iters = 2000;
  c.epsilon = std::numeric_limits<double>::min();
  double drift = 0.0;
  double skew = 0.0;
  std::string runs;
  for (Eigen::Index group : {64, 1}) {
    const AscentResult r = ascent(s, random_scattering(64, group, 2), c);
    for (const IterationRecord& rec : r.trace.records) {
      drift = std::max(drift, rec.unitarity_drift);
      skew = std::max(skew, rec.skew_residual);
    }
    drift = std::max(drift, unitarity_report(r.phi.matrix()).frobenius_drift);
    runs += (runs.empty() ? "" : ", ") + std::string(group == 64 ? "full " : "diagonal ") +
            std::to_string(r.trace.records.size()) + " it (" +
            std::string(to_string(r.trace.status)) + ")";
  }
  return {drift <= 1e-9 && skew <= 1e-10,
          runs + "; max drift " + sci(drift) + " <= 1e-9, max skew residual " + sci(skew) +
              " <= 1e-10"};
}

// 3. monotone ascent and stationarity at convergence
Outcome monotone_and_stationary() {
  double worst_drop = 0.0;
  double worst_ratio = 0.0;
  int converged = 0;
  int runs = 0;
  for (Eigen::Index n_r : {8, 16, 32}) {
    const Scenario s = default_scenario(8, n_r);
    for (std::uint64_t seed : {1u, 2u}) {
      OptimizerConfig c;
      c.epsilon = 1e-10;
      const AscentResult r = ascent(s, random_scattering(n_r, n_r, seed), c);
      ++runs;
      double previous = r.trace.initial_g / r.trace.objective_scale;
      for (const IterationRecord& rec : r.trace.records) {
        const double g = rec.g_value / r.trace.objective_scale;
        worst_drop = std::max(worst_drop, previous - g);
        previous = g;
      }
      if (r.trace.status == AscentStatus::converged) {
        ++converged;
        worst_ratio = std::max(worst_ratio, r.trace.final_eta / r.trace.initial_eta);
      }

      if (seed == 1) {
        const AscentResult d = ascent(s, random_scattering(n_r, n_r, seed), OptimizerConfig{});
        info("criterion 3 at the default epsilon 1e-6, N_R = " + std::to_string(n_r) + ": " +
             std::to_string(d.trace.records.size()) + " it, eta ratio " +
             sci(d.trace.final_eta / d.trace.initial_eta));
      }
    }
  }
  return {worst_drop <= 1e-12 && worst_ratio <= 1e-4 && converged > 0,
          std::to_string(runs) + " runs at epsilon 1e-10 (" + std::to_string(converged) +
              " converged); max g decrease " + sci(worst_drop) +
              " <= 1e-12, max final/initial metric " + sci(worst_ratio) + " <= 1e-4"};
}

// 4. CRB prefactor scaling for fixed Phi
Outcome scaling_laws() {
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const Scenario s = i == 0 ? default_scenario(8, 16) : ex::draw_scene(derive_seed(0xA4, i), 4, 8);
    const ScatteringMatrix phi = random_scattering(s.n_r, i % 2 == 0 ? s.n_r : 2, i);
    auto crb = [&phi](const Scenario& at) { return crb_theta(build_channel(at, phi), at); };
    const double base = crb(s);
    Scenario t = s;
    t.slots *= 2;
    worst = std::max(worst, rel(crb(t) / base, 0.5));
    t = s;
    t.noise_power *= 2.0;
    worst = std::max(worst, rel(crb(t) / base, 2.0));
    t = s;
    t.power *= 2.0;
    worst = std::max(worst, rel(crb(t) / base, 0.5));
  }
  return {worst <= 1e-12, "20 scenes, max relative deviation " + sci(worst) + " <= 1e-12"};
}

// 5. closed form vs inverted 3x3 FIM
Outcome schur_crosscheck() {
  const Eigen::Index sizes[] = {2, 4, 8};
  double worst_oracle = 0.0;
  double worst_lib = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t seed = derive_seed(0xA5, static_cast<std::uint64_t>(i));
    const Eigen::Index n_r = sizes[i % 3];
    const Scenario s = ex::draw_scene(seed, sizes[(i / 3) % 3], n_r);
    const Eigen::Index group = i % 3 == 0 ? n_r : (i % 3 == 1 ? 2 : 1);
    const ScatteringMatrix phi = random_scattering(n_r, group, seed);
    const FisherBlocks f = fim_blocks(build_channel(s, phi), s);
    const Eigen::Matrix3d fim =
        oracle::fim_from_scores(oracle::channel(s, phi.matrix()), s, oracle::Nuisance::log_polar);
    worst_oracle = std::max(worst_oracle, rel(f.crb_theta, oracle::inverse_00(fim)));
    worst_lib = std::max(worst_lib, rel(f.crb_theta, crb_by_inversion(f)));
  }
  const double worst = std::max(worst_oracle, worst_lib);
  return {worst <= 1e-9, "1000 draws, max relative gap " + sci(worst_oracle) +
                             " (score-function FIM) / " + sci(worst_lib) +
                             " (library inversion) <= 1e-9"};
}

// 6. N_R = 2 vs brute-force grid over U(2)
Outcome small_instance_optimality() {
  double worst = 0.0;
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    const Scenario s = ex::draw_scene(seed, 2, 2);
    OptimizerConfig c;
    c.restarts = 4;
    const double best = ascent_grouped(s, 2, c).trace.final_g();
    const double grid = oracle::u2_grid_max(s, oracle::kPi / 200.0);
    worst = std::max(worst, std::abs(best - grid) / grid);
  }
  return {worst <= 1e-3, "3 toy scenes, max |g_ascent - g_grid| / g_grid " + sci(worst) + " <= 1e-3"};
}

// 7. scheme ordering and CRB decreasing in N_R
Outcome scheme_ordering() {
  bool ok = true;
  double previous_crb = std::numeric_limits<double>::infinity();
  std::string summary;
  for (Eigen::Index n_r : {8, 16, 32}) {
    const Scenario s = default_scenario(8, n_r);
    const double proposed = ascent_grouped(s, n_r, OptimizerConfig{}).trace.final_g();
    const double diagonal = ascent_grouped(s, 1, OptimizerConfig{}).trace.final_g();
    const double random_max = random_unitary_objective(s, 0xA7, 100).max_g;
    const double crb = crb_from_objective(proposed, s);
    ok = ok && proposed >= diagonal && diagonal >= random_max && proposed >= random_max &&
         crb < previous_crb;
    previous_crb = crb;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%sN_R=%lld g %.3e >= %.3e >= %.3e", summary.empty() ? "" : "; ",
                  static_cast<long long>(n_r), proposed, diagonal, random_max);
    summary += buf;
  }
  return {ok, summary + "; proposed CRB strictly decreasing"};
}

// 8. optimized CRB non-increasing in group size at N_R = 16
Outcome group_nesting() {
  ex::ExperimentConfig c = ex::default_config();
  c.scenario.n_r = 16;
  c.axis = ex::SweepAxis::group_size;
  c.values = {1, 2, 4, 8, 16};
  c.schemes = {ex::Scheme::proposed};
  const std::vector<ex::SweepRow> rows = ex::run_sweep(c, 1);
  bool ok = true;
  std::string summary = "CRB over groups {1,2,4,8,16}:";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0) ok = ok && rows[i].crb_theta <= rows[i - 1].crb_theta * (1.0 + 1e-9);
    summary += " " + sci(rows[i].crb_theta);
  }

  ex::ExperimentConfig full32 = ex::default_config();
  full32.scenario.n_r = 32;
  ex::ExperimentConfig single64 = ex::default_config();
  single64.scenario.n_r = 64;
  const Scenario s32 = full32.scene();
  const Scenario s64 = single64.scene();
  const double crb32 = crb_from_objective(ascent_grouped(s32, 32, OptimizerConfig{}).trace.final_g(), s32);
  const double crb64 = crb_from_objective(ascent_grouped(s64, 1, OptimizerConfig{}).trace.final_g(), s64);
  info("criterion 8 comparison: fully-connected N_R = 32 CRB " + sci(crb32) +
       " vs single-connected N_R = 64 CRB " + sci(crb64) +
       (crb32 <= crb64 ? " (32 fully-connected is at least as good)" : " (64 single-connected is better)"));
  return {ok, summary + " non-increasing (1e-9 relative slack)"};
}

// 9. ML MSE against the CRB
Outcome crb_is_a_bound() {
  const Scenario s = default_scenario(8, 16);
  const ScatteringMatrix phi = ascent_grouped(s, 16, OptimizerConfig{}).phi;
  const double noise_dbm[] = {-120.0, -110.0, -100.0, -95.0, -90.0, -80.0, -70.0};
  double high_snr_ratio = 0.0;
  double min_ratio = std::numeric_limits<double>::infinity();
  std::string ratios;
  for (std::size_t i = 0; i < std::size(noise_dbm); ++i) {
    Scenario at = s;
    at.noise_power = ex::dbm_to_watts(noise_dbm[i]);
    const MonteCarloResult r = monte_carlo_mse(at, phi, 500, derive_seed(0xA9, i));
    if (i == 0) high_snr_ratio = r.ratio;
    min_ratio = std::min(min_ratio, r.ratio);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%.0f dBm: %.3g", ratios.empty() ? "" : ", ", noise_dbm[i], r.ratio);
    ratios += buf;
  }
  info("criterion 9 MSE/CRB by noise power (N_R = 16, 500 trials): " + ratios);
  return {high_snr_ratio >= 0.8 && high_snr_ratio <= 2.0 && min_ratio >= 0.8,
          "MSE/CRB " + sci(high_snr_ratio) + " in [0.8, 2] at -120 dBm; min over " +
              std::to_string(std::size(noise_dbm)) + " noise powers " + sci(min_ratio) + " >= 0.8"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// 10. identical verify and sweep outputs across runs
Outcome determinism(const std::string& cli) {
  if (cli.empty()) {
    ex::ExperimentConfig c = ex::default_config();
    std::ostringstream a, b;
    ex::write_sweep_csv(c, ex::run_sweep(c, 1), a);
    ex::write_sweep_csv(c, ex::run_sweep(c, 4), b);
    const bool same_verify =
        ex::verify_json(ex::run_verify(c, 1)) == ex::verify_json(ex::run_verify(c, 4));
    return {a.str() == b.str() && same_verify, "library runs, sweep.csv and verify.json identical"};
  }
  const fs::path work = fs::current_path() / "acceptance_determinism";
  fs::remove_all(work);
  auto run = [&](const std::string& sub, const std::string& out, int workers) {
    const std::string cmd = "BDRIS_WORKERS=" + std::to_string(workers) + " \"" + cli + "\" " + sub +
                            " --seed 7 --out \"" + (work / out).string() + "\" >/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  const int codes = run("verify", "v1", 1) | run("verify", "v2", 4) | run("sweep", "s1", 1) |
                    run("sweep", "s2", 4);
  const std::string v1 = slurp(work / "v1" / "verify.json");
  const std::string s1 = slurp(work / "s1" / "sweep.csv");
  const bool same = !v1.empty() && !s1.empty() && v1 == slurp(work / "v2" / "verify.json") &&
                    s1 == slurp(work / "s2" / "sweep.csv");
  return {codes == 0 && same,
          "CLI verify and sweep twice (seed 7, 1 vs 4 workers): verify.json " +
              std::to_string(v1.size()) + " B and sweep.csv " + std::to_string(s1.size()) +
              " B byte-identical"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  criterion(1, "gradient correctness", 10.0, gradient_correctness);
  criterion(2, "manifold integrity", 60.0, manifold_integrity);
  criterion(3, "monotone ascent and stationarity", 0.0, monotone_and_stationary);
  criterion(4, "CRB scaling laws", 0.0, scaling_laws);
  criterion(5, "Schur cross-check", 0.0, schur_crosscheck);
  criterion(6, "small-instance optimality", 30.0, small_instance_optimality);
  criterion(7, "scheme ordering", 0.0, scheme_ordering);
  criterion(8, "group nesting", 0.0, group_nesting);
  criterion(9, "CRB is a valid bound", 120.0, crb_is_a_bound);
  criterion(10, "determinism", 0.0, [&cli] { return determinism(cli); });
  std::printf("%d of 10 criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
