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


#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "bdris/experiment/io.hpp"
#include "bdris/experiment/runs.hpp"
#include "bdris/fisher.hpp"
#include "bdris/random.hpp"

namespace bdris::experiment {

namespace {

// Child seed of the random-unitary baseline, so its draws never coincide with
// the optimizer's restart seeds.
constexpr std::uint64_t kRandomBaselineTag = 0x72616e64;

double crb_db(double crb) { return std::isinf(crb) ? crb : 10.0 * std::log10(crb); }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double mean_crb(const std::vector<double>& g_values, const Scenario& scene) {
  double sum = 0.0;
  for (double g : g_values) sum += crb_from_objective(g, scene);
  return sum / static_cast<double>(g_values.size());
}

struct Evaluation {
  double g = 0.0;
  int iterations = 0;
  std::vector<double> random_g;  // random_unitary only
  std::optional<ScatteringMatrix> phi;
};

Evaluation evaluate(const ExperimentConfig& config, Scheme scheme, const Scenario& scene,
                    Eigen::Index group, const std::vector<ScatteringMatrix>& warm = {}) {
  Evaluation e;
  switch (scheme) {
    case Scheme::proposed:
    case Scheme::diagonal_baseline: {
      AscentResult r = ascent_grouped(scene, scheme == Scheme::proposed ? group : 1,
                                      config.optimizer_config(), warm);
      e.g = r.trace.final_g();
      e.iterations = static_cast<int>(r.trace.records.size());
      e.phi = std::move(r.phi);
      break;
    }
    case Scheme::random_unitary: {
      RandomBaselineStats stats = random_unitary_objective(
          scene, derive_seed(config.seed, kRandomBaselineTag), config.random_samples);
      e.g = stats.mean_g;
      e.random_g = std::move(stats.g_values);
      break;
    }
  }
  return e;
}

SweepRow make_row(double value, Scheme scheme, const Evaluation& e, const Scenario& scene,
                  double wall) {
  SweepRow row;
  row.axis_value = value;
  row.scheme = scheme;
  row.g_value = e.g;
  row.crb_theta = scheme == Scheme::random_unitary ? mean_crb(e.random_g, scene)
                                                   : crb_from_objective(e.g, scene);
  row.crb_db = crb_db(row.crb_theta);
  row.iterations = e.iterations;
  row.wall_seconds = wall;
  return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const ExperimentConfig& config, std::size_t workers) {
  validate(config);
  if (config.axis == SweepAxis::iterations) {
    throw ConfigError(config.source, 0,
                      "sweep.axis: the iterations axis is produced by the converge subcommand");
  }
  const std::size_t n_values = config.values.size();
  const std::size_t n_schemes = config.schemes.size();
  std::vector<SweepRow> rows(n_values * n_schemes);
  auto slot = [&](std::size_t v, std::size_t s) -> SweepRow& { return rows[v * n_schemes + s]; };

  std::vector<std::function<void()>> tasks;
  const bool frozen = config.axis == SweepAxis::slots || config.axis == SweepAxis::noise_power;
  for (std::size_t s = 0; s < n_schemes; ++s) {
    const Scheme scheme = config.schemes[s];
    if (frozen || (config.axis == SweepAxis::group_size && scheme != Scheme::proposed)) {
      // One optimization, evaluated at every axis value.
      tasks.emplace_back([&, s, scheme] {
        const auto start = std::chrono::steady_clock::now();
        const Scenario base = config.scene();
        const Evaluation e = evaluate(config, scheme, base, config.group_size_at(config.values[0]));
        const double wall = seconds_since(start);
        for (std::size_t v = 0; v < n_values; ++v) {
          slot(v, s) = make_row(config.values[v], scheme, e, config.scene_at(config.values[v]), wall);
        }
      });
    } else if (config.axis == SweepAxis::group_size) {
      // Sequential continuation: a smaller group's optimum is feasible for
      // every multiple of that group size.
      tasks.emplace_back([&, s, scheme] {
        const Scenario scene = config.scene();
        std::optional<ScatteringMatrix> previous;
        for (std::size_t v = 0; v < n_values; ++v) {
          const auto start = std::chrono::steady_clock::now();
          const Eigen::Index group = config.group_size_at(config.values[v]);
          std::vector<ScatteringMatrix> warm;
          if (previous && group % previous->group_size() == 0) warm.push_back(*previous);
          Evaluation e = evaluate(config, scheme, scene, group, warm);
          slot(v, s) = make_row(config.values[v], scheme, e, scene, seconds_since(start));
          previous = std::move(e.phi);
        }
      });
    } else {
      for (std::size_t v = 0; v < n_values; ++v) {
        tasks.emplace_back([&, v, s, scheme] {
          const auto start = std::chrono::steady_clock::now();
          const double value = config.values[v];
          const Scenario scene = config.scene_at(value);
          const Evaluation e = evaluate(config, scheme, scene, config.group_size_at(value));
          slot(v, s) = make_row(value, scheme, e, scene, seconds_since(start));
        });
      }
    }
  }
  parallel_for(tasks.size(), workers, [&](std::size_t i) { tasks[i](); });
  return rows;
}

void write_sweep_csv(const ExperimentConfig& config, const std::vector<SweepRow>& rows,
                     std::ostream& out) {
  CsvWriter csv(out);
  csv.row({"axis", "axis_value", "scheme", "g_value", "crb_theta", "crb_db", "iterations"});
  const std::string axis(to_string(config.axis));
  for (const SweepRow& r : rows) {
    csv.row({axis, format_number(r.axis_value), std::string(to_string(r.scheme)),
             format_number(r.g_value), format_number(r.crb_theta), format_number(r.crb_db),
             std::to_string(r.iterations)});
  }
}

void write_timing_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  CsvWriter csv(out);
  csv.row({"axis_value", "scheme", "wall_seconds"});
  for (const SweepRow& r : rows) {
    csv.row({format_number(r.axis_value), std::string(to_string(r.scheme)),
             format_number(r.wall_seconds)});
  }
}

ConvergenceResult run_convergence(const ExperimentConfig& config, std::size_t workers) {
  validate(config);
  if (!config.has_scheme(Scheme::proposed)) {
    throw ConfigError(config.source, 0, "schemes: converge needs the proposed scheme");
  }
  ConvergenceResult result;
  result.scene = config.scene();
  const Eigen::Index group = config.scenario.group_size.value_or(config.scenario.n_r);
  const OptimizerConfig opt = config.optimizer_config();
  std::vector<std::function<void()>> tasks;
  tasks.emplace_back([&] {
    AscentResult best = ascent_grouped(result.scene, group, opt);
    result.trace = std::move(best.trace);
    result.phi = std::move(best.phi);
  });
  if (config.has_scheme(Scheme::diagonal_baseline)) {
    tasks.emplace_back([&] {
      result.diagonal_g = ascent_grouped(result.scene, 1, opt).trace.final_g();
      result.diagonal_crb = crb_from_objective(result.diagonal_g, result.scene);
    });
  }
  if (config.has_scheme(Scheme::random_unitary)) {
    tasks.emplace_back([&] {
      const Evaluation e = evaluate(config, Scheme::random_unitary, result.scene, group);
      result.random_unitary_g = e.g;
      result.random_unitary_crb = mean_crb(e.random_g, result.scene);
    });
  }
  parallel_for(tasks.size(), workers, [&](std::size_t i) { tasks[i](); });
  return result;
}

void write_trace_csv(const ExperimentConfig& config, const ConvergenceResult& result,
                     std::ostream& out) {
  CsvWriter csv(out);
  csv.row({"scheme", "iteration", "g_value", "crb_theta", "crb_db", "mu", "eta"});
  const OptimizerTrace& trace = result.trace;
  const std::size_t last = trace.records.size();
  const std::string proposed(to_string(Scheme::proposed));
  const double crb0 = crb_from_objective(trace.initial_g, result.scene);
  csv.row({proposed, "0", format_number(trace.initial_g), format_number(crb0),
           format_number(crb_db(crb0)), "", format_number(trace.initial_eta)});
  for (std::size_t k = 1; k <= last; ++k) {
    const IterationRecord& rec = trace.records[k - 1];
    // eta at the iterate this row describes
    const double eta = k < last ? trace.records[k].eta : trace.final_eta;
    csv.row({proposed, std::to_string(k), format_number(rec.g_value), format_number(rec.crb_theta),
             format_number(crb_db(rec.crb_theta)), format_number(rec.mu), format_number(eta)});
  }
  auto level = [&](Scheme scheme, double g, double crb) {
    if (!config.has_scheme(scheme)) return;
    const std::string name(to_string(scheme));
    for (std::size_t k = 0; k <= last; ++k) {
      csv.row({name, std::to_string(k), format_number(g), format_number(crb),
               format_number(crb_db(crb)), "", ""});
    }
  };
  level(Scheme::random_unitary, result.random_unitary_g, result.random_unitary_crb);
  level(Scheme::diagonal_baseline, result.diagonal_g, result.diagonal_crb);
}

std::string gnuplot_script(const ExperimentConfig& config) {
  std::ostringstream s;
  s << "# gnuplot -persist plot.gp\n"
    << "set datafile separator ','\n"
    << "set key autotitle columnhead\n"
    << "set ylabel 'CRB (dB rad^2)'\n"
    << "set multiplot layout 1,2\n"
    << "set xlabel 'iteration'\n"
    << "plot for [s in \"proposed random_unitary diagonal_baseline\"] 'trace.csv' "
       "using 2:(stringcolumn(1) eq s ? $5 : NaN) with lines title s\n"
    << "set xlabel '" << to_string(config.axis) << "'\n"
    << "plot for [s in \"proposed random_unitary diagonal_baseline\"] 'sweep.csv' "
       "using 2:(stringcolumn(3) eq s ? $6 : NaN) with linespoints title s\n"
    << "unset multiplot\n";
  return s.str();
}

}  // namespace bdris::experiment
