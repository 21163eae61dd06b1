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

// bdris: optimize | sweep | converge | verify
//
// Exit status: 0 success, 1 runtime or I/O failure, 2 configuration or usage
// error, 3 a verification check failed. BDRIS_WORKERS sets the thread count.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bdris/bdris.hpp"
#include "bdris/experiment/config.hpp"
#include "bdris/experiment/io.hpp"
#include "bdris/experiment/runs.hpp"

namespace fs = std::filesystem;
namespace ex = bdris::experiment;

namespace {

enum ExitCode { kOk = 0, kRuntimeError = 1, kConfigError = 2, kVerifyFailed = 3 };

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> schemes;
  std::optional<int> restarts;
  bool gnuplot = false;
  bool corrupt_gradient = false;
};

ex::ExperimentConfig resolve(const Options& o) {
  ex::ExperimentConfig c = o.config_path.empty() ? ex::default_config()
                                                 : ex::load_config(o.config_path);
  const std::string src = o.config_path.empty() ? "<command line>" : o.config_path;
  if (o.seed) c.seed = *o.seed;
  if (o.out) c.output = *o.out;
  if (o.restarts) c.restarts = *o.restarts;
  if (o.schemes) {
    c.schemes.clear();
    std::stringstream list(*o.schemes);
    for (std::string name; std::getline(list, name, ',');) {
      try {
        c.schemes.push_back(ex::parse_scheme(name));
      } catch (const bdris::InvalidArgument& e) {
        throw ex::ConfigError("--schemes", 0, e.what());
      }
    }
  }
  if (o.corrupt_gradient) c.verify.corrupt_gradient = true;
  ex::validate(c);
  return c;
}

void write_file(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.close();
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

template <typename Fn>
std::string capture(Fn&& fn) {
  std::ostringstream s;
  fn(s);
  return s.str();
}

int cmd_optimize(const ex::ExperimentConfig& c) {
  ex::ExperimentConfig proposed_only = c;
  proposed_only.schemes = {ex::Scheme::proposed};
  const ex::ConvergenceResult r = ex::run_convergence(proposed_only, ex::worker_count());
  write_file(c.output / "trace.csv",
             capture([&](std::ostream& s) { ex::write_trace_csv(proposed_only, r, s); }));
  write_file(c.output / "phi.csv", capture([&](std::ostream& s) {
               ex::CsvWriter csv(s);
               csv.row({"row", "col", "re", "im"});
               const bdris::ComplexMatrix& m = r.phi->matrix();
               for (Eigen::Index i = 0; i < m.rows(); ++i) {
                 for (Eigen::Index j = 0; j < m.cols(); ++j) {
                   csv.row({std::to_string(i), std::to_string(j), ex::format_number(m(i, j).real()),
                             ex::format_number(m(i, j).imag())});
                 }
               }
             }));
  std::printf("status=%s iterations=%zu g=%.6e crb_theta=%.6e start=%d\n",
              std::string(bdris::to_string(r.trace.status)).c_str(), r.trace.records.size(),
              r.trace.final_g(), bdris::crb_from_objective(r.trace.final_g(), r.scene),
              r.trace.start_index);
  return kOk;
}

int cmd_converge(const ex::ExperimentConfig& c, bool gnuplot) {
  const ex::ConvergenceResult r = ex::run_convergence(c, ex::worker_count());
  write_file(c.output / "trace.csv",
             capture([&](std::ostream& s) { ex::write_trace_csv(c, r, s); }));
  if (gnuplot) write_file(c.output / "plot.gp", ex::gnuplot_script(c));
  std::printf("status=%s iterations=%zu g=%.6e crb_theta=%.6e eta_ratio=%.3e\n",
              std::string(bdris::to_string(r.trace.status)).c_str(), r.trace.records.size(),
              r.trace.final_g(), bdris::crb_from_objective(r.trace.final_g(), r.scene),
              r.trace.initial_eta > 0.0 ? r.trace.final_eta / r.trace.initial_eta : 0.0);
  return kOk;
}

int cmd_sweep(const ex::ExperimentConfig& c, bool gnuplot) {
  const std::vector<ex::SweepRow> rows = ex::run_sweep(c, ex::worker_count());
  write_file(c.output / "sweep.csv",
             capture([&](std::ostream& s) { ex::write_sweep_csv(c, rows, s); }));
  write_file(c.output / "timing.csv",
             capture([&](std::ostream& s) { ex::write_timing_csv(rows, s); }));
  if (gnuplot) write_file(c.output / "plot.gp", ex::gnuplot_script(c));
  for (const ex::SweepRow& row : rows) {
    std::printf("%s=%g %-17s crb_db=%8.3f iterations=%d\n",
                std::string(ex::to_string(c.axis)).c_str(), row.axis_value,
                std::string(ex::to_string(row.scheme)).c_str(), row.crb_db, row.iterations);
  }
  return kOk;
}

int cmd_verify(const ex::ExperimentConfig& c) {
  const ex::VerifyReport report = ex::run_verify(c, ex::worker_count());
  write_file(c.output / "verify.json", ex::verify_json(report));
  for (const ex::CheckResult& check : report.checks) {
    std::printf("%s %-24s measured=%.3e %s %.3e\n", check.passed ? "PASS" : "FAIL",
                check.name.c_str(), check.measured, check.relation.c_str(), check.threshold);
  }
  return report.passed() ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cramer-Rao bound optimization for beyond-diagonal reflecting surfaces"};
  app.require_subcommand(1);
  Options opts;

  auto add_common = [&opts](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "JSON experiment config")->check(CLI::ExistingFile);
    sub->add_option("--seed", opts.seed, "Master seed");
    sub->add_option("--out", opts.out, "Output directory");
    sub->add_option("--schemes", opts.schemes,
                    "Comma list of proposed, random_unitary, diagonal_baseline");
    sub->add_option("--restarts", opts.restarts, "Random starts per optimization");
  };
  CLI::App* optimize = app.add_subcommand("optimize", "Optimize Phi at the configured scene");
  CLI::App* sweep = app.add_subcommand("sweep", "CRB versus the configured sweep axis");
  CLI::App* converge = app.add_subcommand("converge", "Per-iteration trace of the ascent");
  CLI::App* verify = app.add_subcommand("verify", "Run the oracle checks");
  for (CLI::App* sub : {optimize, sweep, converge, verify}) add_common(sub);
  for (CLI::App* sub : {sweep, converge}) {
    sub->add_flag("--gnuplot", opts.gnuplot, "Also write plot.gp");
  }
  verify->add_flag("--corrupt-gradient", opts.corrupt_gradient,
                   "Test hook: flip the analytic gradient sign (the FD check must fail)")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    const ex::ExperimentConfig config = resolve(opts);
    if (*optimize) return cmd_optimize(config);
    if (*sweep) return cmd_sweep(config, opts.gnuplot);
    if (*converge) return cmd_converge(config, opts.gnuplot);
    return cmd_verify(config);
  } catch (const ex::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const bdris::InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}
