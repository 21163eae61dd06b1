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

#include "bdris/experiment/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace bdris::experiment {

using nlohmann::json;

namespace {

// Line of every key and array element in a syntactically valid document,
// addressed as "a.b[2].c". nlohmann does not keep source positions.
class LineIndex {
 public:
  explicit LineIndex(std::string_view text) {
    struct Frame {
      bool is_array;
      std::string path;
      int index = 0;
      std::string key;
    };
    std::vector<Frame> stack;
    int line = 1;
    bool expect_value_start = true;
    auto element_path = [&]() -> std::string {
      if (stack.empty()) return "";
      const Frame& f = stack.back();
      if (f.is_array) return f.path + "[" + std::to_string(f.index) + "]";
      return f.path.empty() ? f.key : f.path + "." + f.key;
    };
    auto note_value = [&]() {
      if (!stack.empty() && stack.back().is_array && expect_value_start) {
        lines_.emplace(element_path(), line);
      }
      expect_value_start = false;
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
      const char c = text[i];
      if (c == '\n') {
        ++line;
      } else if (c == '"') {
        std::string s;
        for (++i; i < text.size() && text[i] != '"'; ++i) {
          if (text[i] == '\\' && i + 1 < text.size()) ++i;
          s.push_back(text[i]);
        }
        std::size_t j = i + 1;
        while (j < text.size() && (text[j] == ' ' || text[j] == '\t' || text[j] == '\r' ||
                                   text[j] == '\n')) {
          ++j;
        }
        if (!stack.empty() && !stack.back().is_array && j < text.size() && text[j] == ':') {
          stack.back().key = s;
          lines_.emplace(element_path(), line);
          expect_value_start = true;
        } else {
          note_value();
        }
      } else if (c == '{' || c == '[') {
        std::string path = element_path();
        note_value();
        stack.push_back({c == '[', std::move(path), 0, {}});
        expect_value_start = true;
      } else if (c == '}' || c == ']') {
        if (!stack.empty()) stack.pop_back();
        expect_value_start = false;
      } else if (c == ',') {
        if (!stack.empty() && stack.back().is_array) ++stack.back().index;
        expect_value_start = true;
      } else if (c != ' ' && c != '\t' && c != '\r' && c != ':') {
        note_value();
      }
    }
  }

  /// Line of `path`, falling back to its closest recorded ancestor.
  int line_of(std::string path) const {
    while (!path.empty()) {
      if (auto it = lines_.find(path); it != lines_.end()) return it->second;
      const auto cut = path.find_last_of(".[");
      if (cut == std::string::npos) break;
      path.resize(cut);
    }
    return 1;
  }

 private:
  std::map<std::string, int> lines_;
};

class Reader {
 public:
  Reader(const LineIndex& index, std::string source) : index_(index), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& message) const {
    throw ConfigError(source_, index_.line_of(path), path + ": " + message);
  }

  static std::string join(const std::string& parent, const std::string& key) {
    return parent.empty() ? key : parent + "." + key;
  }

  void check_keys(const json& object, const std::string& path,
                  std::initializer_list<std::string_view> allowed) const {
    if (!object.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : object.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        fail(join(path, key), "unknown key");
      }
    }
  }

  const json* find(const json& object, const std::string& key) const {
    const auto it = object.find(key);
    return it == object.end() ? nullptr : &*it;
  }

  double number(const json& value, const std::string& path) const {
    if (!value.is_number()) fail(path, "expected a number");
    const double x = value.get<double>();
    if (!std::isfinite(x)) fail(path, "must be finite");
    return x;
  }

  std::int64_t integer(const json& value, const std::string& path) const {
    if (value.is_number_integer()) return value.get<std::int64_t>();
    if (value.is_number_float()) {
      const double x = value.get<double>();
      if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9.0e15) {
        return static_cast<std::int64_t>(x);
      }
    }
    fail(path, "expected an integer");
  }

  std::int64_t positive(const json& value, const std::string& path) const {
    const std::int64_t n = integer(value, path);
    if (n < 1) fail(path, "must be >= 1");
    return n;
  }

  std::uint64_t seed(const json& value, const std::string& path) const {
    if (value.is_number_unsigned()) return value.get<std::uint64_t>();
    const std::int64_t n = integer(value, path);
    if (n < 0) fail(path, "must be >= 0");
    return static_cast<std::uint64_t>(n);
  }

  bool boolean(const json& value, const std::string& path) const {
    if (!value.is_boolean()) fail(path, "expected true or false");
    return value.get<bool>();
  }

  std::string string(const json& value, const std::string& path) const {
    if (!value.is_string()) fail(path, "expected a string");
    return value.get<std::string>();
  }

  Position2 position(const json& value, const std::string& path) const {
    if (!value.is_array() || value.size() != 2) fail(path, "expected [x, y]");
    return {number(value[0], path + "[0]"), number(value[1], path + "[1]")};
  }

  std::vector<double> numbers(const json& value, const std::string& path) const {
    if (!value.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < value.size(); ++i) {
      out.push_back(number(value[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
  }

  int line_of(const std::string& path) const { return index_.line_of(path); }
  const std::string& source() const { return source_; }

 private:
  const LineIndex& index_;
  std::string source_;
};

SweepAxis parse_axis(std::string_view name) {
  for (SweepAxis axis : {SweepAxis::iterations, SweepAxis::group_size, SweepAxis::noise_power,
                         SweepAxis::slots, SweepAxis::n_r, SweepAxis::ris_x_position}) {
    if (to_string(axis) == name) return axis;
  }
  throw InvalidArgument("unknown sweep axis '" + std::string(name) + "'");
}

void read_scenario(const Reader& r, const json& node, ScenarioConfig& s) {
  const std::string base = "scenario";
  r.check_keys(node, base,
               {"n_bs", "n_r", "group_size", "slots", "noise_power_dbm", "power_dbm",
                "wavelength", "d_bs", "d_ris", "pathloss_exponent", "rician_k", "channel_seed",
                "reference_gain", "alpha_phase_seed", "target", "ris", "bs"});
  auto path = [&](const char* key) { return Reader::join(base, key); };
  if (auto* v = r.find(node, "n_bs")) s.n_bs = r.positive(*v, path("n_bs"));
  if (auto* v = r.find(node, "n_r")) s.n_r = r.positive(*v, path("n_r"));
  if (auto* v = r.find(node, "group_size")) {
    if (v->is_null()) {
      s.group_size.reset();
    } else {
      s.group_size = r.positive(*v, path("group_size"));
    }
  }
  if (auto* v = r.find(node, "slots")) s.slots = r.positive(*v, path("slots"));
  if (auto* v = r.find(node, "noise_power_dbm")) {
    s.noise_power_dbm = r.number(*v, path("noise_power_dbm"));
  }
  if (auto* v = r.find(node, "power_dbm")) s.power_dbm = r.number(*v, path("power_dbm"));
  if (auto* v = r.find(node, "wavelength")) s.wavelength = r.number(*v, path("wavelength"));
  if (auto* v = r.find(node, "d_bs")) s.d_bs = r.number(*v, path("d_bs"));
  if (auto* v = r.find(node, "d_ris")) s.d_ris = r.number(*v, path("d_ris"));
  if (auto* v = r.find(node, "pathloss_exponent")) {
    s.pathloss_exponent = r.number(*v, path("pathloss_exponent"));
  }
  if (auto* v = r.find(node, "rician_k")) {
    if (v->is_null() || (v->is_string() && v->get<std::string>() == "inf")) {
      s.rician_k = kLineOfSightOnly;
    } else {
      s.rician_k = r.number(*v, path("rician_k"));
    }
  }
  if (auto* v = r.find(node, "channel_seed")) s.channel_seed = r.seed(*v, path("channel_seed"));
  if (auto* v = r.find(node, "reference_gain")) {
    if (v->is_null()) {
      s.reference_gain.reset();
    } else {
      s.reference_gain = r.number(*v, path("reference_gain"));
    }
  }
  if (auto* v = r.find(node, "alpha_phase_seed")) {
    if (v->is_null()) {
      s.alpha_phase_seed.reset();
    } else {
      s.alpha_phase_seed = r.seed(*v, path("alpha_phase_seed"));
    }
  }
  if (auto* v = r.find(node, "target")) s.positions.target = r.position(*v, path("target"));
  if (auto* v = r.find(node, "ris")) s.positions.ris = r.position(*v, path("ris"));
  if (auto* v = r.find(node, "bs")) s.positions.bs = r.position(*v, path("bs"));
}

void read_optimizer(const Reader& r, const json& node, OptimizerConfig& o) {
  const std::string base = "optimizer";
  r.check_keys(node, base, {"mu_init", "epsilon", "max_iters", "max_halvings", "max_doublings"});
  auto path = [&](const char* key) { return Reader::join(base, key); };
  if (auto* v = r.find(node, "mu_init")) o.mu_init = r.number(*v, path("mu_init"));
  if (auto* v = r.find(node, "epsilon")) o.epsilon = r.number(*v, path("epsilon"));
  if (auto* v = r.find(node, "max_iters")) {
    o.max_iters = static_cast<int>(r.integer(*v, path("max_iters")));
    if (o.max_iters < 1) r.fail(path("max_iters"), "must be >= 1 (zero-iteration runs are rejected)");
  }
  if (auto* v = r.find(node, "max_halvings")) {
    o.max_halvings = static_cast<int>(r.positive(*v, path("max_halvings")));
  }
  if (auto* v = r.find(node, "max_doublings")) {
    o.max_doublings = static_cast<int>(r.positive(*v, path("max_doublings")));
  }
}

void read_verify(const Reader& r, const json& node, VerifyConfig& c) {
  const std::string base = "verify";
  r.check_keys(node, base,
               {"gradient_pairs", "fd_step", "gradient_tolerance", "schur_draws",
                "schur_tolerance", "scaling_tolerance", "integrity_n_r", "integrity_iters",
                "mc_n_r", "mc_trials", "mc_noise_power_dbm", "mse_band", "corrupt_gradient"});
  auto path = [&](const char* key) { return Reader::join(base, key); };
  auto count = [&](const char* key, auto& field) {
    if (auto* v = r.find(node, key)) {
      field = static_cast<std::remove_reference_t<decltype(field)>>(r.positive(*v, path(key)));
    }
  };
  auto real = [&](const char* key, double& field) {
    if (auto* v = r.find(node, key)) field = r.number(*v, path(key));
  };
  count("gradient_pairs", c.gradient_pairs);
  real("fd_step", c.fd_step);
  real("gradient_tolerance", c.gradient_tolerance);
  count("schur_draws", c.schur_draws);
  real("schur_tolerance", c.schur_tolerance);
  real("scaling_tolerance", c.scaling_tolerance);
  count("integrity_n_r", c.integrity_n_r);
  count("integrity_iters", c.integrity_iters);
  count("mc_n_r", c.mc_n_r);
  count("mc_trials", c.mc_trials);
  if (auto* v = r.find(node, "mc_noise_power_dbm")) {
    c.mc_noise_power_dbm = r.numbers(*v, path("mc_noise_power_dbm"));
  }
  if (auto* v = r.find(node, "mse_band")) {
    const std::vector<double> band = r.numbers(*v, path("mse_band"));
    if (band.size() != 2) r.fail(path("mse_band"), "expected [low, high]");
    c.mse_band_low = band[0];
    c.mse_band_high = band[1];
  }
  if (auto* v = r.find(node, "corrupt_gradient")) {
    c.corrupt_gradient = r.boolean(*v, path("corrupt_gradient"));
  }
}

// Semantic checks shared by parse_config and validate(); `fail` maps a key
// path to an exception.
template <typename Fail>
void check(const ExperimentConfig& c, const Fail& fail) {
  const ScenarioConfig& s = c.scenario;
  if (s.group_size && s.n_r % *s.group_size != 0) {
    fail("scenario.group_size", "must divide n_r = " + std::to_string(s.n_r));
  }
  if (!(s.wavelength > 0.0)) fail("scenario.wavelength", "must be > 0");
  if (!(s.d_bs > 0.0)) fail("scenario.d_bs", "must be > 0");
  if (!(s.d_ris > 0.0)) fail("scenario.d_ris", "must be > 0");
  if (!(s.pathloss_exponent > 0.0)) fail("scenario.pathloss_exponent", "must be > 0");
  if (!(s.rician_k >= 0.0)) fail("scenario.rician_k", "must be >= 0");
  if (s.reference_gain && !(*s.reference_gain > 0.0)) fail("scenario.reference_gain", "must be > 0");

  const OptimizerConfig& o = c.optimizer;
  if (!(o.mu_init > 0.0)) fail("optimizer.mu_init", "must be > 0");
  if (!(o.epsilon > 0.0 && o.epsilon < 1.0)) fail("optimizer.epsilon", "must lie in (0, 1)");
  if (o.max_iters < 1) fail("optimizer.max_iters", "must be >= 1 (zero-iteration runs are rejected)");

  if (c.values.empty()) fail("sweep.values", "must be non-empty");
  for (std::size_t i = 1; i < c.values.size(); ++i) {
    if (!(c.values[i - 1] < c.values[i])) {
      fail("sweep.values[" + std::to_string(i) + "]", "values must be strictly increasing");
    }
  }
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    const std::string at = "sweep.values[" + std::to_string(i) + "]";
    const double v = c.values[i];
    const bool integral = v == std::floor(v);
    switch (c.axis) {
      case SweepAxis::iterations:
      case SweepAxis::slots:
      case SweepAxis::n_r:
        if (!integral || v < 1.0) fail(at, "must be a positive integer");
        if (c.axis == SweepAxis::n_r && s.group_size &&
            static_cast<Eigen::Index>(v) % *s.group_size != 0) {
          fail(at, "scenario.group_size does not divide this n_r");
        }
        break;
      case SweepAxis::group_size:
        if (!integral || v < 1.0 || s.n_r % static_cast<Eigen::Index>(v) != 0) {
          fail(at, "group size must be a positive divisor of n_r = " + std::to_string(s.n_r));
        }
        break;
      case SweepAxis::noise_power:
      case SweepAxis::ris_x_position:
        break;
    }
  }
  if (c.schemes.empty()) fail("schemes", "must be non-empty");
  std::set<Scheme> seen;
  for (std::size_t i = 0; i < c.schemes.size(); ++i) {
    if (!seen.insert(c.schemes[i]).second) {
      fail("schemes[" + std::to_string(i) + "]", "duplicate scheme");
    }
  }
  if (c.restarts < 1) fail("restarts", "must be >= 1");
  if (c.random_samples < 1) fail("random_samples", "must be >= 1");
  if (c.output.empty()) fail("output", "must be non-empty");

  const VerifyConfig& v = c.verify;
  if (!(v.fd_step >= 1e-8 && v.fd_step <= 1e-4)) fail("verify.fd_step", "must lie in [1e-8, 1e-4]");
  if (v.mc_noise_power_dbm.empty()) fail("verify.mc_noise_power_dbm", "must be non-empty");
  if (!(v.mse_band_low > 0.0 && v.mse_band_low < v.mse_band_high)) {
    fail("verify.mse_band", "expected 0 < low < high");
  }

  // Anything the core still rejects, reported against the scenario block.
  try {
    c.scene();
  } catch (const InvalidArgument& e) {
    fail("scenario", e.what());
  }
}

}  // namespace

ConfigError::ConfigError(std::string source, int line, const std::string& message)
    : Error(source + ":" + std::to_string(line) + ": " + message),
      source_(std::move(source)),
      line_(line) {}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::iterations: return "iterations";
    case SweepAxis::group_size: return "group_size";
    case SweepAxis::noise_power: return "noise_power";
    case SweepAxis::slots: return "slots";
    case SweepAxis::n_r: return "n_r";
    case SweepAxis::ris_x_position: return "ris_x_position";
  }
  return "unknown";
}

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::proposed: return "proposed";
    case Scheme::random_unitary: return "random_unitary";
    case Scheme::diagonal_baseline: return "diagonal_baseline";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  for (Scheme s : {Scheme::proposed, Scheme::random_unitary, Scheme::diagonal_baseline}) {
    if (to_string(s) == name) return s;
  }
  throw InvalidArgument("unknown scheme '" + std::string(name) +
                        "' (expected proposed, random_unitary or diagonal_baseline)");
}

double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }

bool ExperimentConfig::has_scheme(Scheme scheme) const {
  return std::find(schemes.begin(), schemes.end(), scheme) != schemes.end();
}

OptimizerConfig ExperimentConfig::optimizer_config() const {
  OptimizerConfig o = optimizer;
  o.restarts = restarts;
  o.seed = seed;
  return o;
}

Scenario ExperimentConfig::scene() const {
  Scenario base;
  base.n_bs = scenario.n_bs;
  base.n_r = scenario.n_r;
  base.d_bs = scenario.d_bs;
  base.d_ris = scenario.d_ris;
  base.wavelength = scenario.wavelength;
  base.power = dbm_to_watts(scenario.power_dbm);
  base.noise_power = dbm_to_watts(scenario.noise_power_dbm);
  base.slots = scenario.slots;
  base.pathloss_exponent = scenario.pathloss_exponent;
  base.rician_k = scenario.rician_k;
  base.channel_seed = scenario.channel_seed;
  GeometryOptions options;
  options.reference_gain = scenario.reference_gain;
  options.alpha_phase_seed = scenario.alpha_phase_seed;
  const ScenePositions& p = scenario.positions;
  return geometry_to_scene(p.target, p.ris, p.bs, base, options);
}

Scenario ExperimentConfig::scene_at(double value) const {
  ExperimentConfig c = *this;
  switch (axis) {
    case SweepAxis::iterations:
    case SweepAxis::group_size:
      break;
    case SweepAxis::noise_power:
      c.scenario.noise_power_dbm = value;
      break;
    case SweepAxis::slots:
      c.scenario.slots = static_cast<Eigen::Index>(value);
      break;
    case SweepAxis::n_r:
      c.scenario.n_r = static_cast<Eigen::Index>(value);
      break;
    case SweepAxis::ris_x_position:
      c.scenario.positions.ris.x = value;
      break;
  }
  return c.scene();
}

Eigen::Index ExperimentConfig::group_size_at(double value) const {
  if (axis == SweepAxis::group_size) return static_cast<Eigen::Index>(value);
  const Eigen::Index n_r =
      axis == SweepAxis::n_r ? static_cast<Eigen::Index>(value) : scenario.n_r;
  return scenario.group_size.value_or(n_r);
}

ExperimentConfig default_config() { return ExperimentConfig{}; }

ExperimentConfig parse_config(std::string_view text, std::string_view source) {
  const std::string name(source);
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + end, '\n'));
    throw ConfigError(name, line, std::string("malformed JSON: ") + e.what());
  }

  const LineIndex index(text);
  const Reader r(index, name);
  r.check_keys(doc, "",
               {"scenario", "optimizer", "sweep", "schemes", "restarts", "seed",
                "random_samples", "output", "verify"});

  ExperimentConfig c;
  c.source = name;
  if (auto* v = r.find(doc, "scenario")) read_scenario(r, *v, c.scenario);
  if (auto* v = r.find(doc, "optimizer")) read_optimizer(r, *v, c.optimizer);
  if (auto* v = r.find(doc, "sweep")) {
    r.check_keys(*v, "sweep", {"axis", "values"});
    if (auto* a = r.find(*v, "axis")) {
      try {
        c.axis = parse_axis(r.string(*a, "sweep.axis"));
      } catch (const InvalidArgument& e) {
        r.fail("sweep.axis", e.what());
      }
    }
    if (auto* vals = r.find(*v, "values")) c.values = r.numbers(*vals, "sweep.values");
  }
  if (auto* v = r.find(doc, "schemes")) {
    if (!v->is_array()) r.fail("schemes", "expected an array of scheme names");
    c.schemes.clear();
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::string at = "schemes[" + std::to_string(i) + "]";
      try {
        c.schemes.push_back(parse_scheme(r.string((*v)[i], at)));
      } catch (const InvalidArgument& e) {
        r.fail(at, e.what());
      }
    }
  }
  if (auto* v = r.find(doc, "restarts")) c.restarts = static_cast<int>(r.positive(*v, "restarts"));
  if (auto* v = r.find(doc, "seed")) c.seed = r.seed(*v, "seed");
  if (auto* v = r.find(doc, "random_samples")) {
    c.random_samples = static_cast<int>(r.positive(*v, "random_samples"));
  }
  if (auto* v = r.find(doc, "output")) c.output = r.string(*v, "output");
  if (auto* v = r.find(doc, "verify")) read_verify(r, *v, c.verify);

  check(c, [&r](const std::string& path, const std::string& message) { r.fail(path, message); });
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), 0, "cannot open config file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.string());
}

void validate(const ExperimentConfig& config) {
  check(config, [&config](const std::string& path, const std::string& message) {
    throw ConfigError(config.source, 0, path + ": " + message);
  });
}

}  // namespace bdris::experiment
