// Copyright 2026 The bbcstl Authors
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

#include <chrono>
#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bbcstl/abstraction.hpp"
#include "bbcstl/equiv.hpp"
#include "bbcstl/error.hpp"
#include "bbcstl/formula.hpp"
#include "bbcstl/plant.hpp"
#include "bbcstl/process_adapter.hpp"
#include "bbcstl/sul.hpp"
#include "bbcstl/toml_lite.hpp"

namespace bbcstl {

struct SystemConfig {
  enum class Kind { Builtin, External };
  Kind kind = Kind::Builtin;
  PlantParams plant;
  std::vector<std::string> command;
  std::chrono::milliseconds step_timeout{30'000};
};

/// Everything one BBC run needs.
struct RunConfig {
  SystemConfig system;
  VariableDecls inputs{{"throttle", false}, {"brake", false}};
  VariableDecls outputs{{"velocity", false}, {"rotation", false}, {"gear", true}};
  std::vector<InputMapper::Entry> symbols;
  std::vector<std::string> specs;

  StrategyConfig search;  // search.word_length is the input length L
  std::optional<std::size_t> horizon;  // defaults to L
  std::size_t max_runs = 2000;
  double timeout_seconds = 600.0;
  std::optional<std::uint64_t> seed;
  double equality_margin = 1.0;
  std::size_t state_cap = 100'000;
  std::string output_directory;

  std::size_t word_length() const { return search.word_length; }
  std::size_t check_horizon() const { return horizon.value_or(search.word_length); }

  std::vector<std::string> input_names() const {
    std::vector<std::string> out;
    for (const auto& d : inputs) out.push_back(d.name);
    return out;
  }
  std::vector<std::string> output_names() const {
    std::vector<std::string> out;
    for (const auto& d : outputs) out.push_back(d.name);
    return out;
  }

  InputMapper input_mapper() const { return InputMapper(input_names(), symbols); }

  std::unique_ptr<SystemAdapter> make_adapter() const {
    if (system.kind == SystemConfig::Kind::Builtin) {
      return std::make_unique<BuiltinPlant>(system.plant, input_names(), output_names());
    }
    return std::make_unique<ProcessAdapter>(system.command, input_names(), output_names(), system.step_timeout);
  }

  void validate() const {
    if (specs.empty()) throw ConfigError("at least one specification is required");
    if (symbols.empty()) throw ConfigError("the input mapper needs at least one symbol");
    if (system.kind == SystemConfig::Kind::External && system.command.empty()) {
      throw ConfigError("external system needs a command");
    }
    search.validate();
    if (check_horizon() < 1) throw ConfigError("horizon must be at least 1");
    input_mapper();
  }
};

/// Four-symbol alphabet over throttle in {0, 100} and brake in {0, 325}.
inline std::vector<InputMapper::Entry> default_at_symbols() {
  return {{"idle", {0.0, 0.0}}, {"brake", {0.0, 325.0}}, {"accel", {100.0, 0.0}}, {"both", {100.0, 325.0}}};
}

namespace detail {

inline double number(const toml::Value& v, const std::string& key) {
  if (v.type != toml::Value::Type::Number) throw ConfigError("'" + key + "' must be a number");
  return v.num;
}

inline std::size_t count(const toml::Value& v, const std::string& key) {
  double d = number(v, key);
  if (d < 0 || !v.is_integer()) throw ConfigError("'" + key + "' must be a non-negative integer");
  return static_cast<std::size_t>(d);
}

inline std::string string(const toml::Value& v, const std::string& key) {
  if (v.type != toml::Value::Type::String) throw ConfigError("'" + key + "' must be a string");
  return v.str;
}

inline bool boolean(const toml::Value& v, const std::string& key) {
  if (v.type != toml::Value::Type::Bool) throw ConfigError("'" + key + "' must be a boolean");
  return v.boolean;
}

inline std::vector<std::string> strings(const toml::Value& v, const std::string& key) {
  if (v.type != toml::Value::Type::Array) throw ConfigError("'" + key + "' must be an array of strings");
  std::vector<std::string> out;
  for (const auto& item : v.items) out.push_back(string(item, key));
  return out;
}

inline std::vector<double> numbers(const toml::Value& v, const std::string& key) {
  if (v.type != toml::Value::Type::Array) throw ConfigError("'" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& item : v.items) out.push_back(number(item, key));
  return out;
}

template <std::size_t N>
std::array<double, N> fixed(const toml::Value& v, const std::string& key) {
  auto xs = numbers(v, key);
  if (xs.size() != N) throw ConfigError("'" + key + "' needs " + std::to_string(N) + " entries");
  std::array<double, N> out{};
  std::copy(xs.begin(), xs.end(), out.begin());
  return out;
}

inline void reject_unknown(const toml::Table& t, std::initializer_list<std::string_view> known) {
  for (const auto& [k, v] : t.entries) {
    bool ok = false;
    for (auto name : known) ok = ok || k == name;
    if (!ok) throw ConfigError("unknown key '" + k + "' in [" + t.name + "]");
  }
}

}  // namespace detail

/// Reads a run configuration from its TOML text.
inline RunConfig parse_run_config(std::string_view text) {
  using namespace detail;
  const toml::Document doc = toml::parse(text);
  RunConfig cfg;

  for (const auto& t : doc.tables) {
    if (t.name.empty() && t.entries.empty()) continue;
    static const std::vector<std::string_view> tables{"system", "variables", "input.symbols", "specs",
                                                      "search", "budget", "output"};
    if (std::find(tables.begin(), tables.end(), t.name) == tables.end()) {
      throw ConfigError("unknown table [" + t.name + "]");
    }
  }

  if (const auto* t = doc.table("system")) {
    reject_unknown(*t, {"kind", "command", "step_timeout", "traction", "braking", "drag", "ratio",
                        "upshift_rpm", "downshift_rpm", "shift_cooldown", "substeps"});
    for (const auto& [k, v] : t->entries) {
      if (k == "kind") {
        auto kind = string(v, k);
        if (kind == "builtin") cfg.system.kind = SystemConfig::Kind::Builtin;
        else if (kind == "external") cfg.system.kind = SystemConfig::Kind::External;
        else throw ConfigError("system kind must be 'builtin' or 'external'");
      } else if (k == "command") {
        cfg.system.command = strings(v, k);
      } else if (k == "step_timeout") {
        cfg.system.step_timeout = std::chrono::milliseconds(static_cast<long long>(number(v, k) * 1000));
      } else if (k == "traction") {
        cfg.system.plant.traction = fixed<4>(v, k);
      } else if (k == "braking") {
        cfg.system.plant.braking = number(v, k);
      } else if (k == "drag") {
        cfg.system.plant.drag = number(v, k);
      } else if (k == "ratio") {
        cfg.system.plant.ratio = fixed<4>(v, k);
      } else if (k == "upshift_rpm") {
        cfg.system.plant.upshift_rpm = number(v, k);
      } else if (k == "downshift_rpm") {
        cfg.system.plant.downshift_rpm = number(v, k);
      } else if (k == "shift_cooldown") {
        cfg.system.plant.shift_cooldown = static_cast<int>(count(v, k));
      } else if (k == "substeps") {
        cfg.system.plant.substeps = static_cast<int>(count(v, k));
        if (cfg.system.plant.substeps < 1) throw ConfigError("substeps must be >= 1");
      }
    }
  }

  if (const auto* t = doc.table("variables")) {
    reject_unknown(*t, {"inputs", "outputs", "discrete"});
    std::vector<std::string> discrete;
    if (const auto* v = t->find("discrete")) discrete = strings(*v, "discrete");
    auto decls = [&](const std::vector<std::string>& names) {
      VariableDecls out;
      for (const auto& n : names) {
        out.push_back({n, std::find(discrete.begin(), discrete.end(), n) != discrete.end()});
      }
      return out;
    };
    if (const auto* v = t->find("inputs")) cfg.inputs = decls(strings(*v, "inputs"));
    if (const auto* v = t->find("outputs")) {
      cfg.outputs = decls(strings(*v, "outputs"));
    } else if (t->find("discrete")) {
      for (auto& d : cfg.outputs) d.discrete = std::find(discrete.begin(), discrete.end(), d.name) != discrete.end();
    }
  }

  if (const auto* t = doc.table("input.symbols")) {
    for (const auto& [k, v] : t->entries) {
      auto values = numbers(v, k);
      cfg.symbols.push_back({k, values});
    }
  } else {
    cfg.symbols = default_at_symbols();
  }

  if (const auto* t = doc.table("specs")) {
    reject_unknown(*t, {"formulas"});
    if (const auto* v = t->find("formulas")) cfg.specs = strings(*v, "formulas");
  }

  if (const auto* t = doc.table("search")) {
    reject_unknown(*t, {"strategy", "word_length", "horizon", "seed", "equality_margin", "state_cap",
                        "random_population", "hc_initial", "hc_children", "hc_survivors", "population",
                        "mutation_probability", "crossover_probability", "tournament_size", "elitism",
                        "max_generations", "carry_over"});
    auto& s = cfg.search;
    for (const auto& [k, v] : t->entries) {
      if (k == "strategy") s.kind = parse_strategy(string(v, k));
      else if (k == "word_length") s.word_length = count(v, k);
      else if (k == "horizon") cfg.horizon = count(v, k);
      else if (k == "seed") cfg.seed = count(v, k);
      else if (k == "equality_margin") cfg.equality_margin = number(v, k);
      else if (k == "state_cap") cfg.state_cap = count(v, k);
      else if (k == "random_population") s.random_population = count(v, k);
      else if (k == "hc_initial") s.hc_initial = count(v, k);
      else if (k == "hc_children") s.hc_children = count(v, k);
      else if (k == "hc_survivors") s.hc_survivors = count(v, k);
      else if (k == "population") s.ga_population = count(v, k);
      else if (k == "mutation_probability") s.mutation_probability = number(v, k);
      else if (k == "crossover_probability") s.crossover_probability = number(v, k);
      else if (k == "tournament_size") s.tournament_size = count(v, k);
      else if (k == "elitism") s.elitism = count(v, k);
      else if (k == "max_generations") s.max_generations = count(v, k);
      else if (k == "carry_over") s.carry_over = boolean(v, k);
    }
  }

  if (const auto* t = doc.table("budget")) {
    reject_unknown(*t, {"max_runs", "timeout"});
    if (const auto* v = t->find("max_runs")) cfg.max_runs = count(*v, "max_runs");
    if (const auto* v = t->find("timeout")) cfg.timeout_seconds = detail::number(*v, "timeout");
  }

  if (const auto* t = doc.table("output")) {
    reject_unknown(*t, {"directory"});
    if (const auto* v = t->find("directory")) cfg.output_directory = string(*v, "directory");
  }

  cfg.validate();
  return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

}  // namespace bbcstl
