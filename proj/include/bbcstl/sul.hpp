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

#include <any>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "bbcstl/abstraction.hpp"
#include "bbcstl/error.hpp"
#include "bbcstl/learner.hpp"
#include "bbcstl/plant.hpp"
#include "bbcstl/trace.hpp"

namespace bbcstl {

/// A deterministic, causal, length-preserving discrete-time system.
class SystemAdapter {
 public:
  virtual ~SystemAdapter() = default;

  virtual void reset() = 0;
  virtual Valuation step(const Valuation& input) = 0;

  virtual const std::vector<std::string>& input_variables() const = 0;
  virtual const std::vector<std::string>& output_variables() const = 0;

  virtual bool parallel_capable() const { return false; }

  /// Adapters that can snapshot their state let the cache resume a simulation
  /// from a cached prefix instead of replaying it from reset.
  virtual bool resumable() const { return false; }
  virtual std::any save() const { return {}; }
  virtual void restore(const std::any&) {}
};

/// The automatic-transmission surrogate as a system adapter. Inputs are
/// (throttle, brake), outputs (velocity, rotation, gear).
class BuiltinPlant : public SystemAdapter {
 public:
  explicit BuiltinPlant(PlantParams params = {},
                        std::vector<std::string> inputs = {"throttle", "brake"},
                        std::vector<std::string> outputs = {"velocity", "rotation", "gear"})
      : params_(params), inputs_(std::move(inputs)), outputs_(std::move(outputs)) {
    if (inputs_.size() != 2) throw ConfigError("built-in plant has exactly two inputs (throttle, brake)");
    if (outputs_.size() != 3) {
      throw ConfigError("built-in plant has exactly three outputs (velocity, rotation, gear)");
    }
  }

  void reset() override { state_ = {}; }

  Valuation step(const Valuation& input) override {
    if (input.size() != 2) throw AdapterError("built-in plant expects two inputs");
    return at_step(state_, input[0], input[1], params_);
  }

  const std::vector<std::string>& input_variables() const override { return inputs_; }
  const std::vector<std::string>& output_variables() const override { return outputs_; }
  bool parallel_capable() const override { return true; }
  bool resumable() const override { return true; }
  std::any save() const override { return state_; }
  void restore(const std::any& s) override { state_ = std::any_cast<AtState>(s); }

 private:
  PlantParams params_;
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
  AtState state_;
};

/// Thrown when a fresh simulation run is needed but the run budget is spent.
class BudgetExhausted : public Error {
 public:
  BudgetExhausted() : Error("simulation budget exhausted") {}
};

/// Membership machinery of the system under learning: concretizes abstract
/// words, runs the adapter, and caches outputs in a prefix tree keyed by input
/// symbols. A run is counted whenever a call has to step the adapter.
class Simulator {
 public:
  struct Counters {
    std::size_t runs = 0;
    std::size_t steps = 0;
    std::size_t cache_hits = 0;
  };

  Simulator(std::unique_ptr<SystemAdapter> adapter, InputMapper mapper)
      : adapter_(std::move(adapter)), mapper_(std::move(mapper)) {
    if (adapter_->input_variables() != mapper_.variables()) {
      throw ConfigError("input mapper variables do not match the system inputs");
    }
    nodes_.emplace_back();
  }

  const InputMapper& mapper() const { return mapper_; }
  const std::vector<std::string>& output_variables() const { return adapter_->output_variables(); }
  bool parallel_capable() const { return adapter_->parallel_capable(); }

  Counters counters() const {
    std::lock_guard lock(mutex_);
    return counters_;
  }

  /// Runs beyond this many raise BudgetExhausted; cache hits stay free.
  void set_run_budget(std::size_t runs) {
    std::lock_guard lock(mutex_);
    budget_ = runs;
  }
  std::size_t run_budget() const { return budget_; }
  bool budget_exhausted() const {
    std::lock_guard lock(mutex_);
    return counters_.runs >= budget_;
  }

  /// Output trace of the system on the concretization of `w`.
  ConcreteTrace simulate(const Word& w) {
    for (Symbol a : w) mapper_.apply(a);  // reject unknown symbols early
    std::lock_guard lock(mutex_);
    ConcreteTrace out{adapter_->output_variables(), {}};
    out.samples.reserve(w.size());
    std::size_t node = 0, depth = 0;
    std::vector<std::size_t> path;
    path.reserve(w.size());
    while (depth < w.size()) {
      auto it = nodes_[node].children.find(w[depth]);
      if (it == nodes_[node].children.end()) break;
      node = it->second;
      path.push_back(node);
      ++depth;
    }
    if (depth == w.size()) {
      ++counters_.cache_hits;
      for (std::size_t n : path) out.samples.push_back(nodes_[n].output);
      return out;
    }
    if (counters_.runs >= budget_) throw BudgetExhausted();
    ++counters_.runs;

    if (adapter_->resumable()) {
      if (depth == 0) adapter_->reset();
      else adapter_->restore(nodes_[node].checkpoint);
    } else {
      adapter_->reset();
      for (std::size_t i = 0; i < depth; ++i) {
        Valuation y = step_adapter(w[i], i);
        if (y != nodes_[path[i]].output) {
          throw AdapterError("system is nondeterministic: replay differs at step " + std::to_string(i));
        }
      }
    }
    for (std::size_t n : path) out.samples.push_back(nodes_[n].output);
    for (std::size_t i = depth; i < w.size(); ++i) {
      Valuation y = step_adapter(w[i], i);
      Node child;
      child.output = y;
      if (adapter_->resumable()) child.checkpoint = adapter_->save();
      nodes_.push_back(std::move(child));
      const std::size_t id = nodes_.size() - 1;
      nodes_[node].children.emplace(w[i], id);
      node = id;
      out.samples.push_back(std::move(y));
    }
    return out;
  }

 private:
  struct Node {
    std::map<Symbol, std::size_t> children;
    Valuation output;
    std::any checkpoint;
  };

  Valuation step_adapter(Symbol a, std::size_t index) {
    ++counters_.steps;
    Valuation y;
    try {
      y = adapter_->step(mapper_.apply(a));
    } catch (const AdapterError& e) {
      throw AdapterError(std::string(e.what()) + " (step " + std::to_string(index) + ")");
    }
    if (y.size() != adapter_->output_variables().size()) {
      throw AdapterError("system returned " + std::to_string(y.size()) + " outputs at step " +
                         std::to_string(index));
    }
    return y;
  }

  std::unique_ptr<SystemAdapter> adapter_;
  InputMapper mapper_;
  std::vector<Node> nodes_;
  Counters counters_;
  std::size_t budget_ = static_cast<std::size_t>(-1);
  mutable std::mutex mutex_;
};

/// Membership oracle over a simulator: the abstract output trace of a word.
class SulOracle : public MembershipOracle {
 public:
  SulOracle(Simulator& sim, OutputMapper mapper) : sim_(sim), mapper_(std::move(mapper)) {}

  std::size_t alphabet_size() const override { return sim_.mapper().alphabet_size(); }
  std::size_t fresh_queries() const override { return fresh_; }
  const OutputMapper& output_mapper() const { return mapper_; }
  Simulator& simulator() { return sim_; }

 protected:
  BitsTrace answer(const Word& w) override {
    const std::size_t before = sim_.counters().runs;
    ConcreteTrace t = sim_.simulate(w);
    if (sim_.counters().runs != before) ++fresh_;
    return mapper_.abstract_trace(t);
  }

 private:
  Simulator& sim_;
  OutputMapper mapper_;
  std::size_t fresh_ = 0;
};

}  // namespace bbcstl
