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

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "bbcstl/abstraction.hpp"
#include "bbcstl/error.hpp"
#include "bbcstl/mealy.hpp"
#include "bbcstl/rng.hpp"
#include "bbcstl/robustness.hpp"
#include "bbcstl/sul.hpp"

namespace bbcstl {

enum class Strategy { Random, HillClimbing, Genetic };

inline const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::Random: return "random";
    case Strategy::HillClimbing: return "hc";
    case Strategy::Genetic: return "ga";
  }
  return "?";
}

inline Strategy parse_strategy(const std::string& s) {
  if (s == "random") return Strategy::Random;
  if (s == "hc") return Strategy::HillClimbing;
  if (s == "ga") return Strategy::Genetic;
  throw ConfigError("unknown strategy '" + s + "' (expected random, hc or ga)");
}

struct StrategyConfig {
  Strategy kind = Strategy::Genetic;
  std::size_t word_length = 30;

  std::size_t random_population = 150;

  std::size_t hc_initial = 5;
  std::size_t hc_children = 60;
  std::size_t hc_survivors = 5;

  std::size_t ga_population = 150;
  double mutation_probability = 0.01;
  double crossover_probability = 0.5;
  std::size_t tournament_size = 2;
  std::size_t elitism = 1;

  /// Generations per equivalence query before giving up.
  std::size_t max_generations = 50;
  /// Start each query from the final population of the previous query.
  bool carry_over = true;

  void validate() const {
    if (word_length < 1) throw ConfigError("word length must be at least 1");
    if (!(mutation_probability >= 0 && mutation_probability <= 1) ||
        !(crossover_probability >= 0 && crossover_probability <= 1)) {
      throw ConfigError("probabilities must lie in [0, 1]");
    }
    if (hc_survivors < 1 || hc_children < 1 || hc_initial < 1) throw ConfigError("hill climbing sizes must be >= 1");
    if (ga_population < 1 || ga_population <= elitism || tournament_size < 1) {
      throw ConfigError("GA population must exceed elitism and tournaments need >= 1 entrant");
    }
    if (random_population < 1) throw ConfigError("random population must be >= 1");
  }
};

/// A search individual: an input word and its objective, the upper end of the
/// robustness interval of the specification on the simulated trace.
struct Candidate {
  Word word;
  ExtReal objective = kPosInf;
};

/// Fills in a candidate's objective; returning false stops the search.
using CandidateEvaluator = std::function<bool(Candidate&)>;

// ---- population operators --------------------------------------------------

inline Word random_word(std::size_t length, std::size_t alphabet, Rng& rng) {
  Word w(length);
  for (auto& a : w) a = static_cast<Symbol>(rng.below(alphabet));
  return w;
}

inline std::vector<Candidate> sample_population(std::size_t count, std::size_t length,
                                                std::size_t alphabet, Rng& rng) {
  std::vector<Candidate> out(count);
  for (auto& c : out) c.word = random_word(length, alphabet, rng);
  return out;
}

namespace detail {

inline bool evaluate_all(std::vector<Candidate>& cs, const CandidateEvaluator& eval) {
  for (auto& c : cs) {
    if (!eval(c)) return false;
  }
  return true;
}

// Indices of the `count` best candidates; ties keep the earlier one.
inline std::vector<Candidate> best_of(const std::vector<Candidate>& pool, std::size_t count) {
  std::vector<std::size_t> idx(pool.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return pool[a].objective < pool[b].objective; });
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < std::min(count, idx.size()); ++i) out.push_back(pool[idx[i]]);
  return out;
}

}  // namespace detail

/// Fresh uniform words; the objective is filled by `eval`.
inline std::optional<std::vector<Candidate>> next_population_random(const StrategyConfig& cfg,
                                                                    std::size_t alphabet, Rng& rng,
                                                                    const CandidateEvaluator& eval) {
  auto pop = sample_population(cfg.random_population, cfg.word_length, alphabet, rng);
  if (!detail::evaluate_all(pop, eval)) return std::nullopt;
  return pop;
}

/// Each parent spawns `hc_children` single-position random replacements. The
/// `hc_survivors` best of parents and children survive.
inline std::optional<std::vector<Candidate>> next_population_hc(const StrategyConfig& cfg,
                                                                const std::vector<Candidate>& parents,
                                                                std::size_t alphabet, Rng& rng,
                                                                const CandidateEvaluator& eval) {
  if (parents.empty()) throw Error("hill climbing needs at least one parent");
  std::vector<Candidate> children;
  children.reserve(parents.size() * cfg.hc_children);
  for (const auto& p : parents) {
    for (std::size_t i = 0; i < cfg.hc_children; ++i) {
      Candidate c{p.word, kPosInf};
      if (!c.word.empty()) {
        const std::size_t pos = rng.below(c.word.size());
        c.word[pos] = static_cast<Symbol>(rng.below(alphabet));
      }
      children.push_back(std::move(c));
    }
  }
  if (!detail::evaluate_all(children, eval)) return std::nullopt;
  std::vector<Candidate> pool = parents;
  pool.insert(pool.end(), children.begin(), children.end());
  return detail::best_of(pool, cfg.hc_survivors);
}

/// Tournament selection (smaller objective wins, ties uniform), uniform
/// crossover, uniform mutation and elitism over an evaluated population.
inline std::optional<std::vector<Candidate>> next_population_ga(const StrategyConfig& cfg,
                                                                const std::vector<Candidate>& pop,
                                                                std::size_t alphabet, Rng& rng,
                                                                const CandidateEvaluator& eval) {
  if (pop.empty()) throw Error("GA needs a non-empty population");
  auto tournament = [&]() -> const Candidate& {
    std::size_t best = rng.below(pop.size());
    std::size_t ties = 1;
    for (std::size_t k = 1; k < cfg.tournament_size; ++k) {
      const std::size_t other = rng.below(pop.size());
      if (pop[other].objective < pop[best].objective) {
        best = other;
        ties = 1;
      } else if (pop[other].objective == pop[best].objective) {
        // Reservoir choice keeps tie-breaking uniform among equal entrants.
        ++ties;
        if (rng.below(ties) == 0) best = other;
      }
    }
    return pop[best];
  };
  auto mutate = [&](Word& w) {
    for (auto& a : w) {
      if (rng.chance(cfg.mutation_probability)) a = static_cast<Symbol>(rng.below(alphabet));
    }
  };

  std::vector<Candidate> next = detail::best_of(pop, cfg.elitism);
  std::vector<Candidate> offspring;
  const std::size_t wanted = cfg.ga_population - next.size();
  while (offspring.size() < wanted) {
    Word a = tournament().word;
    Word b = tournament().word;
    if (rng.chance(cfg.crossover_probability)) {
      const std::size_t n = std::min(a.size(), b.size());
      for (std::size_t i = 0; i < n; ++i) {
        if (rng.chance(0.5)) std::swap(a[i], b[i]);
      }
    }
    mutate(a);
    mutate(b);
    offspring.push_back({std::move(a), kPosInf});
    if (offspring.size() < wanted) offspring.push_back({std::move(b), kPosInf});
  }
  if (!detail::evaluate_all(offspring, eval)) return std::nullopt;
  next.insert(next.end(), offspring.begin(), offspring.end());
  return next;
}

// ---- equivalence testing ---------------------------------------------------

/// Outcome of simulating one word against the hypothesis and specification.
struct WordEvaluation {
  Word word;
  ConcreteTrace trace;
  BitsTrace abstract_outputs;
  RobustInterval robustness;
  bool disagrees = false;
  bool violates = false;
};

inline WordEvaluation evaluate_word(Simulator& sim, const OutputMapper& outputs,
                                    const MealyMachine& hypothesis, const Formula& spec,
                                    const Word& w, RobustnessOptions opts = {}) {
  WordEvaluation e;
  e.word = w;
  e.trace = sim.simulate(w);
  e.abstract_outputs = outputs.abstract_trace(e.trace);
  e.robustness = fin_robust(spec, e.trace, 0, opts);
  e.disagrees = e.abstract_outputs != hypothesis.run(w);
  e.violates = verdict_of(e.robustness) == Verdict::Violated;
  return e;
}

struct EquivalenceResult {
  std::optional<WordEvaluation> counterexample;
  bool budget_exhausted = false;
  bool timed_out = false;
  std::size_t evaluations = 0;
  std::size_t generations = 0;
};

/// Search-based equivalence tester. With carry-over, each query resumes from
/// the final population of the previous query.
class EquivalenceTester {
 public:
  using Clock = std::chrono::steady_clock;

  EquivalenceTester(StrategyConfig cfg, std::uint64_t seed) : cfg_(cfg), rng_(seed) { cfg_.validate(); }

  const StrategyConfig& config() const { return cfg_; }
  std::size_t evaluations() const { return evaluations_; }

  /// First and final populations of the previous query.
  const std::vector<Candidate>& first_population() const { return first_; }
  const std::vector<Candidate>& final_population() const { return final_; }

  /// Looks for a word on which the system's abstract output differs from the
  /// hypothesis, steering the search towards low robustness of `spec`. A word
  /// whose trace violates `spec` also ends the search.
  EquivalenceResult find_counterexample(Simulator& sim, const OutputMapper& outputs,
                                        const MealyMachine& hypothesis, const Formula& spec,
                                        RobustnessOptions opts = {},
                                        Clock::time_point deadline = Clock::time_point::max()) {
    EquivalenceResult result;
    const std::size_t alphabet = sim.mapper().alphabet_size();
    CandidateEvaluator eval = [&](Candidate& c) {
      if (Clock::now() >= deadline) {
        result.timed_out = true;
        return false;
      }
      WordEvaluation e = evaluate_word(sim, outputs, hypothesis, spec, c.word, opts);
      ++evaluations_;
      ++result.evaluations;
      c.objective = e.robustness.hi;
      if (e.disagrees || e.violates) {
        result.counterexample = std::move(e);
        return false;
      }
      return true;
    };

    std::vector<Candidate> pop;
    if (cfg_.carry_over && !final_.empty()) {
      pop = final_;
    } else {
      pop = sample_population(initial_size(), cfg_.word_length, alphabet, rng_);
    }
    first_ = pop;
    try {
      bool complete = detail::evaluate_all(pop, eval);
      while (complete && result.generations < cfg_.max_generations) {
        std::optional<std::vector<Candidate>> next;
        switch (cfg_.kind) {
          case Strategy::Random: next = next_population_random(cfg_, alphabet, rng_, eval); break;
          case Strategy::HillClimbing: next = next_population_hc(cfg_, pop, alphabet, rng_, eval); break;
          case Strategy::Genetic: next = next_population_ga(cfg_, pop, alphabet, rng_, eval); break;
        }
        ++result.generations;
        if (!next) break;
        pop = std::move(*next);
      }
    } catch (const BudgetExhausted&) {
      result.budget_exhausted = true;
    }
    final_ = pop;
    return result;
  }

 private:
  std::size_t initial_size() const {
    switch (cfg_.kind) {
      case Strategy::Random: return cfg_.random_population;
      case Strategy::HillClimbing: return cfg_.hc_initial;
      case Strategy::Genetic: return cfg_.ga_population;
    }
    return 1;
  }

  StrategyConfig cfg_;
  Rng rng_;
  std::size_t evaluations_ = 0;
  std::vector<Candidate> first_;
  std::vector<Candidate> final_;
};

}  // namespace bbcstl
