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
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bbcstl/abstraction.hpp"
#include "bbcstl/checker.hpp"
#include "bbcstl/config.hpp"
#include "bbcstl/equiv.hpp"
#include "bbcstl/learner.hpp"
#include "bbcstl/mealy.hpp"
#include "bbcstl/parser.hpp"
#include "bbcstl/robustness.hpp"
#include "bbcstl/sul.hpp"

namespace bbcstl {

enum class SpecStatus { Falsified, NotFalsified, Inconclusive };

inline const char* to_string(SpecStatus s) {
  switch (s) {
    case SpecStatus::Falsified: return "falsified";
    case SpecStatus::NotFalsified: return "not-falsified";
    case SpecStatus::Inconclusive: return "inconclusive";
  }
  return "?";
}

/// A concrete falsifying (or candidate) run of the system.
struct Witness {
  Word word;
  std::vector<std::string> symbols;
  ConcreteTrace inputs;
  ConcreteTrace outputs;
  RobustInterval robustness;
};

struct SpecOutcome {
  std::string text;
  Formula formula;
  SpecStatus status = SpecStatus::Inconclusive;
  std::optional<Witness> witness;
  std::string found_by;  // "model-checking" or "equivalence-testing"
  std::size_t runs_at_verdict = 0;
  std::size_t steps_at_verdict = 0;
  double seconds = 0.0;
};

struct RefinementRecord {
  std::vector<std::string> word;
  std::string source;  // "model-checking" or "equivalence-testing"
  std::size_t spec = 0;
  std::size_t states_before = 0;
  std::size_t states_after = 0;
  BitsTrace hypothesis_outputs;
  BitsTrace system_outputs;
};

struct BbcTotals {
  std::size_t runs = 0;
  std::size_t steps = 0;
  std::size_t cache_hits = 0;
  std::size_t membership_queries = 0;
  std::size_t fresh_membership_queries = 0;
  std::size_t equivalence_queries = 0;
  std::size_t equivalence_evaluations = 0;
  std::size_t model_checks = 0;
  std::size_t refinements = 0;
};

struct BbcOutcome {
  std::vector<SpecOutcome> specs;
  std::vector<std::string> propositions;
  std::vector<std::string> alphabet;
  BbcTotals totals;
  std::optional<MealyMachine> machine;
  std::vector<RefinementRecord> refinement_log;
  std::vector<std::string> notes;
  std::string stop_reason;  // "converged", "all-falsified", "budget", "timeout", "adapter-failure"
  std::string aborted;      // adapter failure message, empty otherwise
  double seconds = 0.0;

  std::size_t count(SpecStatus s) const {
    std::size_t n = 0;
    for (const auto& o : specs) n += o.status == s;
    return n;
  }
};

/// Variables a specification may mention: the system outputs.
inline VariableDecls spec_variables(const RunConfig& cfg) { return cfg.outputs; }

inline std::vector<Formula> parse_specs(const std::vector<std::string>& texts, const VariableDecls& vars) {
  std::vector<Formula> out;
  for (const auto& t : texts) {
    try {
      out.push_back(parse_formula(t, vars));
    } catch (const ParseError& e) {
      throw ConfigError("specification '" + t + "': " + e.what());
    }
  }
  return out;
}

inline std::vector<std::string> proposition_names(const OutputMapper& m) {
  std::vector<std::string> out;
  for (const auto& a : m.propositions()) out.push_back(to_string(Formula::atom(a)));
  return out;
}

namespace detail {

struct Timeout {};

inline Witness make_witness(const InputMapper& mapper, const WordEvaluation& e) {
  return {e.word, mapper.names(e.word), mapper.concretize(e.word), e.trace, e.robustness};
}

/// State shared by the BBC driver and the plain learning loop.
class Session {
 public:
  using Clock = std::chrono::steady_clock;

  explicit Session(const RunConfig& cfg)
      : cfg_(cfg),
        formulas_(parse_specs(cfg.specs, spec_variables(cfg))),
        outputs_(derive_output_mapper(formulas_)),
        sim_(cfg.make_adapter(), cfg.input_mapper()),
        oracle_(sim_, outputs_),
        learner_(oracle_, sim_.mapper().alphabet(), proposition_names(outputs_)),
        tester_(cfg.search, cfg.seed.value_or(0)),
        start_(Clock::now()),
        deadline_(start_ + std::chrono::duration_cast<Clock::duration>(
                               std::chrono::duration<double>(cfg.timeout_seconds))) {
    sim_.set_run_budget(cfg.max_runs);
    for (const auto& f : formulas_) propositional_.push_back(propositionalize(f, outputs_));
  }

  const RunConfig& cfg_;
  std::vector<Formula> formulas_;
  std::vector<Formula> propositional_;
  OutputMapper outputs_;
  Simulator sim_;
  SulOracle oracle_;
  MealyLearner learner_;
  EquivalenceTester tester_;
  Clock::time_point start_;
  Clock::time_point deadline_;
  BbcTotals totals_;
  std::vector<RefinementRecord> log_;

  RobustnessOptions robustness_options() const { return {cfg_.equality_margin}; }

  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

  void check_deadline() const {
    if (Clock::now() >= deadline_) throw Timeout{};
  }

  WordEvaluation evaluate(const Word& w, std::size_t spec) {
    return evaluate_word(sim_, outputs_, learner_.hypothesis(), formulas_[spec], w, robustness_options());
  }

  void refine(const WordEvaluation& e, const std::string& source, std::size_t spec) {
    RefinementRecord r;
    r.word = sim_.mapper().names(e.word);
    r.source = source;
    r.spec = spec;
    r.states_before = learner_.hypothesis().size();
    r.hypothesis_outputs = learner_.hypothesis().run(e.word);
    r.system_outputs = e.abstract_outputs;
    learner_.refine(e.word);
    r.states_after = learner_.hypothesis().size();
    log_.push_back(std::move(r));
    ++totals_.refinements;
  }

  /// Equivalence query for one spec. Returns the evaluation that ended the
  /// search, if any.
  std::optional<WordEvaluation> equivalence_query(std::size_t spec) {
    check_deadline();
    ++totals_.equivalence_queries;
    EquivalenceResult r = tester_.find_counterexample(sim_, outputs_, learner_.hypothesis(), formulas_[spec],
                                                      robustness_options(), deadline_);
    totals_.equivalence_evaluations += r.evaluations;
    if (r.counterexample) return std::move(r.counterexample);
    if (r.budget_exhausted) throw BudgetExhausted();
    if (r.timed_out) throw Timeout{};
    return std::nullopt;
  }

  BbcTotals totals() const {
    BbcTotals t = totals_;
    const auto c = sim_.counters();
    t.runs = c.runs;
    t.steps = c.steps;
    t.cache_hits = c.cache_hits;
    t.membership_queries = oracle_.queries();
    t.fresh_membership_queries = oracle_.fresh_queries();
    return t;
  }
};

}  // namespace detail

/// Multi-specification black-box checking: learn a hypothesis, model check
/// every unfalsified spec on it, validate witnesses on the system, refine on
/// spurious witnesses, and fall back to search-based equivalence testing.
inline BbcOutcome run_bbc(const RunConfig& cfg) {
  cfg.validate();
  detail::Session s(cfg);
  BbcOutcome out;
  out.propositions = proposition_names(s.outputs_);
  out.alphabet = s.sim_.mapper().alphabet();
  for (std::size_t i = 0; i < cfg.specs.size(); ++i) {
    SpecOutcome o;
    o.text = cfg.specs[i];
    o.formula = s.formulas_[i];
    out.specs.push_back(std::move(o));
  }

  auto unfalsified = [&] {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < out.specs.size(); ++i) {
      if (out.specs[i].status != SpecStatus::Falsified) idx.push_back(i);
    }
    return idx;
  };
  auto falsify = [&](std::size_t i, const WordEvaluation& e, const char* how) {
    auto& o = out.specs[i];
    o.status = SpecStatus::Falsified;
    o.witness = detail::make_witness(s.sim_.mapper(), e);
    o.found_by = how;
    const auto c = s.sim_.counters();
    o.runs_at_verdict = c.runs;
    o.steps_at_verdict = c.steps;
    o.seconds = s.elapsed();
  };
  auto finish = [&](SpecStatus rest) {
    for (auto& o : out.specs) {
      if (o.status == SpecStatus::Falsified) continue;
      o.status = rest;
      const auto c = s.sim_.counters();
      o.runs_at_verdict = c.runs;
      o.steps_at_verdict = c.steps;
      o.seconds = s.elapsed();
    }
  };

  const CheckOptions check{cfg.check_horizon(), cfg.state_cap};
  try {
    s.learner_.learn_initial();
    while (true) {
      if (unfalsified().empty()) {
        out.stop_reason = "all-falsified";
        break;
      }
      // Model checking of every unfalsified spec against the hypothesis.
      bool refined = false;
      for (std::size_t i : unfalsified()) {
        s.check_deadline();
        ++s.totals_.model_checks;
        const CheckResult r = find_bad_prefix(s.learner_.hypothesis(), s.propositional_[i], check);
        if (r.status == CheckResult::Status::Inconclusive) {
          out.notes.push_back("model checking of spec " + std::to_string(i) + " hit the state cap after " +
                              std::to_string(r.explored) + " product states");
          continue;
        }
        if (!r.bad()) continue;
        WordEvaluation e = s.evaluate(r.word, i);
        if (e.violates) {
          falsify(i, e, "model-checking");
          continue;
        }
        if (e.disagrees) {
          s.refine(e, "model-checking", i);
          refined = true;
          break;
        }
        out.notes.push_back("witness for spec " + std::to_string(i) +
                            " matches the hypothesis but has robustness upper bound " +
                            format_number(e.robustness.hi));
      }
      if (refined) continue;
      if (unfalsified().empty()) continue;

      // Search-based equivalence testing, in declaration order.
      bool found = false;
      for (std::size_t i : unfalsified()) {
        auto e = s.equivalence_query(i);
        if (!e) continue;
        found = true;
        if (e->violates) falsify(i, *e, "equivalence-testing");
        if (e->disagrees) s.refine(*e, "equivalence-testing", i);
        break;
      }
      if (!found) {
        out.stop_reason = "converged";
        finish(SpecStatus::NotFalsified);
        break;
      }
    }
  } catch (const BudgetExhausted&) {
    out.stop_reason = "budget";
    finish(SpecStatus::Inconclusive);
  } catch (const detail::Timeout&) {
    out.stop_reason = "timeout";
    finish(SpecStatus::Inconclusive);
  } catch (const AdapterError& e) {
    out.stop_reason = "adapter-failure";
    out.aborted = e.what();
    finish(SpecStatus::Inconclusive);
  }

  if (s.learner_.hypothesis().size() > 0) out.machine = s.learner_.hypothesis();
  out.totals = s.totals();
  out.refinement_log = std::move(s.log_);
  out.seconds = s.elapsed();
  return out;
}

struct LearnOutcome {
  std::optional<MealyMachine> machine;
  std::vector<std::string> propositions;
  BbcTotals totals;
  std::vector<RefinementRecord> refinement_log;
  std::string stop_reason;
  std::string aborted;
  double seconds = 0.0;
};

/// Learning alone: equivalence testing steered by each spec in turn until no
/// spec's search finds a disagreement.
inline LearnOutcome learn_model(const RunConfig& cfg) {
  cfg.validate();
  detail::Session s(cfg);
  LearnOutcome out;
  out.propositions = proposition_names(s.outputs_);
  try {
    s.learner_.learn_initial();
    while (true) {
      bool found = false;
      for (std::size_t i = 0; i < s.formulas_.size() && !found; ++i) {
        auto e = s.equivalence_query(i);
        if (e && e->disagrees) {
          s.refine(*e, "equivalence-testing", i);
          found = true;
        }
      }
      if (!found) {
        out.stop_reason = "converged";
        break;
      }
    }
  } catch (const BudgetExhausted&) {
    out.stop_reason = "budget";
  } catch (const detail::Timeout&) {
    out.stop_reason = "timeout";
  } catch (const AdapterError& e) {
    out.stop_reason = "adapter-failure";
    out.aborted = e.what();
  }
  if (s.learner_.hypothesis().size() > 0) out.machine = s.learner_.hypothesis();
  out.totals = s.totals();
  out.refinement_log = std::move(s.log_);
  out.seconds = s.elapsed();
  return out;
}

// ---- reuse of a saved machine ------------------------------------------------

struct ModelCheckEntry {
  std::string text;
  CheckResult::Status hypothesis = CheckResult::Status::NoBadPrefixWithinHorizon;
  std::size_t explored = 0;
  std::optional<Witness> witness;
  BitsTrace hypothesis_outputs;
  BitsTrace system_outputs;
  bool confirmed = false;
  Verdict replay_verdict = Verdict::Unknown;
};

struct ModelCheckReport {
  std::vector<std::string> propositions;
  std::vector<ModelCheckEntry> entries;
  std::size_t hypothesis_counterexamples = 0;
  std::size_t confirmed_counterexamples = 0;
  std::optional<double> robustness_mean;    // over replayed witnesses with finite upper bound
  std::optional<double> robustness_stddev;  // population standard deviation
  std::optional<double> robustness_min;
  std::optional<double> robustness_max;
  std::size_t runs = 0;
  std::size_t steps = 0;
};

/// Model checks a previously learned machine against `specs` and replays every
/// hypothesis witness on the configured system.
inline ModelCheckReport check_saved_model(const MealyMachine& machine, const std::vector<std::string>& specs,
                                          const RunConfig& cfg) {
  const VariableDecls vars = spec_variables(cfg);
  std::vector<AtomPredicate> atoms;
  for (const auto& p : machine.propositions()) {
    Formula f;
    try {
      f = parse_formula(p, vars);
    } catch (const ParseError& e) {
      throw ConfigError("machine proposition '" + p + "' does not parse: " + e.what());
    }
    if (f.kind() != NodeKind::Atom) throw ConfigError("machine proposition '" + p + "' is not an atom");
    atoms.push_back(f.atom());
  }
  const OutputMapper outputs(atoms);
  const InputMapper inputs = cfg.input_mapper();
  if (inputs.alphabet() != machine.sigma()) {
    throw ConfigError("machine alphabet does not match the configured input symbols");
  }
  const std::vector<Formula> formulas = parse_specs(specs, vars);
  std::vector<Formula> propositional;
  for (std::size_t i = 0; i < formulas.size(); ++i) {
    try {
      propositional.push_back(propositionalize(formulas[i], outputs));
    } catch (const Error& e) {
      throw ConfigError("specification '" + specs[i] + "' mentions a proposition the machine lacks: " +
                        e.what());
    }
  }

  Simulator sim(cfg.make_adapter(), inputs);
  sim.set_run_budget(cfg.max_runs);
  const CheckOptions check{cfg.check_horizon(), cfg.state_cap};
  const RobustnessOptions ropts{cfg.equality_margin};

  ModelCheckReport rep;
  rep.propositions = machine.propositions();
  std::vector<double> finite;
  for (std::size_t i = 0; i < formulas.size(); ++i) {
    ModelCheckEntry e;
    e.text = specs[i];
    const CheckResult r = find_bad_prefix(machine, propositional[i], check);
    e.hypothesis = r.status;
    e.explored = r.explored;
    if (r.bad()) {
      ++rep.hypothesis_counterexamples;
      e.hypothesis_outputs = r.outputs;
      ConcreteTrace t = sim.simulate(r.word);
      e.system_outputs = outputs.abstract_trace(t);
      const RobustInterval rob = fin_robust(formulas[i], t, 0, ropts);
      e.replay_verdict = verdict_of(rob);
      e.confirmed = e.replay_verdict == Verdict::Violated;
      rep.confirmed_counterexamples += e.confirmed;
      e.witness = Witness{r.word, inputs.names(r.word), inputs.concretize(r.word), std::move(t), rob};
      if (std::isfinite(rob.hi)) finite.push_back(rob.hi);
    }
    rep.entries.push_back(std::move(e));
  }
  if (!finite.empty()) {
    double sum = 0.0;
    for (double x : finite) sum += x;
    const double mean = sum / static_cast<double>(finite.size());
    double var = 0.0;
    for (double x : finite) var += (x - mean) * (x - mean);
    rep.robustness_mean = mean;
    rep.robustness_stddev = std::sqrt(var / static_cast<double>(finite.size()));
    rep.robustness_min = *std::min_element(finite.begin(), finite.end());
    rep.robustness_max = *std::max_element(finite.begin(), finite.end());
  }
  const auto c = sim.counters();
  rep.runs = c.runs;
  rep.steps = c.steps;
  return rep;
}

}  // namespace bbcstl
