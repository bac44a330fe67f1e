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

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bbcstl/bbc.hpp"
#include "bbcstl/config.hpp"
#include "bbcstl/mealy.hpp"

namespace bbcstl {

inline constexpr int kResultDocumentVersion = 1;

/// Extended reals as JSON: finite numbers stay numbers, infinities become the
/// strings "inf" and "-inf".
inline nlohmann::json ext_to_json(ExtReal x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x + 0.0;
}

inline ExtReal ext_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    if (j == "inf") return kPosInf;
    if (j == "-inf") return kNegInf;
    throw Error("malformed extended real '" + j.get<std::string>() + "'");
  }
  return j.get<double>();
}

inline nlohmann::json interval_to_json(const RobustInterval& r) {
  return nlohmann::json::array({ext_to_json(r.lo), ext_to_json(r.hi)});
}

inline nlohmann::json trace_to_json(const ConcreteTrace& t) {
  return {{"variables", t.variables}, {"samples", t.samples}};
}

inline nlohmann::json bits_to_json(const BitsTrace& t) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& b : t) out.push_back(to_string(b));
  return out;
}

inline nlohmann::json witness_to_json(const Witness& w) {
  return {{"word", w.symbols},
          {"inputs", trace_to_json(w.inputs)},
          {"outputs", trace_to_json(w.outputs)},
          {"robustness", interval_to_json(w.robustness)},
          {"verdict", to_string(verdict_of(w.robustness))}};
}

inline nlohmann::json totals_to_json(const BbcTotals& t) {
  return {{"simulation_runs", t.runs},
          {"simulation_steps", t.steps},
          {"cache_hits", t.cache_hits},
          {"membership_queries", t.membership_queries},
          {"fresh_membership_queries", t.fresh_membership_queries},
          {"equivalence_queries", t.equivalence_queries},
          {"equivalence_evaluations", t.equivalence_evaluations},
          {"model_checks", t.model_checks},
          {"refinements", t.refinements}};
}

inline bool uses_equality(const Formula& f) {
  switch (f.kind()) {
    case NodeKind::Atom: return f.atom().cmp == Comparator::Equal;
    case NodeKind::Not:
    case NodeKind::Next: return uses_equality(f.child());
    case NodeKind::Or:
    case NodeKind::Until: return uses_equality(f.left()) || uses_equality(f.right());
    default: return false;
  }
}

inline nlohmann::json config_to_json(const RunConfig& cfg) {
  nlohmann::json symbols = nlohmann::json::object();
  for (const auto& e : cfg.symbols) symbols[e.name] = e.values;
  const auto& s = cfg.search;
  return {{"system", cfg.system.kind == SystemConfig::Kind::Builtin ? "builtin" : "external"},
          {"inputs", cfg.input_names()},
          {"outputs", cfg.output_names()},
          {"symbols", symbols},
          {"strategy", to_string(s.kind)},
          {"word_length", s.word_length},
          {"horizon", cfg.check_horizon()},
          {"seed", cfg.seed.value_or(0)},
          {"max_runs", cfg.max_runs},
          {"timeout_seconds", cfg.timeout_seconds},
          {"equality_margin", cfg.equality_margin},
          {"state_cap", cfg.state_cap},
          {"search",
           {{"random_population", s.random_population},
            {"hc_initial", s.hc_initial},
            {"hc_children", s.hc_children},
            {"hc_survivors", s.hc_survivors},
            {"population", s.ga_population},
            {"mutation_probability", s.mutation_probability},
            {"crossover_probability", s.crossover_probability},
            {"tournament_size", s.tournament_size},
            {"elitism", s.elitism},
            {"max_generations", s.max_generations},
            {"carry_over", s.carry_over}}}};
}

/// Result document of a `falsify` run. Wall-clock figures live under
/// "timing"; everything else is deterministic for a fixed config and seed.
inline nlohmann::json outcome_to_json(const BbcOutcome& o, const RunConfig& cfg) {
  nlohmann::json specs = nlohmann::json::array();
  nlohmann::json spec_seconds = nlohmann::json::array();
  bool equality = false;
  for (const auto& s : o.specs) {
    nlohmann::json j = {{"formula", s.text},
                        {"core", to_string(s.formula)},
                        {"status", to_string(s.status)},
                        {"found_by", s.found_by.empty() ? nlohmann::json() : nlohmann::json(s.found_by)},
                        {"runs_at_verdict", s.runs_at_verdict},
                        {"steps_at_verdict", s.steps_at_verdict},
                        {"witness", s.witness ? witness_to_json(*s.witness) : nlohmann::json()}};
    equality = equality || uses_equality(s.formula);
    specs.push_back(std::move(j));
    spec_seconds.push_back(s.seconds);
  }
  nlohmann::json log = nlohmann::json::array();
  for (const auto& r : o.refinement_log) {
    log.push_back({{"word", r.word},
                   {"source", r.source},
                   {"spec", r.spec},
                   {"states_before", r.states_before},
                   {"states_after", r.states_after},
                   {"hypothesis_outputs", bits_to_json(r.hypothesis_outputs)},
                   {"system_outputs", bits_to_json(r.system_outputs)}});
  }
  nlohmann::json doc = {
      {"version", kResultDocumentVersion},
      {"kind", "falsify"},
      {"config", config_to_json(cfg)},
      {"propositions", o.propositions},
      {"alphabet", o.alphabet},
      {"specs", specs},
      {"summary",
       {{"specs", o.specs.size()},
        {"falsified", o.count(SpecStatus::Falsified)},
        {"not_falsified", o.count(SpecStatus::NotFalsified)},
        {"inconclusive", o.count(SpecStatus::Inconclusive)},
        {"stop_reason", o.stop_reason}}},
      {"totals", totals_to_json(o.totals)},
      {"machine",
       {{"states", o.machine ? o.machine->size() : 0},
        {"document", o.machine ? to_portable(*o.machine) : nlohmann::json()}}},
      {"refinements", log},
      {"notes", o.notes},
      {"aborted", o.aborted.empty() ? nlohmann::json() : nlohmann::json(o.aborted)},
      {"timing", {{"total_seconds", o.seconds}, {"spec_seconds", spec_seconds}}}};
  if (equality) {
    doc["notes"].push_back("equality atoms use robustness +/-" + format_number(cfg.equality_margin) +
                           " (configured margin)");
  }
  return doc;
}

/// The document without its "timing" object; identical runs give identical
/// canonical text.
inline nlohmann::json canonical(nlohmann::json doc) {
  if (doc.is_object()) doc.erase("timing");
  return doc;
}

inline std::string canonical_text(const nlohmann::json& doc) { return canonical(doc).dump(2) + "\n"; }

inline nlohmann::json learn_to_json(const LearnOutcome& o, const RunConfig& cfg) {
  return {{"version", kResultDocumentVersion},
          {"kind", "learn"},
          {"config", config_to_json(cfg)},
          {"propositions", o.propositions},
          {"totals", totals_to_json(o.totals)},
          {"states", o.machine ? o.machine->size() : 0},
          {"stop_reason", o.stop_reason},
          {"aborted", o.aborted.empty() ? nlohmann::json() : nlohmann::json(o.aborted)},
          {"timing", {{"total_seconds", o.seconds}}}};
}

inline nlohmann::json model_check_to_json(const ModelCheckReport& r) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : r.entries) {
    nlohmann::json j = {{"formula", e.text},
                        {"hypothesis", to_string(e.hypothesis)},
                        {"explored", e.explored},
                        {"witness", e.witness ? witness_to_json(*e.witness) : nlohmann::json()},
                        {"confirmed", e.confirmed},
                        {"replay_verdict", e.witness ? nlohmann::json(to_string(e.replay_verdict)) : nlohmann::json()},
                        {"replay_robustness", e.witness ? interval_to_json(e.witness->robustness) : nlohmann::json()},
                        {"hypothesis_outputs", bits_to_json(e.hypothesis_outputs)},
                        {"system_outputs", bits_to_json(e.system_outputs)}};
    entries.push_back(std::move(j));
  }
  auto opt = [](const std::optional<double>& x) { return x ? nlohmann::json(*x) : nlohmann::json(); };
  return {{"version", kResultDocumentVersion},
          {"kind", "check-model"},
          {"propositions", r.propositions},
          {"specs", entries},
          {"summary",
           {{"specs", r.entries.size()},
            {"hypothesis_counterexamples", r.hypothesis_counterexamples},
            {"confirmed_counterexamples", r.confirmed_counterexamples},
            {"robustness_mean", opt(r.robustness_mean)},
            {"robustness_stddev", opt(r.robustness_stddev)},
            {"robustness_min", opt(r.robustness_min)},
            {"robustness_max", opt(r.robustness_max)},
            {"simulation_runs", r.runs},
            {"simulation_steps", r.steps}}}};
}

namespace detail {

inline std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  return out + "\"";
}

inline std::string json_cell(const nlohmann::json& j) {
  if (j.is_null()) return "";
  if (j.is_string()) return csv_cell(j.get<std::string>());
  if (j.is_number_float()) return format_number(j.get<double>());
  return csv_cell(j.dump());
}

}  // namespace detail

/// Per-spec CSV rows of one or more result documents.
inline void write_spec_csv(std::ostream& out, const std::vector<std::pair<std::string, nlohmann::json>>& docs) {
  out << "run,strategy,seed,spec,formula,status,found_by,runs_at_verdict,seconds,robustness_hi\n";
  for (const auto& [name, doc] : docs) {
    if (doc.value("kind", "") != "falsify") throw ConfigError("'" + name + "' is not a falsify result document");
    const auto& specs = doc.at("specs");
    const auto* seconds = doc.contains("timing") ? &doc["timing"]["spec_seconds"] : nullptr;
    for (std::size_t i = 0; i < specs.size(); ++i) {
      const auto& s = specs[i];
      const auto& w = s.at("witness");
      out << detail::csv_cell(name) << "," << detail::json_cell(doc["config"]["strategy"]) << ","
          << detail::json_cell(doc["config"]["seed"]) << "," << i << "," << detail::json_cell(s["formula"]) << ","
          << detail::json_cell(s["status"]) << "," << detail::json_cell(s["found_by"]) << ","
          << detail::json_cell(s["runs_at_verdict"]) << ","
          << (seconds && i < seconds->size() ? detail::json_cell((*seconds)[i]) : "") << ","
          << (w.is_null() ? "" : detail::json_cell(w["robustness"][1])) << "\n";
    }
  }
}

/// One row per run: falsified count N and time T.
inline void write_summary_csv(std::ostream& out, const std::vector<std::pair<std::string, nlohmann::json>>& docs) {
  out << "run,strategy,seed,specs,falsified,not_falsified,inconclusive,simulation_runs,seconds\n";
  for (const auto& [name, doc] : docs) {
    if (doc.value("kind", "") != "falsify") throw ConfigError("'" + name + "' is not a falsify result document");
    const auto& s = doc.at("summary");
    out << detail::csv_cell(name) << "," << detail::json_cell(doc["config"]["strategy"]) << ","
        << detail::json_cell(doc["config"]["seed"]) << "," << s["specs"] << "," << s["falsified"] << ","
        << s["not_falsified"] << "," << s["inconclusive"] << "," << doc["totals"]["simulation_runs"] << ","
        << (doc.contains("timing") ? detail::json_cell(doc["timing"]["total_seconds"]) : "") << "\n";
  }
}

/// Aggregate JSON over several result documents.
inline nlohmann::json summary_json(const std::vector<std::pair<std::string, nlohmann::json>>& docs) {
  nlohmann::json runs = nlohmann::json::array();
  double falsified = 0;
  for (const auto& [name, doc] : docs) {
    if (doc.value("kind", "") != "falsify") throw ConfigError("'" + name + "' is not a falsify result document");
    const auto& s = doc.at("summary");
    runs.push_back({{"run", name},
                    {"strategy", doc["config"]["strategy"]},
                    {"seed", doc["config"]["seed"]},
                    {"specs", s["specs"]},
                    {"falsified", s["falsified"]},
                    {"simulation_runs", doc["totals"]["simulation_runs"]},
                    {"seconds", doc.contains("timing") ? doc["timing"]["total_seconds"] : nlohmann::json()}});
    falsified += s["falsified"].get<double>();
  }
  return {{"version", kResultDocumentVersion},
          {"kind", "report"},
          {"runs", runs},
          {"mean_falsified", docs.empty() ? nlohmann::json() : nlohmann::json(falsified / docs.size())}};
}

}  // namespace bbcstl
