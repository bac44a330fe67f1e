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

// Command-line front end.
//
//   bbcstl falsify     --config run.toml [--seed N] [--strategy ga|hc|random] [--output out.json]
//   bbcstl monitor     --formula F --trace t.csv [--discrete gear] [--margin 1.0]
//   bbcstl learn       --config run.toml [--machine m.json] [--dot m.dot]
//   bbcstl simulate    --config run.toml (--word a,b,c | --word-file w.txt) [--output t.csv]
//   bbcstl check-model --config run.toml --machine m.json [--spec F]...
//   bbcstl report      --input r.json... [--format csv|json] [--summary]
//
// Exit status: 0 completed, 1 usage or configuration error, 2 adapter failure.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bbcstl/bbcstl.hpp"

namespace {

using namespace bbcstl;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAdapter = 2;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::string strategy;
  std::optional<std::size_t> max_runs;
  std::optional<double> timeout;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--strategy", o.strategy, "Equivalence-testing strategy")->check(CLI::IsMember({"random", "hc", "ga"}));
  cmd->add_option("--max-runs", o.max_runs, "Budget of fresh simulation runs");
  cmd->add_option("--timeout", o.timeout, "Wall-clock budget in seconds");
}

RunConfig load(const std::string& path, const Overrides& o) {
  RunConfig cfg = load_run_config(path);
  if (o.seed) cfg.seed = o.seed;
  if (!o.strategy.empty()) cfg.search.kind = parse_strategy(o.strategy);
  if (o.max_runs) cfg.max_runs = *o.max_runs;
  if (o.timeout) cfg.timeout_seconds = *o.timeout;
  cfg.validate();
  return cfg;
}

void write_file(const std::string& path, const std::string& text) {
  if (const auto dir = fs::path(path).parent_path(); !dir.empty()) fs::create_directories(dir);
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const std::string& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::vector<std::string> split_word(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string interval_text(const RobustInterval& r) {
  auto ext = [](ExtReal x) { return std::isinf(x) ? std::string(x > 0 ? "inf" : "-inf") : format_number(x); };
  return "[" + ext(r.lo) + ", " + ext(r.hi) + "]";
}

// ---- falsify ----------------------------------------------------------------

struct FalsifyArgs {
  std::string config;
  Overrides overrides;
  std::string output;
  std::string csv;
  std::string machine;
  std::string dot;
  bool canonical = false;
};

int cmd_falsify(const FalsifyArgs& a) {
  const RunConfig cfg = load(a.config, a.overrides);
  const BbcOutcome o = run_bbc(cfg);
  const nlohmann::json doc = outcome_to_json(o, cfg);
  const std::string text = a.canonical ? canonical_text(doc) : doc.dump(2) + "\n";

  std::string output = a.output, csv = a.csv, machine = a.machine, dot = a.dot;
  if (!cfg.output_directory.empty()) {
    const fs::path dir(cfg.output_directory);
    if (output.empty()) output = (dir / "results.json").string();
    if (csv.empty()) csv = (dir / "results.csv").string();
    if (machine.empty()) machine = (dir / "machine.json").string();
    if (dot.empty()) dot = (dir / "machine.dot").string();
  }
  if (!output.empty()) write_file(output, text);
  if (!csv.empty()) {
    std::ostringstream os;
    write_spec_csv(os, {{output.empty() ? "run" : output, doc}});
    write_file(csv, os.str());
  }
  if (o.machine) {
    if (!machine.empty()) write_file(machine, to_portable(*o.machine).dump(2) + "\n");
    if (!dot.empty()) write_file(dot, to_dot(*o.machine));
  }

  if (output.empty()) {
    std::cout << text;
  } else {
    for (std::size_t i = 0; i < o.specs.size(); ++i) {
      const auto& s = o.specs[i];
      std::cout << std::setw(3) << i << "  " << std::left << std::setw(14) << to_string(s.status) << std::right
                << " runs=" << s.runs_at_verdict << "  " << s.text << "\n";
    }
    std::cout << "falsified " << o.count(SpecStatus::Falsified) << "/" << o.specs.size() << ", "
              << o.totals.runs << " simulation runs, " << o.totals.refinements << " refinements, "
              << (o.machine ? o.machine->size() : 0) << " hypothesis states, stop: " << o.stop_reason << "\n";
  }
  if (!o.aborted.empty()) {
    std::cerr << "error: adapter failure: " << o.aborted << "\n";
    return kExitAdapter;
  }
  return kExitOk;
}

// ---- monitor ----------------------------------------------------------------

struct MonitorArgs {
  std::string formula;
  std::string trace;
  std::string config;
  std::vector<std::string> discrete;
  std::optional<double> margin;
  bool json = false;
};

int cmd_monitor(const MonitorArgs& a) {
  const ConcreteTrace t = load_trace_csv(a.trace);
  VariableDecls vars;
  double margin = 1.0;
  std::vector<std::string> discrete = a.discrete;
  if (!a.config.empty()) {
    const RunConfig cfg = load_run_config(a.config);
    margin = cfg.equality_margin;
    for (const auto& d : cfg.outputs) {
      if (d.discrete) discrete.push_back(d.name);
    }
  }
  if (a.margin) margin = *a.margin;
  for (const auto& v : t.variables) {
    vars.push_back({v, std::find(discrete.begin(), discrete.end(), v) != discrete.end()});
  }
  const Formula f = parse_formula(a.formula, vars);
  const RobustInterval r = fin_robust(f, t, 0, {margin});
  const Verdict v = verdict_of(r);
  if (a.json) {
    nlohmann::json doc = {{"formula", a.formula},
                          {"core", to_string(f)},
                          {"length", t.size()},
                          {"horizon", horizon(f) == kInfinity ? nlohmann::json("inf") : nlohmann::json(horizon(f))},
                          {"verdict", to_string(v)},
                          {"robustness", interval_to_json(r)}};
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "verdict: " << to_string(v) << "\n";
    std::cout << "robustness: " << interval_text(r) << "\n";
  }
  return kExitOk;
}

// ---- learn ------------------------------------------------------------------

struct LearnArgs {
  std::string config;
  Overrides overrides;
  std::string machine;
  std::string dot;
  std::string output;
};

int cmd_learn(const LearnArgs& a) {
  const RunConfig cfg = load(a.config, a.overrides);
  const LearnOutcome o = learn_model(cfg);
  std::string machine = a.machine, dot = a.dot;
  if (!cfg.output_directory.empty()) {
    const fs::path dir(cfg.output_directory);
    if (machine.empty()) machine = (dir / "machine.json").string();
    if (dot.empty()) dot = (dir / "machine.dot").string();
  }
  if (o.machine) {
    const std::string doc = to_portable(*o.machine).dump(2) + "\n";
    if (!machine.empty()) write_file(machine, doc);
    else std::cout << doc;
    if (!dot.empty()) write_file(dot, to_dot(*o.machine));
  }
  if (!a.output.empty()) write_file(a.output, learn_to_json(o, cfg).dump(2) + "\n");
  std::cerr << (o.machine ? o.machine->size() : 0) << " states, " << o.totals.runs << " simulation runs, "
            << o.totals.refinements << " refinements, stop: " << o.stop_reason << "\n";
  if (!o.aborted.empty()) {
    std::cerr << "error: adapter failure: " << o.aborted << "\n";
    return kExitAdapter;
  }
  return kExitOk;
}

// ---- simulate ---------------------------------------------------------------

struct SimulateArgs {
  std::string config;
  std::string word;
  std::string word_file;
  std::string output;
  bool with_inputs = false;
};

int cmd_simulate(const SimulateArgs& a) {
  const RunConfig cfg = load(a.config, {});
  std::vector<std::string> names = split_word(a.word_file.empty() ? a.word : read_file(a.word_file));
  const InputMapper mapper = cfg.input_mapper();
  const Word w = mapper.word(names);
  Simulator sim(cfg.make_adapter(), mapper);
  ConcreteTrace t = sim.simulate(w);
  if (a.with_inputs) {
    const ConcreteTrace in = mapper.concretize(w);
    ConcreteTrace both{in.variables, in.samples};
    both.variables.insert(both.variables.end(), t.variables.begin(), t.variables.end());
    for (std::size_t i = 0; i < t.size(); ++i) {
      both.samples[i].insert(both.samples[i].end(), t.samples[i].begin(), t.samples[i].end());
    }
    t = std::move(both);
  }
  std::ostringstream os;
  write_trace_csv(os, t);
  if (a.output.empty()) std::cout << os.str();
  else write_file(a.output, os.str());
  return kExitOk;
}

// ---- check-model ------------------------------------------------------------

struct CheckModelArgs {
  std::string config;
  std::string machine;
  std::vector<std::string> specs;
  std::string output;
};

int cmd_check_model(const CheckModelArgs& a) {
  const RunConfig cfg = load(a.config, {});
  const MealyMachine m = from_portable(read_json(a.machine));
  const ModelCheckReport r = check_saved_model(m, a.specs.empty() ? cfg.specs : a.specs, cfg);
  const std::string text = model_check_to_json(r).dump(2) + "\n";
  if (a.output.empty()) {
    std::cout << text;
  } else {
    write_file(a.output, text);
    std::cout << r.hypothesis_counterexamples << " hypothesis counterexamples, " << r.confirmed_counterexamples
              << " confirmed on the system\n";
  }
  return kExitOk;
}

// ---- report -----------------------------------------------------------------

struct ReportArgs {
  std::vector<std::string> inputs;
  std::string format = "csv";
  bool summary = false;
  std::string output;
};

int cmd_report(const ReportArgs& a) {
  std::vector<std::pair<std::string, nlohmann::json>> docs;
  for (const auto& p : a.inputs) docs.emplace_back(fs::path(p).stem().string(), read_json(p));
  std::ostringstream os;
  if (a.format == "json") {
    os << summary_json(docs).dump(2) << "\n";
  } else if (a.summary) {
    write_summary_csv(os, docs);
  } else {
    write_spec_csv(os, docs);
  }
  if (a.output.empty()) std::cout << os.str();
  else write_file(a.output, os.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robustness-guided black-box checking of STL specifications"};
  app.require_subcommand(1);

  FalsifyArgs fa;
  auto* falsify = app.add_subcommand("falsify", "Falsify the configured specifications");
  falsify->add_option("--config", fa.config, "Run configuration")->required()->check(CLI::ExistingFile);
  add_overrides(falsify, fa.overrides);
  falsify->add_option("--output", fa.output, "Result document (JSON)");
  falsify->add_option("--csv", fa.csv, "Per-spec CSV rows");
  falsify->add_option("--machine", fa.machine, "Learned machine document");
  falsify->add_option("--dot", fa.dot, "Learned machine as DOT");
  falsify->add_flag("--canonical", fa.canonical, "Omit wall-clock timing from the result document");

  MonitorArgs ma;
  auto* monitor = app.add_subcommand("monitor", "Robustness and verdict of a trace");
  monitor->add_option("--formula", ma.formula, "STL formula")->required();
  monitor->add_option("--trace", ma.trace, "Trace CSV with header row")->required()->check(CLI::ExistingFile);
  monitor->add_option("--config", ma.config, "Run configuration for variable declarations")->check(CLI::ExistingFile);
  monitor->add_option("--discrete", ma.discrete, "Discrete-valued variables")->delimiter(',');
  monitor->add_option("--margin", ma.margin, "Robustness margin of equality atoms");
  monitor->add_flag("--json", ma.json, "JSON output");

  LearnArgs la;
  auto* learn = app.add_subcommand("learn", "Learn a Mealy machine of the system");
  learn->add_option("--config", la.config, "Run configuration")->required()->check(CLI::ExistingFile);
  add_overrides(learn, la.overrides);
  learn->add_option("--machine", la.machine, "Machine document output");
  learn->add_option("--dot", la.dot, "DOT output");
  learn->add_option("--output", la.output, "Learning statistics (JSON)");

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Run the system on an input word");
  simulate->add_option("--config", sa.config, "Run configuration")->required()->check(CLI::ExistingFile);
  auto* word = simulate->add_option("--word", sa.word, "Input symbols separated by commas or spaces");
  auto* word_file = simulate->add_option("--word-file", sa.word_file, "File of input symbols")->check(CLI::ExistingFile);
  word->excludes(word_file);
  simulate->add_option("--output", sa.output, "Trace CSV output");
  simulate->add_flag("--inputs", sa.with_inputs, "Include input columns");

  CheckModelArgs ca;
  auto* check = app.add_subcommand("check-model", "Model check a saved machine and replay witnesses");
  check->add_option("--config", ca.config, "Run configuration")->required()->check(CLI::ExistingFile);
  check->add_option("--machine", ca.machine, "Machine document")->required()->check(CLI::ExistingFile);
  check->add_option("--spec", ca.specs, "Specification (repeatable; defaults to the config's)");
  check->add_option("--output", ca.output, "Report output (JSON)");

  ReportArgs ra;
  auto* report = app.add_subcommand("report", "Render result documents");
  report->add_option("--input", ra.inputs, "Result documents")->required()->check(CLI::ExistingFile);
  report->add_option("--format", ra.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  report->add_flag("--summary", ra.summary, "One row per run instead of per spec");
  report->add_option("--output", ra.output, "Output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*falsify) return cmd_falsify(fa);
    if (*monitor) return cmd_monitor(ma);
    if (*learn) return cmd_learn(la);
    if (*simulate) {
      if (sa.word.empty() && sa.word_file.empty() && word->count() == 0) {
        std::cerr << "error: simulate needs --word or --word-file\n";
        return kExitUsage;
      }
      return cmd_simulate(sa);
    }
    if (*check) return cmd_check_model(ca);
    if (*report) return cmd_report(ra);
  } catch (const AdapterError& e) {
    std::cerr << "error: adapter failure: " << e.what() << "\n";
    return kExitAdapter;
  } catch (const BudgetExhausted& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
