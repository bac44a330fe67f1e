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

#include <cstddef>
#include <deque>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bbcstl/abstraction.hpp"
#include "bbcstl/error.hpp"

namespace bbcstl {

/// Deterministic, complete Mealy machine over input symbols 0..|sigma|-1 with
/// proposition bit-vectors as outputs. Outputs label transitions.
class MealyMachine {
 public:
  struct Transition {
    Bits output;
    std::size_t target = 0;
    friend bool operator==(const Transition&, const Transition&) = default;
  };

  MealyMachine() = default;

  /// `transitions[l][a]` is the transition from location l on symbol a.
  MealyMachine(std::vector<std::string> sigma, std::vector<std::string> propositions,
               std::size_t initial, std::vector<std::vector<Transition>> transitions)
      : sigma_(std::move(sigma)),
        propositions_(std::move(propositions)),
        initial_(initial),
        table_(std::move(transitions)) {
    validate();
  }

  std::size_t size() const { return table_.size(); }
  std::size_t alphabet_size() const { return sigma_.size(); }
  std::size_t initial() const { return initial_; }
  const std::vector<std::string>& sigma() const { return sigma_; }
  const std::vector<std::string>& propositions() const { return propositions_; }
  const Transition& transition(std::size_t loc, Symbol a) const { return table_[loc][a]; }

  BitsTrace run(const Word& w) const {
    BitsTrace out;
    out.reserve(w.size());
    std::size_t loc = initial_;
    for (Symbol a : w) {
      if (a >= sigma_.size()) throw Error("unknown input symbol #" + std::to_string(a));
      const auto& t = table_[loc][a];
      out.push_back(t.output);
      loc = t.target;
    }
    return out;
  }

  friend bool operator==(const MealyMachine&, const MealyMachine&) = default;

 private:
  void validate() const {
    if (sigma_.empty()) throw Error("Mealy machine needs a non-empty alphabet");
    if (table_.empty()) throw Error("Mealy machine needs at least one location");
    if (initial_ >= table_.size()) throw Error("initial location out of range");
    for (const auto& row : table_) {
      if (row.size() != sigma_.size()) throw Error("transition table is not total");
      for (const auto& t : row) {
        if (t.target >= table_.size()) throw Error("transition target out of range");
        if (t.output.size() != propositions_.size()) throw Error("output width mismatch");
      }
    }
  }

  std::vector<std::string> sigma_;
  std::vector<std::string> propositions_;
  std::size_t initial_ = 0;
  std::vector<std::vector<Transition>> table_;
};

/// Shortest word (ties broken by symbol order) on which the machines' outputs
/// differ, or nullopt when they are equivalent.
inline std::optional<Word> distinguish(const MealyMachine& m1, const MealyMachine& m2) {
  if (m1.alphabet_size() != m2.alphabet_size()) throw Error("machines have different alphabets");
  const std::size_t n2 = m2.size();
  std::vector<std::ptrdiff_t> parent(m1.size() * n2, -1);
  std::vector<Symbol> via(m1.size() * n2, 0);
  std::vector<bool> seen(m1.size() * n2, false);
  std::deque<std::size_t> queue;

  auto word_to = [&](std::size_t node) {
    Word w;
    for (std::ptrdiff_t n = static_cast<std::ptrdiff_t>(node); parent[static_cast<std::size_t>(n)] >= 0;
         n = parent[static_cast<std::size_t>(n)]) {
      w.push_back(via[static_cast<std::size_t>(n)]);
    }
    return Word(w.rbegin(), w.rend());
  };

  const std::size_t start = m1.initial() * n2 + m2.initial();
  seen[start] = true;
  queue.push_back(start);
  while (!queue.empty()) {
    const std::size_t node = queue.front();
    queue.pop_front();
    const std::size_t l1 = node / n2, l2 = node % n2;
    for (Symbol a = 0; a < m1.alphabet_size(); ++a) {
      const auto& t1 = m1.transition(l1, a);
      const auto& t2 = m2.transition(l2, a);
      if (t1.output != t2.output) {
        Word w = word_to(node);
        w.push_back(a);
        return w;
      }
      const std::size_t next = t1.target * n2 + t2.target;
      if (!seen[next]) {
        seen[next] = true;
        parent[next] = static_cast<std::ptrdiff_t>(node);
        via[next] = a;
        queue.push_back(next);
      }
    }
  }
  return std::nullopt;
}

/// Number of locations reachable from the initial one.
inline std::size_t reachable_size(const MealyMachine& m) {
  std::vector<bool> seen(m.size(), false);
  std::vector<std::size_t> stack{m.initial()};
  seen[m.initial()] = true;
  std::size_t count = 0;
  while (!stack.empty()) {
    std::size_t l = stack.back();
    stack.pop_back();
    ++count;
    for (Symbol a = 0; a < m.alphabet_size(); ++a) {
      std::size_t t = m.transition(l, a).target;
      if (!seen[t]) {
        seen[t] = true;
        stack.push_back(t);
      }
    }
  }
  return count;
}

/// Size of the minimal machine equivalent to `m`, by partition refinement over
/// the reachable part.
inline std::size_t minimal_size(const MealyMachine& m) {
  const std::size_t n = m.size();
  std::vector<std::size_t> block(n, 0);
  std::size_t blocks = 0;
  // Initial partition: identical output rows.
  {
    std::vector<std::vector<Bits>> keys;
    for (std::size_t l = 0; l < n; ++l) {
      std::vector<Bits> row;
      for (Symbol a = 0; a < m.alphabet_size(); ++a) row.push_back(m.transition(l, a).output);
      std::size_t b = 0;
      while (b < keys.size() && keys[b] != row) ++b;
      if (b == keys.size()) keys.push_back(row);
      block[l] = b;
    }
    blocks = keys.size();
  }
  while (true) {
    std::vector<std::vector<std::size_t>> keys;
    std::vector<std::size_t> next(n);
    for (std::size_t l = 0; l < n; ++l) {
      std::vector<std::size_t> key{block[l]};
      for (Symbol a = 0; a < m.alphabet_size(); ++a) key.push_back(block[m.transition(l, a).target]);
      std::size_t b = 0;
      while (b < keys.size() && keys[b] != key) ++b;
      if (b == keys.size()) keys.push_back(key);
      next[l] = b;
    }
    block = std::move(next);
    if (keys.size() == blocks) break;
    blocks = keys.size();
  }
  // Count blocks that contain a reachable location.
  std::vector<bool> seen(m.size(), false), used(blocks, false);
  std::vector<std::size_t> stack{m.initial()};
  seen[m.initial()] = true;
  while (!stack.empty()) {
    std::size_t l = stack.back();
    stack.pop_back();
    used[block[l]] = true;
    for (Symbol a = 0; a < m.alphabet_size(); ++a) {
      std::size_t t = m.transition(l, a).target;
      if (!seen[t]) {
        seen[t] = true;
        stack.push_back(t);
      }
    }
  }
  return static_cast<std::size_t>(std::count(used.begin(), used.end(), true));
}

// ---- serialization ---------------------------------------------------------

inline constexpr int kMachineDocumentVersion = 1;

inline std::string to_dot(const MealyMachine& m) {
  std::ostringstream os;
  os << "digraph mealy {\n";
  os << "  __start [shape=point];\n";
  for (std::size_t l = 0; l < m.size(); ++l) {
    os << "  s" << l << " [shape=circle, label=\"s" << l << "\"];\n";
  }
  os << "  __start -> s" << m.initial() << ";\n";
  for (std::size_t l = 0; l < m.size(); ++l) {
    for (Symbol a = 0; a < m.alphabet_size(); ++a) {
      const auto& t = m.transition(l, a);
      os << "  s" << l << " -> s" << t.target << " [label=\"" << m.sigma()[a] << " / "
         << to_string(t.output) << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

inline nlohmann::json to_portable(const MealyMachine& m) {
  nlohmann::json transitions = nlohmann::json::array();
  for (std::size_t l = 0; l < m.size(); ++l) {
    nlohmann::json row = nlohmann::json::array();
    for (Symbol a = 0; a < m.alphabet_size(); ++a) {
      const auto& t = m.transition(l, a);
      nlohmann::json bits = nlohmann::json::array();
      for (bool b : t.output) bits.push_back(b ? 1 : 0);
      row.push_back({{"out", bits}, {"to", t.target}});
    }
    transitions.push_back(std::move(row));
  }
  return {{"version", kMachineDocumentVersion},
          {"sigma", m.sigma()},
          {"propositions", m.propositions()},
          {"initial", m.initial()},
          {"transitions", std::move(transitions)}};
}

inline MealyMachine from_portable(const nlohmann::json& doc) {
  try {
    if (!doc.is_object()) throw Error("machine document is not an object");
    if (doc.at("version").get<int>() != kMachineDocumentVersion) {
      throw Error("unsupported machine document version");
    }
    auto sigma = doc.at("sigma").get<std::vector<std::string>>();
    auto props = doc.at("propositions").get<std::vector<std::string>>();
    auto initial = doc.at("initial").get<std::size_t>();
    std::vector<std::vector<MealyMachine::Transition>> table;
    for (const auto& row : doc.at("transitions")) {
      std::vector<MealyMachine::Transition> out;
      for (const auto& cell : row) {
        MealyMachine::Transition t;
        for (const auto& b : cell.at("out")) t.output.push_back(b.get<int>() != 0);
        auto to = cell.at("to").get<long long>();
        if (to < 0) throw Error("transition target out of range");
        t.target = static_cast<std::size_t>(to);
        out.push_back(std::move(t));
      }
      table.push_back(std::move(out));
    }
    return MealyMachine(std::move(sigma), std::move(props), initial, std::move(table));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed machine document: ") + e.what());
  }
}

}  // namespace bbcstl
