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
#include <unordered_map>
#include <vector>

#include "bbcstl/mealy.hpp"
#include "bbcstl/monitor.hpp"

namespace bbcstl {

struct CheckResult {
  enum class Status { NoBadPrefixWithinHorizon, BadPrefix, Inconclusive };

  Status status = Status::NoBadPrefixWithinHorizon;
  Word word;          // BadPrefix only
  BitsTrace outputs;  // machine outputs along `word`
  std::size_t explored = 0;

  bool bad() const { return status == Status::BadPrefix; }
};

inline const char* to_string(CheckResult::Status s) {
  switch (s) {
    case CheckResult::Status::NoBadPrefixWithinHorizon: return "no-bad-prefix";
    case CheckResult::Status::BadPrefix: return "bad-prefix";
    case CheckResult::Status::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct CheckOptions {
  std::size_t horizon = 30;
  std::size_t state_cap = 100'000;
};

/// Breadth-first search of the product of `m` with the progression monitor of
/// `propositional` for the shortest input word (lexicographically least among
/// equals) whose output trace is a bad prefix. Product states are pruned on
/// revisit since the residual carries every remaining obligation.
inline CheckResult find_bad_prefix(const MealyMachine& m, const Formula& propositional,
                                   CheckOptions opts = {}) {
  if (opts.horizon < 1) throw Error("checker horizon must be at least 1");
  MonitorStore store;
  const MonitorState root = store.from_formula(propositional);

  struct Entry {
    std::size_t loc;
    MonitorState residual;
    std::size_t depth;
    std::ptrdiff_t parent;
    Symbol via;
  };
  std::vector<Entry> entries;
  std::unordered_map<std::size_t, std::vector<std::pair<MonitorState, std::size_t>>> seen;
  auto visited = [&](std::size_t loc, MonitorState s) {
    auto& bucket = seen[loc];
    for (const auto& [r, idx] : bucket) {
      if (r == s) return true;
    }
    bucket.emplace_back(s, entries.size());
    return false;
  };

  CheckResult result;
  auto witness = [&](std::ptrdiff_t idx, Symbol last) {
    Word w{last};
    for (std::ptrdiff_t i = idx; entries[static_cast<std::size_t>(i)].parent >= 0;
         i = entries[static_cast<std::size_t>(i)].parent) {
      w.push_back(entries[static_cast<std::size_t>(i)].via);
    }
    result.status = CheckResult::Status::BadPrefix;
    result.word.assign(w.rbegin(), w.rend());
    result.outputs = m.run(result.word);
    result.explored = entries.size();
    return result;
  };

  if (root == store.bottom()) {
    result.status = CheckResult::Status::BadPrefix;
    result.explored = 1;
    return result;
  }
  visited(m.initial(), root);
  entries.push_back({m.initial(), root, 0, -1, 0});
  for (std::size_t head = 0; head < entries.size(); ++head) {
    const Entry cur = entries[head];
    if (cur.depth >= opts.horizon) continue;
    for (Symbol a = 0; a < m.alphabet_size(); ++a) {
      const auto& t = m.transition(cur.loc, a);
      const MonitorState next = store.progress(cur.residual, t.output);
      if (next == store.bottom()) return witness(static_cast<std::ptrdiff_t>(head), a);
      if (next == store.top() || visited(t.target, next)) continue;
      if (entries.size() >= opts.state_cap) {
        result.status = CheckResult::Status::Inconclusive;
        result.explored = entries.size();
        return result;
      }
      entries.push_back({t.target, next, cur.depth + 1, static_cast<std::ptrdiff_t>(head), a});
    }
  }
  result.explored = entries.size();
  return result;
}

}  // namespace bbcstl
