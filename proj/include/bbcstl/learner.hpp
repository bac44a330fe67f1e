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
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "bbcstl/abstraction.hpp"
#include "bbcstl/error.hpp"
#include "bbcstl/mealy.hpp"

namespace bbcstl {

/// Answers membership queries: the abstract output trace of the system on a
/// word. Implementations must be deterministic and prefix-consistent.
class MembershipOracle {
 public:
  virtual ~MembershipOracle() = default;

  BitsTrace query(const Word& w) {
    ++queries_;
    return answer(w);
  }

  std::size_t queries() const { return queries_; }

  /// Queries that could not be answered from a cache.
  virtual std::size_t fresh_queries() const { return queries_; }

  virtual std::size_t alphabet_size() const = 0;

 protected:
  virtual BitsTrace answer(const Word& w) = 0;

 private:
  std::size_t queries_ = 0;
};

/// Oracle backed by an explicit machine; the exact target in learner tests.
class MachineOracle : public MembershipOracle {
 public:
  explicit MachineOracle(MealyMachine m) : machine_(std::move(m)) {}
  std::size_t alphabet_size() const override { return machine_.alphabet_size(); }
  const MealyMachine& machine() const { return machine_; }

 protected:
  BitsTrace answer(const Word& w) override { return machine_.run(w); }

 private:
  MealyMachine machine_;
};

inline Word concat(const Word& a, const Word& b) {
  Word w = a;
  w.insert(w.end(), b.begin(), b.end());
  return w;
}

/// L*-style observation table for Mealy machines. A cell holds the last output
/// of the membership answer on prefix.suffix.
struct ObservationTable {
  using Row = std::vector<Bits>;

  std::vector<Word> prefixes;  // S, prefix-closed, prefixes[0] is the empty word
  std::vector<Word> suffixes;  // E, suffixes[a] == {a} for every symbol a
  std::map<Word, Row> rows;    // rows of S and S.Sigma
};

/// Active learner: L* adapted to Mealy machines with Rivest-Schapire
/// counterexample decomposition. Only the distinguishing suffix found by the
/// binary search is added to E.
class MealyLearner {
 public:
  MealyLearner(MembershipOracle& oracle, std::vector<std::string> sigma,
               std::vector<std::string> propositions)
      : oracle_(oracle), sigma_(std::move(sigma)), propositions_(std::move(propositions)) {
    if (sigma_.size() != oracle_.alphabet_size()) throw LearnerError("alphabet size mismatch");
  }

  const MealyMachine& learn_initial() {
    table_ = {};
    table_.prefixes.push_back({});
    for (Symbol a = 0; a < sigma_.size(); ++a) table_.suffixes.push_back({a});
    add_prefix({});
    close_and_build();
    return hypothesis_;
  }

  /// One refinement step: adds the distinguishing suffix extracted from
  /// `cex` and re-closes the table. The new hypothesis has more states or a
  /// corrected output, though it may still disagree with the oracle on `cex`.
  /// Throws LearnerError if `cex` is not a counterexample to begin with.
  const MealyMachine& refine(const Word& cex) {
    if (oracle_.query(cex) == hypothesis_.run(cex)) {
      throw LearnerError("not a counterexample");
    }
    add_distinguishing_suffix(cex);
    close_and_build();
    ++refinements_;
    return hypothesis_;
  }

  const MealyMachine& hypothesis() const { return hypothesis_; }
  const ObservationTable& table() const { return table_; }
  std::size_t refinements() const { return refinements_; }

  /// Access word of each hypothesis location.
  const std::vector<Word>& access_words() const { return table_.prefixes; }

 private:
  // Fills the missing cells of the rows `us`, adding rows not yet present.
  // Queries run longest first so that shorter words hit the prefix cache.
  void fill(const std::vector<Word>& us) {
    struct Cell {
      Word word;
      Bits* slot;
    };
    std::vector<Cell> cells;
    for (const auto& u : us) {
      auto& row = table_.rows[u];
      const std::size_t have = row.size();
      row.resize(table_.suffixes.size());
      for (std::size_t i = have; i < row.size(); ++i) cells.push_back({concat(u, table_.suffixes[i]), &row[i]});
    }
    std::stable_sort(cells.begin(), cells.end(),
                     [](const Cell& a, const Cell& b) { return a.word.size() > b.word.size(); });
    for (auto& c : cells) *c.slot = oracle_.query(c.word).back();
  }

  void add_prefix(const Word& s) {
    std::vector<Word> us{s};
    for (Symbol a = 0; a < sigma_.size(); ++a) {
      us.push_back(s);
      us.back().push_back(a);
    }
    fill(us);
  }

  void close_and_build() {
    std::vector<Word> all;
    for (const auto& [w, row] : table_.rows) all.push_back(w);
    fill(all);
    // Close: promote any S.Sigma row not present among the S rows.
    std::map<ObservationTable::Row, std::size_t> index;
    for (std::size_t i = 0; i < table_.prefixes.size(); ++i) {
      const auto& row = table_.rows.at(table_.prefixes[i]);
      if (!index.emplace(row, i).second) {
        throw LearnerError("observation table inconsistent: two prefixes share a row");
      }
    }
    for (std::size_t i = 0; i < table_.prefixes.size(); ++i) {
      for (Symbol a = 0; a < sigma_.size(); ++a) {
        Word sa = table_.prefixes[i];
        sa.push_back(a);
        const auto& row = table_.rows.at(sa);
        if (index.find(row) == index.end()) {
          index.emplace(row, table_.prefixes.size());
          table_.prefixes.push_back(sa);
          add_prefix(sa);
        }
      }
    }
    std::vector<std::vector<MealyMachine::Transition>> transitions(table_.prefixes.size());
    for (std::size_t i = 0; i < table_.prefixes.size(); ++i) {
      const auto& row = table_.rows.at(table_.prefixes[i]);
      for (Symbol a = 0; a < sigma_.size(); ++a) {
        Word sa = table_.prefixes[i];
        sa.push_back(a);
        transitions[i].push_back({row[a], index.at(table_.rows.at(sa))});
      }
    }
    hypothesis_ = MealyMachine(sigma_, propositions_, 0, std::move(transitions));
  }

  // Location reached by the hypothesis after the first i symbols of w.
  std::size_t location_after(const Word& w, std::size_t i) const {
    std::size_t loc = hypothesis_.initial();
    for (std::size_t k = 0; k < i; ++k) loc = hypothesis_.transition(loc, w[k]).target;
    return loc;
  }

  // Whether running the oracle from the access word of the location after
  // w[:i] agrees with the hypothesis on the remaining suffix w[i:].
  bool agrees_from(const Word& w, std::size_t i) {
    const std::size_t loc = location_after(w, i);
    const Word& access = table_.prefixes[loc];
    Word rest(w.begin() + static_cast<std::ptrdiff_t>(i), w.end());
    BitsTrace sys = oracle_.query(concat(access, rest));
    BitsTrace hyp = hypothesis_.run(concat(access, rest));
    return std::equal(sys.begin() + static_cast<std::ptrdiff_t>(access.size()), sys.end(),
                      hyp.begin() + static_cast<std::ptrdiff_t>(access.size()));
  }

  void add_distinguishing_suffix(const Word& cex) {
    // agrees_from(0) is false (cex is a counterexample), agrees_from(|cex|) is
    // trivially true; binary search for an adjacent false/true pair.
    std::size_t lo = 0, hi = cex.size();
    while (hi - lo > 1) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (agrees_from(cex, mid)) hi = mid;
      else lo = mid;
    }
    // v = cex[lo+1:] separates access(q_lo).a from access(q_{lo+1}). Cut it at
    // the first differing output so the last output alone distinguishes.
    const std::size_t loc = location_after(cex, lo);
    Word ua = table_.prefixes[loc];
    ua.push_back(cex[lo]);
    const Word& target = table_.prefixes[location_after(cex, lo + 1)];
    Word v(cex.begin() + static_cast<std::ptrdiff_t>(lo) + 1, cex.end());
    BitsTrace a = oracle_.query(concat(ua, v));
    BitsTrace b = oracle_.query(concat(target, v));
    std::size_t cut = 0;
    while (cut < v.size() && a[ua.size() + cut] == b[target.size() + cut]) ++cut;
    if (cut == v.size()) {
      throw LearnerError("counterexample analysis found no distinguishing suffix");
    }
    v.resize(cut + 1);
    for (const auto& e : table_.suffixes) {
      if (e == v) throw LearnerError("distinguishing suffix already in the table");
    }
    table_.suffixes.push_back(std::move(v));
  }

  MembershipOracle& oracle_;
  std::vector<std::string> sigma_;
  std::vector<std::string> propositions_;
  ObservationTable table_;
  MealyMachine hypothesis_;
  std::size_t refinements_ = 0;
};

}  // namespace bbcstl
