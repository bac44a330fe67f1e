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

#include <gtest/gtest.h>

#include "bbcstl/bbcstl.hpp"
#include "oracles.hpp"

using namespace bbcstl;
using T = MealyMachine::Transition;

namespace {

Formula prop_formula(const std::string& text) { return oracle::abc(text); }

Bits bits(bool a, bool b = false, bool c = false) { return {a, b, c}; }

// Location 0 emits `a` on symbol 0 and `b` on symbol 1; both loop.
MealyMachine two_symbols() {
  return MealyMachine({"s0", "s1"}, {"p0", "p1", "p2"}, 0, {{T{bits(true), 0}, T{bits(false, true), 0}}});
}

}  // namespace

TEST(Progress, Examples) {
  MonitorStore store;
  const MonitorState g = store.from_formula(prop_formula("G_[0,2] a"));
  MonitorState s = store.progress(g, bits(true));
  EXPECT_NE(s, store.bottom());
  EXPECT_NE(s, store.top());
  s = store.progress(s, bits(true));
  s = store.progress(s, bits(true));
  EXPECT_EQ(s, store.top());
  EXPECT_EQ(store.progress(g, bits(false)), store.bottom());

  const MonitorState f = store.from_formula(prop_formula("F_[1,2] b"));
  EXPECT_NE(store.progress(f, bits(false, true)), store.top());
  EXPECT_EQ(store.progress(store.progress(f, bits(false)), bits(false, true)), store.top());
  EXPECT_EQ(store.progress(store.progress(store.progress(f, bits(false)), bits(false)), bits(false)), store.bottom());

  const MonitorState x = store.from_formula(prop_formula("X c"));
  EXPECT_EQ(store.progress(x, bits(false)), store.lit(2, true));
  EXPECT_THROW(store.progress(store.lit(5, true), bits(true)), Error);
}

TEST(Progress, UntilNeedsLeftWhereRightIsMet) {
  MonitorStore store;
  const MonitorState u = store.from_formula(prop_formula("a U_[0,2] b"));
  EXPECT_EQ(store.progress(u, bits(true, true)), store.top());
  EXPECT_NE(store.progress(u, bits(false, true)), store.top());
  EXPECT_EQ(store.progress(store.progress(u, bits(true)), bits(false, true)), store.bottom());
}

TEST(Progress, NormalFormIsCanonical) {
  MonitorStore store;
  const MonitorState p = store.lit(0, true), q = store.lit(1, true), r = store.lit(2, false);
  EXPECT_EQ(store.conj({p, q, r}), store.conj({r, store.conj({q, p})}));
  EXPECT_EQ(store.disj({p, p}), p);
  EXPECT_EQ(store.conj({p, store.bottom()}), store.bottom());
  EXPECT_EQ(store.disj({q, store.top()}), store.top());
  EXPECT_EQ(store.conj({}), store.top());
  EXPECT_EQ(store.from_formula(prop_formula("!(a || b)")), store.conj({store.lit(0, false), store.lit(1, false)}));
  EXPECT_EQ(store.from_formula(prop_formula("!G_[0,3] a")), store.from_formula(prop_formula("F_[0,3] !a")));
  EXPECT_THROW(store.from_formula(parse_formula("x > 0", oracle::xy())), Error);
}

TEST(BooleanMonitor, Examples) {
  const Formula f = prop_formula("G_[0,20] (a -> G_[0,8] b)");
  BitsTrace t{bits(false), bits(false, true), bits(true, true), bits(false, true), bits(false, true)};
  EXPECT_EQ(boolean_monitor(f, t), MonitorVerdict::NotYetBad);
  t.push_back(bits(false));
  EXPECT_EQ(boolean_monitor(f, t), MonitorVerdict::Bad);
  EXPECT_EQ(boolean_monitor(f, {}), MonitorVerdict::NotYetBad);
  EXPECT_EQ(boolean_monitor(Formula::negation(Formula::top()), {}), MonitorVerdict::Bad);
  EXPECT_EQ(boolean_monitor(prop_formula("F_[0,2] a"), {bits(false), bits(false)}), MonitorVerdict::NotYetBad);
  EXPECT_EQ(boolean_monitor(prop_formula("F_[0,2] a"), {bits(false), bits(false), bits(false)}), MonitorVerdict::Bad);
}

TEST(FindBadPrefix, Examples) {
  const MealyMachine m = two_symbols();
  const CheckResult r = find_bad_prefix(m, prop_formula("G a"));
  ASSERT_TRUE(r.bad());
  EXPECT_EQ(r.word, (Word{1}));
  EXPECT_EQ(r.outputs, m.run(r.word));

  const CheckResult s = find_bad_prefix(m, prop_formula("G (a || b)"));
  EXPECT_EQ(s.status, CheckResult::Status::NoBadPrefixWithinHorizon);
  EXPECT_TRUE(s.word.empty());

  const CheckResult u = find_bad_prefix(m, prop_formula("G_[0,3] (a -> X a)"));
  ASSERT_TRUE(u.bad());
  EXPECT_EQ(u.word, (Word{0, 1}));

  const CheckResult e = find_bad_prefix(m, Formula::negation(Formula::top()));
  ASSERT_TRUE(e.bad());
  EXPECT_TRUE(e.word.empty());

  EXPECT_THROW(find_bad_prefix(m, prop_formula("G a"), {0, 10}), Error);
}

TEST(FindBadPrefix, HorizonLimitsDepth) {
  const MealyMachine m = two_symbols();
  const Formula f = prop_formula("F_[4,4] c");
  EXPECT_EQ(find_bad_prefix(m, f, {4, 1000}).status, CheckResult::Status::NoBadPrefixWithinHorizon);
  const CheckResult r = find_bad_prefix(m, f, {5, 1000});
  ASSERT_TRUE(r.bad());
  EXPECT_EQ(r.word, (Word{0, 0, 0, 0, 0}));
}

TEST(FindBadPrefix, StateCapGivesInconclusive) {
  Rng rng(51);
  const MealyMachine m = oracle::random_machine(rng, 8, 3, 3);
  const Formula f = prop_formula("G (F_[0,6] a || G_[0,6] b)");
  const CheckResult r = find_bad_prefix(m, f, {30, 5});
  if (!r.bad()) {
    EXPECT_EQ(r.status, CheckResult::Status::Inconclusive);
    EXPECT_LE(r.explored, 5u);
  }
  const CheckResult full = find_bad_prefix(two_symbols(), prop_formula("G (a || b)"), {30, 5});
  EXPECT_EQ(full.status, CheckResult::Status::NoBadPrefixWithinHorizon);
}

TEST(Properties, MatchesEnumerationOracle) {
  Rng rng(52);
  const auto templates = oracle::checker_templates();
  for (int i = 0; i < 10; ++i) {
    const MealyMachine m = oracle::random_machine(rng, 1 + rng.below(5), 2, 3);
    for (const Formula& f : templates) {
      const auto ref = oracle::enumerate_bad_prefix(m, f, 9);
      const CheckResult r = find_bad_prefix(m, f, {9, 100000});
      ASSERT_EQ(r.bad(), ref.found) << to_string(f);
      if (ref.found) {
        EXPECT_EQ(r.word, ref.word) << to_string(f);
      }
    }
  }
}

TEST(Properties, WitnessIsABadPrefix) {
  Rng rng(53);
  const auto templates = oracle::checker_templates();
  for (int i = 0; i < 40; ++i) {
    const MealyMachine m = oracle::random_machine(rng, 1 + rng.below(8), 1 + rng.below(4), 3);
    for (const Formula& f : templates) {
      const CheckResult r = find_bad_prefix(m, f, {12, 100000});
      if (!r.bad()) continue;
      EXPECT_EQ(r.outputs, m.run(r.word));
      EXPECT_EQ(oracle::kleene(f, r.outputs), oracle::K3::False) << to_string(f);
      EXPECT_EQ(boolean_monitor(f, r.outputs), MonitorVerdict::Bad);
      if (!r.word.empty()) {
        BitsTrace shorter(r.outputs.begin(), r.outputs.end() - 1);
        EXPECT_EQ(boolean_monitor(f, shorter), MonitorVerdict::NotYetBad);
      }
    }
  }
}

TEST(Properties, MonitorAgreesWithKleeneEvaluation) {
  Rng rng(54);
  for (int i = 0; i < 3000; ++i) {
    const Formula f = oracle::random_formula(rng, 4);
    const OutputMapper props = derive_output_mapper({f});
    const Formula p = propositionalize(f, props);
    const BitsTrace t = props.abstract_trace(oracle::random_trace(rng, rng.below(horizon(f) + 3)));
    EXPECT_EQ(boolean_monitor(p, t) == MonitorVerdict::Bad, oracle::kleene(p, t) == oracle::K3::False)
        << to_string(f) << " on " << t.size() << " steps";
  }
}

TEST(Properties, CompleteTraceVerdictMatchesTruth) {
  Rng rng(55);
  for (int i = 0; i < 3000; ++i) {
    const Formula f = oracle::random_formula(rng, 4);
    const OutputMapper props = derive_output_mapper({f});
    const Formula p = propositionalize(f, props);
    const BitsTrace t = props.abstract_trace(oracle::random_trace(rng, horizon(f) + 1));
    EXPECT_EQ(boolean_monitor(p, t) == MonitorVerdict::Bad, !oracle::holds(p, t)) << to_string(f);
  }
}
