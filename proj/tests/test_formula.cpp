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

namespace {

const VariableDecls kVars{{"velocity", false}, {"rotation", false}, {"gear", true}, {"x", false}, {"y", false}};

Formula atom(const std::string& v, Comparator c, double k) { return Formula::atom(AtomPredicate{v, c, k}); }

}  // namespace

TEST(Parser, GloballyDesugarsToNegatedUntil) {
  const Formula f = parse_formula("[] (velocity < 120.0)", kVars);
  const Formula expected = Formula::negation(
      Formula::until(Formula::top(), Formula::negation(atom("velocity", Comparator::Less, 120.0)), {0, kInfinity}));
  EXPECT_EQ(f, expected);
  EXPECT_EQ(parse_formula("G (velocity < 120.0)", kVars), expected);
}

TEST(Parser, BoundedUntil) {
  const Formula f = parse_formula("(x > 1) U_[2,5] (y < 2)", kVars);
  ASSERT_EQ(f.kind(), NodeKind::Until);
  EXPECT_EQ(f.bound().lo, 2u);
  EXPECT_EQ(f.bound().hi, 5u);
  EXPECT_EQ(f.left(), atom("x", Comparator::Greater, 1));
  EXPECT_EQ(f.right(), atom("y", Comparator::Less, 2));
}

TEST(Parser, MissingConstantIsSyntaxError) {
  try {
    parse_formula("[] (velocity < )", kVars);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 15u);
  }
}

TEST(Parser, Errors) {
  EXPECT_THROW(parse_formula("speed < 3", kVars), ParseError);
  EXPECT_THROW(parse_formula("velocity == 3", kVars), ParseError);
  EXPECT_THROW(parse_formula("velocity != 3", kVars), ParseError);
  EXPECT_THROW(parse_formula("F_[5,2] (x > 0)", kVars), ParseError);
  EXPECT_THROW(parse_formula("(x > 0", kVars), ParseError);
  EXPECT_THROW(parse_formula("x > 0 y < 1", kVars), ParseError);
  EXPECT_THROW(parse_formula("", kVars), ParseError);
  EXPECT_NO_THROW(parse_formula("gear == 3", kVars));
  EXPECT_NO_THROW(parse_formula("gear != 3", kVars));
}

TEST(Parser, SugarForms) {
  const Formula p = atom("x", Comparator::Greater, 0);
  const Formula q = atom("y", Comparator::Less, 1);
  EXPECT_EQ(parse_formula("x >= 1", kVars), Formula::negation(atom("x", Comparator::Less, 1)));
  EXPECT_EQ(parse_formula("x <= 1", kVars), Formula::negation(atom("x", Comparator::Greater, 1)));
  EXPECT_EQ(parse_formula("x > 0 && y < 1", kVars), conjunction(p, q));
  EXPECT_EQ(parse_formula("x > 0 -> y < 1", kVars), implies(p, q));
  EXPECT_EQ(parse_formula("<> x > 0", kVars), eventually(p));
  EXPECT_EQ(parse_formula("F_[1,3] x > 0", kVars), eventually(p, {1, 3}));
  EXPECT_EQ(parse_formula("G_[0,inf] x > 0", kVars), globally(p));
  EXPECT_EQ(parse_formula("X x > 0", kVars), Formula::next(p));
  EXPECT_EQ(parse_formula("x > 0 U y < 1", kVars), Formula::until(p, q, {}));
  EXPECT_EQ(parse_formula("false", kVars), bottom());
  EXPECT_EQ(parse_formula("true", kVars), Formula::top());
}

TEST(Parser, Precedence) {
  const Formula p = atom("x", Comparator::Greater, 0);
  const Formula q = atom("y", Comparator::Less, 1);
  const Formula r = atom("x", Comparator::Less, 5);
  // && binds tighter than ||, which binds tighter than ->.
  EXPECT_EQ(parse_formula("x > 0 || y < 1 && x < 5", kVars), Formula::disjunction(p, conjunction(q, r)));
  EXPECT_EQ(parse_formula("x > 0 || y < 1 -> x < 5", kVars), implies(Formula::disjunction(p, q), r));
  // U binds tighter than &&; unary operators tighter than U.
  EXPECT_EQ(parse_formula("x > 0 && y < 1 U x < 5", kVars), conjunction(p, Formula::until(q, r, {})));
  EXPECT_EQ(parse_formula("!x > 0 U y < 1", kVars), Formula::until(Formula::negation(p), q, {}));
  EXPECT_EQ(parse_formula("x > 0 -> y < 1 -> x < 5", kVars), implies(p, implies(q, r)));
}

TEST(Parser, NumbersAndWhitespace) {
  EXPECT_EQ(parse_formula("  x>-2.5e1 ", kVars), atom("x", Comparator::Greater, -25.0));
  EXPECT_EQ(parse_formula("x < +3", kVars), atom("x", Comparator::Less, 3.0));
}

TEST(Printer, RoundTripsRandomFormulas) {
  Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    const Formula f = oracle::random_formula(rng, 4);
    EXPECT_EQ(parse_formula(to_string(f), oracle::xy()), f) << to_string(f);
  }
}

TEST(Printer, RoundTripsDiscreteAndUnbounded) {
  for (const char* text : {"[] ((gear == 3) -> (velocity > 20))", "(velocity < 1) U (rotation > 2)",
                           "X X [] <> (gear != 2)"}) {
    const Formula f = parse_formula(text, kVars);
    EXPECT_EQ(parse_formula(to_string(f), kVars), f) << text;
  }
}

TEST(Horizon, Examples) {
  EXPECT_EQ(horizon(parse_formula("velocity < 120", kVars)), 0u);
  EXPECT_EQ(horizon(parse_formula("X ((x > 0) U_[0,8] (y > 0))", kVars)), 9u);
  EXPECT_EQ(horizon(parse_formula("G (x > 0)", kVars)), kInfinity);
  EXPECT_EQ(horizon(Formula::top()), 0u);
  EXPECT_EQ(horizon(parse_formula("G_[0,3] F_[1,2] x > 0", kVars)), 5u);
  EXPECT_EQ(horizon(parse_formula("X G (x > 0)", kVars)), kInfinity);
}

TEST(Formula, CoreNodeKindsOnly) {
  const Formula f = parse_formula("G_[0,4] (x >= 1 -> F_[1,2] y <= 0) && !(gear != 3)", kVars);
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    switch (g.kind()) {
      case NodeKind::True:
      case NodeKind::Atom: return;
      case NodeKind::Not:
      case NodeKind::Next: walk(g.child()); return;
      case NodeKind::Or:
      case NodeKind::Until: walk(g.left()); walk(g.right()); return;
      case NodeKind::Prop: FAIL() << "proposition in a parsed formula";
    }
  };
  walk(f);
}

TEST(Formula, UntilRejectsInvertedInterval) {
  EXPECT_THROW(Formula::until(Formula::top(), Formula::top(), {3, 2}), Error);
}

TEST(Formula, CollectAtomsDeduplicates) {
  std::vector<AtomPredicate> atoms;
  collect_atoms(parse_formula("G (x < 1) && F (x < 1) || y > 2", kVars), atoms);
  ASSERT_EQ(atoms.size(), 2u);
  EXPECT_EQ(atoms[0], (AtomPredicate{"x", Comparator::Less, 1}));
  EXPECT_EQ(atoms[1], (AtomPredicate{"y", Comparator::Greater, 2}));
}
