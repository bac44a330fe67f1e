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
#include <array>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "bbcstl/error.hpp"

namespace bbcstl {

/// Used both for unbounded Until intervals and for infinite horizons.
inline constexpr std::size_t kInfinity = std::numeric_limits<std::size_t>::max();

inline std::size_t saturating_add(std::size_t a, std::size_t b) {
  return (a == kInfinity || b == kInfinity || a > kInfinity - b) ? kInfinity : a + b;
}

/// `!=` is sugar for `!(==)`, `>=` for `!(<)` and `<=` for `!(>)`.
enum class Comparator : std::uint8_t { Greater, Less, Equal };

inline const char* to_string(Comparator c) {
  switch (c) {
    case Comparator::Greater: return ">";
    case Comparator::Less: return "<";
    case Comparator::Equal: return "==";
  }
  return "?";
}

/// Atomic predicate `variable cmp constant`.
struct AtomPredicate {
  std::string variable;
  Comparator cmp = Comparator::Less;
  double constant = 0.0;

  bool holds(double value) const {
    switch (cmp) {
      case Comparator::Greater: return value > constant;
      case Comparator::Less: return value < constant;
      case Comparator::Equal: return value == constant;
    }
    return false;
  }

  friend bool operator==(const AtomPredicate&, const AtomPredicate&) = default;
  friend bool operator<(const AtomPredicate& a, const AtomPredicate& b) {
    return std::tie(a.variable, a.cmp, a.constant) < std::tie(b.variable, b.cmp, b.constant);
  }
};

/// Closed interval [lo, hi] of relative time steps; hi may be kInfinity.
struct TimeBound {
  std::size_t lo = 0;
  std::size_t hi = kInfinity;

  bool unbounded() const { return hi == kInfinity; }
  friend bool operator==(const TimeBound&, const TimeBound&) = default;
};

struct VariableDecl {
  std::string name;
  bool discrete = false;
};

using VariableDecls = std::vector<VariableDecl>;

enum class NodeKind : std::uint8_t { True, Atom, Prop, Not, Or, Until, Next };

/// Immutable core-syntax STL formula. Derived operators are built by the free
/// helpers below and never appear as node kinds. `Prop` leaves reference an
/// output-mapper proposition index and only occur after propositionalization.
class Formula {
 public:
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  struct Node {
    NodeKind kind = NodeKind::True;
    AtomPredicate atom;
    std::size_t prop = 0;
    TimeBound bound;
    std::array<NodePtr, 2> children;
  };

  Formula() : node_(top_node()) {}

  static Formula top() { return Formula(top_node()); }

  static Formula atom(AtomPredicate a) {
    Node n;
    n.kind = NodeKind::Atom;
    n.atom = std::move(a);
    return make(std::move(n));
  }

  static Formula prop(std::size_t index) {
    Node n;
    n.kind = NodeKind::Prop;
    n.prop = index;
    return make(std::move(n));
  }

  static Formula negation(const Formula& f) {
    Node n;
    n.kind = NodeKind::Not;
    n.children[0] = f.node_;
    return make(std::move(n));
  }

  static Formula disjunction(const Formula& a, const Formula& b) {
    Node n;
    n.kind = NodeKind::Or;
    n.children = {a.node_, b.node_};
    return make(std::move(n));
  }

  static Formula until(const Formula& a, const Formula& b, TimeBound bound) {
    if (bound.lo > bound.hi) {
      throw Error("until interval has lower bound above upper bound");
    }
    Node n;
    n.kind = NodeKind::Until;
    n.bound = bound;
    n.children = {a.node_, b.node_};
    return make(std::move(n));
  }

  static Formula next(const Formula& f) {
    Node n;
    n.kind = NodeKind::Next;
    n.children[0] = f.node_;
    return make(std::move(n));
  }

  NodeKind kind() const { return node_->kind; }
  const AtomPredicate& atom() const { return node_->atom; }
  std::size_t prop_index() const { return node_->prop; }
  const TimeBound& bound() const { return node_->bound; }
  Formula child() const { return Formula(node_->children[0]); }
  Formula left() const { return Formula(node_->children[0]); }
  Formula right() const { return Formula(node_->children[1]); }

  /// Identity of the shared node, usable as a memoization key.
  const Node* id() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case NodeKind::True: return true;
      case NodeKind::Atom: return a.atom() == b.atom();
      case NodeKind::Prop: return a.prop_index() == b.prop_index();
      case NodeKind::Not:
      case NodeKind::Next: return a.child() == b.child();
      case NodeKind::Or: return a.left() == b.left() && a.right() == b.right();
      case NodeKind::Until:
        return a.bound() == b.bound() && a.left() == b.left() && a.right() == b.right();
    }
    return false;
  }

 private:
  explicit Formula(NodePtr n) : node_(std::move(n)) {}

  static Formula make(Node n) { return Formula(std::make_shared<const Node>(std::move(n))); }

  static const NodePtr& top_node() {
    static const NodePtr node = std::make_shared<const Node>();
    return node;
  }

  NodePtr node_;
};

// ---- derived operators -----------------------------------------------------

inline Formula bottom() { return Formula::negation(Formula::top()); }

inline Formula conjunction(const Formula& a, const Formula& b) {
  return Formula::negation(Formula::disjunction(Formula::negation(a), Formula::negation(b)));
}

inline Formula implies(const Formula& a, const Formula& b) {
  return Formula::disjunction(Formula::negation(a), b);
}

inline Formula eventually(const Formula& f, TimeBound bound = {}) {
  return Formula::until(Formula::top(), f, bound);
}

inline Formula globally(const Formula& f, TimeBound bound = {}) {
  return Formula::negation(eventually(Formula::negation(f), bound));
}

// ---- queries ---------------------------------------------------------------

/// Largest relative time index the formula can inspect.
inline std::size_t horizon(const Formula& f) {
  switch (f.kind()) {
    case NodeKind::True:
    case NodeKind::Atom:
    case NodeKind::Prop: return 0;
    case NodeKind::Not: return horizon(f.child());
    case NodeKind::Or: return std::max(horizon(f.left()), horizon(f.right()));
    case NodeKind::Next: return saturating_add(1, horizon(f.child()));
    case NodeKind::Until:
      return saturating_add(f.bound().hi, std::max(horizon(f.left()), horizon(f.right())));
  }
  return 0;
}

inline void collect_atoms(const Formula& f, std::vector<AtomPredicate>& out) {
  switch (f.kind()) {
    case NodeKind::Atom:
      for (const auto& a : out) {
        if (a == f.atom()) return;
      }
      out.push_back(f.atom());
      return;
    case NodeKind::Not:
    case NodeKind::Next: collect_atoms(f.child(), out); return;
    case NodeKind::Or:
    case NodeKind::Until:
      collect_atoms(f.left(), out);
      collect_atoms(f.right(), out);
      return;
    default: return;
  }
}

inline std::size_t formula_size(const Formula& f) {
  switch (f.kind()) {
    case NodeKind::Not:
    case NodeKind::Next: return 1 + formula_size(f.child());
    case NodeKind::Or:
    case NodeKind::Until: return 1 + formula_size(f.left()) + formula_size(f.right());
    default: return 1;
  }
}

// ---- printing --------------------------------------------------------------

inline std::string format_number(double v) {
  v += 0.0;  // -0 prints as 0
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), end);
}

/// Fully parenthesized core syntax that `parse_formula` reads back to an
/// identical tree. Propositions print as `p<index>`, which does not parse.
inline std::string to_string(const Formula& f) {
  switch (f.kind()) {
    case NodeKind::True: return "true";
    case NodeKind::Atom:
      return f.atom().variable + " " + to_string(f.atom().cmp) + " " +
             format_number(f.atom().constant);
    case NodeKind::Prop: return "p" + std::to_string(f.prop_index());
    case NodeKind::Not: return "!(" + to_string(f.child()) + ")";
    case NodeKind::Next: return "X(" + to_string(f.child()) + ")";
    case NodeKind::Or: return "(" + to_string(f.left()) + ") || (" + to_string(f.right()) + ")";
    case NodeKind::Until: {
      const auto& b = f.bound();
      std::string interval = "[" + std::to_string(b.lo) + "," +
                             (b.unbounded() ? std::string("inf") : std::to_string(b.hi)) + "]";
      return "(" + to_string(f.left()) + ") U_" + interval + " (" + to_string(f.right()) + ")";
    }
  }
  return {};
}

}  // namespace bbcstl

template <>
struct std::hash<bbcstl::AtomPredicate> {
  std::size_t operator()(const bbcstl::AtomPredicate& a) const noexcept {
    std::size_t h = std::hash<std::string>{}(a.variable);
    h ^= std::hash<int>{}(static_cast<int>(a.cmp)) + 0x9e3779b9 + (h << 6) + (h >> 2);
    h ^= std::hash<double>{}(a.constant) + 0x9e3779b9 + (h << 6) + (h >> 2);
    return h;
  }
};
