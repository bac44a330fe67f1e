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
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bbcstl/abstraction.hpp"
#include "bbcstl/error.hpp"
#include "bbcstl/formula.hpp"

namespace bbcstl {

/// Handle of a hash-consed residual formula inside a MonitorStore. Equal
/// residuals get equal handles.
using MonitorState = std::size_t;

/// Formula progression over propositionalized formulas in negation normal
/// form. Until follows the STL reading where the left operand must also hold
/// at the position where the right operand is met; Release is its dual.
class MonitorStore {
 public:
  enum class Kind : std::uint8_t { True, False, Lit, And, Or, Next, Until, Release };

  struct Node {
    Kind kind = Kind::True;
    std::size_t prop = 0;  // Lit
    bool positive = true;  // Lit
    std::size_t lo = 0, hi = 0;                   // Until / Release
    std::vector<MonitorState> children;           // sorted for And / Or

    friend bool operator==(const Node&, const Node&) = default;
  };

  MonitorStore() {
    true_ = intern(Node{Kind::True, 0, true, 0, 0, {}});
    false_ = intern(Node{Kind::False, 0, true, 0, 0, {}});
  }

  MonitorState top() const { return true_; }
  MonitorState bottom() const { return false_; }
  const Node& node(MonitorState s) const { return nodes_[s]; }
  std::size_t size() const { return nodes_.size(); }

  /// Negation normal form of a propositionalized formula.
  MonitorState from_formula(const Formula& f, bool positive = true) {
    switch (f.kind()) {
      case NodeKind::True: return positive ? true_ : false_;
      case NodeKind::Atom: throw Error("monitor needs a propositionalized formula");
      case NodeKind::Prop: return lit(f.prop_index(), positive);
      case NodeKind::Not: return from_formula(f.child(), !positive);
      case NodeKind::Or: {
        MonitorState a = from_formula(f.left(), positive);
        MonitorState b = from_formula(f.right(), positive);
        return positive ? disj({a, b}) : conj({a, b});
      }
      case NodeKind::Next: return next(from_formula(f.child(), positive));
      case NodeKind::Until: {
        MonitorState a = from_formula(f.left(), positive);
        MonitorState b = from_formula(f.right(), positive);
        return temporal(positive ? Kind::Until : Kind::Release, a, b, f.bound().lo, f.bound().hi);
      }
    }
    return true_;
  }

  MonitorState lit(std::size_t prop, bool positive) {
    return intern(Node{Kind::Lit, prop, positive, 0, 0, {}});
  }

  MonitorState next(MonitorState s) {
    if (s == true_ || s == false_) return s;
    return intern(Node{Kind::Next, 0, true, 0, 0, {s}});
  }

  /// Folds constant operands: a U b is false when either side is false, true
  /// when both are true, and a when b is true at offset 0. Release is the dual.
  MonitorState temporal(Kind k, MonitorState a, MonitorState b, std::size_t lo, std::size_t hi) {
    const MonitorState zero = k == Kind::Until ? false_ : true_;
    const MonitorState unit = k == Kind::Until ? true_ : false_;
    if (a == zero || b == zero) return zero;
    if (a == unit && b == unit) return unit;
    if (b == unit && lo == 0) return a;
    return intern(Node{k, 0, true, lo, hi, {a, b}});
  }

  MonitorState conj(std::vector<MonitorState> xs) { return junction(Kind::And, std::move(xs)); }
  MonitorState disj(std::vector<MonitorState> xs) { return junction(Kind::Or, std::move(xs)); }

  /// Residual obligation after observing `bits` at the current step.
  MonitorState progress(MonitorState s, const Bits& bits) {
    Key key{s, bits};
    if (auto it = progress_memo_.find(key); it != progress_memo_.end()) return it->second;
    MonitorState r = progress_uncached(s, bits);
    progress_memo_.emplace(std::move(key), r);
    return r;
  }

  std::string to_string(MonitorState s) const {
    const Node& n = nodes_[s];
    auto bound = [&] {
      return "[" + std::to_string(n.lo) + "," + (n.hi == kInfinity ? std::string("inf") : std::to_string(n.hi)) + "]";
    };
    switch (n.kind) {
      case Kind::True: return "true";
      case Kind::False: return "false";
      case Kind::Lit: return (n.positive ? "p" : "!p") + std::to_string(n.prop);
      case Kind::Next: return "X(" + to_string(n.children[0]) + ")";
      case Kind::Until:
        return "(" + to_string(n.children[0]) + ") U_" + bound() + " (" + to_string(n.children[1]) + ")";
      case Kind::Release:
        return "(" + to_string(n.children[0]) + ") R_" + bound() + " (" + to_string(n.children[1]) + ")";
      case Kind::And:
      case Kind::Or: {
        std::string out = "(";
        for (std::size_t i = 0; i < n.children.size(); ++i) {
          if (i) out += n.kind == Kind::And ? " && " : " || ";
          out += to_string(n.children[i]);
        }
        return out + ")";
      }
    }
    return {};
  }

 private:
  struct Key {
    MonitorState state;
    Bits bits;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      return std::hash<std::size_t>{}(k.state) * 31u ^ std::hash<Bits>{}(k.bits);
    }
  };
  struct NodeHash {
    std::size_t operator()(const Node& n) const noexcept {
      std::size_t h = static_cast<std::size_t>(n.kind) * 1000003u ^ n.prop * 7919u ^ (n.positive ? 1u : 0u);
      h = h * 31u + n.lo;
      h = h * 31u + n.hi;
      for (auto c : n.children) h = h * 1000003u + c;
      return h;
    }
  };

  MonitorState intern(Node n) {
    if (auto it = index_.find(n); it != index_.end()) return it->second;
    const MonitorState id = nodes_.size();
    nodes_.push_back(n);
    index_.emplace(std::move(n), id);
    return id;
  }

  // Flattens, drops the unit, absorbs the zero, sorts and deduplicates.
  MonitorState junction(Kind k, std::vector<MonitorState> xs) {
    const MonitorState unit = k == Kind::And ? true_ : false_;
    const MonitorState zero = k == Kind::And ? false_ : true_;
    std::vector<MonitorState> flat;
    for (MonitorState x : xs) {
      if (x == zero) return zero;
      if (x == unit) continue;
      if (nodes_[x].kind == k) {
        const auto& cs = nodes_[x].children;
        flat.insert(flat.end(), cs.begin(), cs.end());
      } else {
        flat.push_back(x);
      }
    }
    std::sort(flat.begin(), flat.end());
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    if (flat.empty()) return unit;
    if (flat.size() == 1) return flat.front();
    return intern(Node{k, 0, true, 0, 0, std::move(flat)});
  }

  static std::size_t dec(std::size_t v) { return v == kInfinity ? kInfinity : v - 1; }

  MonitorState progress_uncached(MonitorState s, const Bits& bits) {
    const Node n = nodes_[s];
    switch (n.kind) {
      case Kind::True:
      case Kind::False: return s;
      case Kind::Lit:
        if (n.prop >= bits.size()) throw Error("proposition index out of range");
        return bits[n.prop] == n.positive ? true_ : false_;
      case Kind::And:
      case Kind::Or: {
        std::vector<MonitorState> out;
        out.reserve(n.children.size());
        for (MonitorState c : n.children) {
          MonitorState p = progress(c, bits);
          if (p == (n.kind == Kind::And ? false_ : true_)) return p;
          out.push_back(p);
        }
        return junction(n.kind, std::move(out));
      }
      case Kind::Next: return n.children[0];
      case Kind::Until: {
        const MonitorState a = n.children[0], b = n.children[1];
        const MonitorState pa = progress(a, bits);
        if (n.lo > 0) return conj({pa, temporal(Kind::Until, a, b, n.lo - 1, dec(n.hi))});
        const MonitorState pb = progress(b, bits);
        if (n.hi == 0) return conj({pa, pb});
        return conj({pa, disj({pb, temporal(Kind::Until, a, b, 0, dec(n.hi))})});
      }
      case Kind::Release: {
        const MonitorState a = n.children[0], b = n.children[1];
        const MonitorState pa = progress(a, bits);
        if (n.lo > 0) return disj({pa, temporal(Kind::Release, a, b, n.lo - 1, dec(n.hi))});
        const MonitorState pb = progress(b, bits);
        if (n.hi == 0) return disj({pa, pb});
        return disj({pa, conj({pb, temporal(Kind::Release, a, b, 0, dec(n.hi))})});
      }
    }
    return s;
  }

  std::vector<Node> nodes_;
  std::unordered_map<Node, MonitorState, NodeHash> index_;
  std::unordered_map<Key, MonitorState, KeyHash> progress_memo_;
  MonitorState true_ = 0, false_ = 0;
};

enum class MonitorVerdict { Bad, NotYetBad };

/// Folds progression over an abstract trace; Bad iff the residual becomes false.
inline MonitorVerdict boolean_monitor(const Formula& propositional, const BitsTrace& trace) {
  MonitorStore store;
  MonitorState s = store.from_formula(propositional);
  for (const auto& bits : trace) {
    s = store.progress(s, bits);
    if (s == store.bottom()) return MonitorVerdict::Bad;
  }
  return s == store.bottom() ? MonitorVerdict::Bad : MonitorVerdict::NotYetBad;
}

}  // namespace bbcstl
