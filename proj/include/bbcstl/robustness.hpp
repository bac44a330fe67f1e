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
#include <unordered_map>
#include <vector>

#include "bbcstl/error.hpp"
#include "bbcstl/formula.hpp"
#include "bbcstl/interval.hpp"
#include "bbcstl/trace.hpp"

namespace bbcstl {

struct RobustnessOptions {
  /// Robustness of a satisfied `==` atom; a violated one gets the negation.
  double equality_margin = 1.0;
};

namespace detail {

// Evaluates the interval over-approximation for every position of the trace at
// once. Slot n = |trace| stands for every position >= n: there each atom is
// [-inf, +inf], so all such positions yield the same interval.
class IntervalEvaluator {
 public:
  IntervalEvaluator(const ConcreteTrace& trace, RobustnessOptions opts)
      : trace_(trace), n_(trace.size()), opts_(opts) {}

  const std::vector<RobustInterval>& eval(const Formula& f) {
    if (auto it = memo_.find(f.id()); it != memo_.end()) return it->second;
    std::vector<RobustInterval> out(n_ + 1);
    switch (f.kind()) {
      case NodeKind::True:
        std::fill(out.begin(), out.end(), RobustInterval::point(kPosInf));
        break;
      case NodeKind::Atom: atom(f.atom(), out); break;
      case NodeKind::Prop:
        throw Error("robustness is undefined on propositionalized formulas");
      case NodeKind::Not: {
        const auto& c = eval(f.child());
        for (std::size_t k = 0; k <= n_; ++k) out[k] = -c[k];
        break;
      }
      case NodeKind::Or: {
        const auto& a = eval(f.left());
        const auto& b = eval(f.right());
        for (std::size_t k = 0; k <= n_; ++k) out[k] = max(a[k], b[k]);
        break;
      }
      case NodeKind::Next: {
        const auto& c = eval(f.child());
        for (std::size_t k = 0; k <= n_; ++k) out[k] = c[std::min(k + 1, n_)];
        break;
      }
      case NodeKind::Until: until(f, out); break;
    }
    return memo_.emplace(f.id(), std::move(out)).first->second;
  }

 private:
  void atom(const AtomPredicate& a, std::vector<RobustInterval>& out) const {
    const std::size_t col = n_ == 0 ? 0 : trace_.column(a.variable);
    for (std::size_t k = 0; k < n_; ++k) {
      const double u = trace_.samples[k][col];
      double r = 0.0;
      switch (a.cmp) {
        case Comparator::Greater: r = u - a.constant; break;
        case Comparator::Less: r = -u + a.constant; break;
        case Comparator::Equal: r = u == a.constant ? opts_.equality_margin : -opts_.equality_margin; break;
      }
      out[k] = RobustInterval::point(r);
    }
    out[n_] = RobustInterval::unknown();
  }

  void until(const Formula& f, std::vector<RobustInterval>& out) {
    const auto& lhs = eval(f.left());
    const auto& rhs = eval(f.right());
    const TimeBound b = f.bound();
    for (std::size_t k = 0; k <= n_; ++k) {
      const std::size_t first = saturating_add(k, b.lo);
      const std::size_t last = saturating_add(k, b.hi);
      RobustInterval best = RobustInterval::point(kNegInf);
      RobustInterval prefix_min = RobustInterval::point(kPosInf);
      for (std::size_t m = k; m <= n_; ++m) {
        if (m > last) break;
        prefix_min = min(prefix_min, lhs[m]);
        // For m == n the slot also covers every window position past the end.
        const bool in_window = m < n_ ? m >= first : true;
        if (in_window) best = max(best, min(rhs[m], prefix_min));
      }
      out[k] = best;
    }
  }

  const ConcreteTrace& trace_;
  std::size_t n_;
  RobustnessOptions opts_;
  std::unordered_map<const Formula::Node*, std::vector<RobustInterval>> memo_;
};

}  // namespace detail

/// Interval over-approximation of the robust satisfaction interval of `f` on
/// the finite trace `t` at position `k`. Positions at or beyond the end of the
/// trace are unconstrained.
inline RobustInterval fin_robust(const Formula& f, const ConcreteTrace& t, std::size_t k = 0,
                                 RobustnessOptions opts = {}) {
  detail::IntervalEvaluator ev(t, opts);
  const auto& values = ev.eval(f);
  return values[std::min(k, t.size())];
}

/// Robustness on any infinite extension of `t`. Defined when the trace
/// determines it, which `k + horizon(f) < |t|` guarantees; throws otherwise.
inline ExtReal point_robust(const Formula& f, const ConcreteTrace& t, std::size_t k = 0,
                            RobustnessOptions opts = {}) {
  const RobustInterval r = fin_robust(f, t, k, opts);
  if (r.lo != r.hi) throw Error("horizon exceeds trace");
  return r.lo;
}

enum class Verdict { Violated, Satisfied, Unknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Violated: return "violated";
    case Verdict::Satisfied: return "satisfied";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

inline Verdict verdict_of(const RobustInterval& r) {
  if (r.hi < 0) return Verdict::Violated;
  if (r.lo > 0) return Verdict::Satisfied;
  return Verdict::Unknown;
}

/// Violated means every infinite extension of `t` falsifies `f`.
inline Verdict verdict(const Formula& f, const ConcreteTrace& t, RobustnessOptions opts = {}) {
  return verdict_of(fin_robust(f, t, 0, opts));
}

}  // namespace bbcstl
