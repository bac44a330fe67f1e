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
#include <limits>
#include <ostream>

namespace bbcstl {

// Extended reals are plain doubles restricted to {-inf, finite, +inf}. Only
// negation, min and max are ever applied, so no inf - inf can arise and IEEE
// semantics are exact for these operations.
using ExtReal = double;

inline constexpr ExtReal kPosInf = std::numeric_limits<double>::infinity();
inline constexpr ExtReal kNegInf = -std::numeric_limits<double>::infinity();

/// Closed interval [lo, hi] over the extended reals.
struct RobustInterval {
  ExtReal lo = kNegInf;
  ExtReal hi = kPosInf;

  static constexpr RobustInterval point(ExtReal v) { return {v, v}; }
  static constexpr RobustInterval unknown() { return {kNegInf, kPosInf}; }

  constexpr bool is_point() const { return lo == hi; }

  /// Whether `other` lies inside this interval.
  constexpr bool contains(const RobustInterval& other) const {
    return lo <= other.lo && other.hi <= hi;
  }
  constexpr bool contains(ExtReal v) const { return lo <= v && v <= hi; }

  friend constexpr bool operator==(const RobustInterval&, const RobustInterval&) = default;
};

constexpr RobustInterval operator-(const RobustInterval& a) { return {-a.hi, -a.lo}; }

constexpr RobustInterval min(const RobustInterval& a, const RobustInterval& b) {
  return {std::min(a.lo, b.lo), std::min(a.hi, b.hi)};
}

constexpr RobustInterval max(const RobustInterval& a, const RobustInterval& b) {
  return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)};
}

inline std::ostream& operator<<(std::ostream& os, const RobustInterval& r) {
  return os << '[' << r.lo << ", " << r.hi << ']';
}

}  // namespace bbcstl
