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
#include <string>
#include <vector>

#include "bbcstl/error.hpp"

namespace bbcstl {

/// Values of the declared variables at one time step, in declaration order.
using Valuation = std::vector<double>;

/// Finite discrete-time signal; sample k is the valuation at time step k.
struct ConcreteTrace {
  std::vector<std::string> variables;
  std::vector<Valuation> samples;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < variables.size(); ++i) {
      if (variables[i] == name) return i;
    }
    throw Error("trace has no variable '" + name + "'");
  }

  ConcreteTrace prefix(std::size_t n) const {
    ConcreteTrace out{variables, {}};
    out.samples.assign(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(std::min(n, samples.size())));
    return out;
  }

  friend bool operator==(const ConcreteTrace&, const ConcreteTrace&) = default;
};

}  // namespace bbcstl
