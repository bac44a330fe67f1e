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
#include <cstdint>
#include <string>
#include <vector>

#include "bbcstl/error.hpp"
#include "bbcstl/formula.hpp"
#include "bbcstl/trace.hpp"

namespace bbcstl {

/// Index into an input alphabet.
using Symbol = std::uint32_t;

/// Finite input word over an alphabet, as symbol indices.
using Word = std::vector<Symbol>;

/// Truth values of the output propositions at one step, indexed like
/// OutputMapper::propositions().
using Bits = std::vector<bool>;

/// Abstract output trace.
using BitsTrace = std::vector<Bits>;

inline std::string to_string(const Bits& bits) {
  std::string s;
  s.reserve(bits.size());
  for (bool b : bits) s.push_back(b ? '1' : '0');
  return s;
}

/// Stateless map from abstract input symbols to concrete input valuations.
class InputMapper {
 public:
  struct Entry {
    std::string name;
    Valuation values;
  };

  InputMapper(std::vector<std::string> input_variables, std::vector<Entry> entries)
      : variables_(std::move(input_variables)), entries_(std::move(entries)) {
    if (entries_.empty()) throw ConfigError("input mapper needs at least one symbol");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (entries_[i].values.size() != variables_.size()) {
        throw ConfigError("symbol '" + entries_[i].name + "' does not assign every input variable");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (entries_[j].name == entries_[i].name) {
          throw ConfigError("duplicate input symbol '" + entries_[i].name + "'");
        }
      }
    }
  }

  std::size_t alphabet_size() const { return entries_.size(); }
  const std::vector<std::string>& variables() const { return variables_; }
  const std::vector<Entry>& entries() const { return entries_; }
  const std::string& name(Symbol s) const { return entries_.at(s).name; }

  std::vector<std::string> alphabet() const {
    std::vector<std::string> out;
    for (const auto& e : entries_) out.push_back(e.name);
    return out;
  }

  Symbol symbol(const std::string& name) const {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (entries_[i].name == name) return static_cast<Symbol>(i);
    }
    throw Error("unknown input symbol '" + name + "'");
  }

  Word word(const std::vector<std::string>& names) const {
    Word w;
    w.reserve(names.size());
    for (const auto& n : names) w.push_back(symbol(n));
    return w;
  }

  std::vector<std::string> names(const Word& w) const {
    std::vector<std::string> out;
    out.reserve(w.size());
    for (Symbol s : w) out.push_back(name(s));
    return out;
  }

  const Valuation& apply(Symbol s) const {
    if (s >= entries_.size()) throw Error("unknown input symbol #" + std::to_string(s));
    return entries_[s].values;
  }

  /// Element-wise application; the result has the word's length.
  ConcreteTrace concretize(const Word& w) const {
    ConcreteTrace out{variables_, {}};
    out.samples.reserve(w.size());
    for (Symbol s : w) out.samples.push_back(apply(s));
    return out;
  }

 private:
  std::vector<std::string> variables_;
  std::vector<Entry> entries_;
};

/// Maps output valuations to the truth vector of the atomic predicates
/// harvested from the specifications. Two valuations map to the same vector
/// iff no harvested atom distinguishes them.
class OutputMapper {
 public:
  OutputMapper() = default;
  explicit OutputMapper(std::vector<AtomPredicate> propositions)
      : propositions_(std::move(propositions)) {}

  const std::vector<AtomPredicate>& propositions() const { return propositions_; }
  std::size_t size() const { return propositions_.size(); }

  /// Index of `atom`, or size() if absent.
  std::size_t find(const AtomPredicate& atom) const {
    for (std::size_t i = 0; i < propositions_.size(); ++i) {
      if (propositions_[i] == atom) return i;
    }
    return propositions_.size();
  }

  Bits apply(const std::vector<std::string>& variables, const Valuation& v) const {
    Bits bits(propositions_.size());
    for (std::size_t i = 0; i < propositions_.size(); ++i) {
      const auto& p = propositions_[i];
      std::size_t col = variables.size();
      for (std::size_t j = 0; j < variables.size(); ++j) {
        if (variables[j] == p.variable) col = j;
      }
      if (col == variables.size()) throw Error("valuation has no variable '" + p.variable + "'");
      bits[i] = p.holds(v[col]);
    }
    return bits;
  }

  BitsTrace abstract_trace(const ConcreteTrace& t) const {
    BitsTrace out;
    out.reserve(t.size());
    for (const auto& v : t.samples) out.push_back(apply(t.variables, v));
    return out;
  }

 private:
  std::vector<AtomPredicate> propositions_;
};

/// One proposition per distinct atom, in order of first occurrence.
inline OutputMapper derive_output_mapper(const std::vector<Formula>& specs) {
  if (specs.empty()) throw Error("cannot derive an output mapper from zero specifications");
  std::vector<AtomPredicate> atoms;
  for (const auto& f : specs) collect_atoms(f, atoms);
  return OutputMapper(std::move(atoms));
}

/// Replaces every atom by its proposition index in `m`.
inline Formula propositionalize(const Formula& f, const OutputMapper& m) {
  switch (f.kind()) {
    case NodeKind::True:
    case NodeKind::Prop: return f;
    case NodeKind::Atom: {
      std::size_t i = m.find(f.atom());
      if (i == m.size()) {
        throw Error("atom '" + to_string(f) + "' is not among the output propositions");
      }
      return Formula::prop(i);
    }
    case NodeKind::Not: return Formula::negation(propositionalize(f.child(), m));
    case NodeKind::Next: return Formula::next(propositionalize(f.child(), m));
    case NodeKind::Or:
      return Formula::disjunction(propositionalize(f.left(), m), propositionalize(f.right(), m));
    case NodeKind::Until:
      return Formula::until(propositionalize(f.left(), m), propositionalize(f.right(), m), f.bound());
  }
  return f;
}

}  // namespace bbcstl
