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

#include <cctype>
#include <charconv>
#include <cstddef>
#include <string>
#include <string_view>

#include "bbcstl/error.hpp"
#include "bbcstl/formula.hpp"

namespace bbcstl {

namespace detail {

// Precedence, loosest first:
//   ->   (right associative)
//   ||
//   &&
//   U, U_[a,b]   (right associative)
//   !  X  G  F  []  <>  G_[a,b]  F_[a,b]
//   atoms, true, false, parentheses
class FormulaParser {
 public:
  FormulaParser(std::string_view text, const VariableDecls& vars) : text_(text), vars_(vars) {}

  Formula parse() {
    Formula f = parse_implication();
    skip_space();
    if (pos_ != text_.size()) {
      fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    }
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool lookahead(std::string_view tok) {
    skip_space();
    return text_.substr(pos_, tok.size()) == tok;
  }

  bool accept(std::string_view tok) {
    if (!lookahead(tok)) return false;
    pos_ += tok.size();
    return true;
  }

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
  }

  // Single-letter temporal keywords must not swallow identifiers such as
  // `Gear` or `Xpos`; `U_` and `G_` introduce an interval.
  bool accept_keyword(char kw) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != kw) return false;
    if (pos_ + 1 < text_.size() && text_[pos_ + 1] != '_' && ident_char(text_[pos_ + 1])) return false;
    ++pos_;
    return true;
  }

  Formula parse_implication() {
    Formula lhs = parse_or();
    if (accept("->")) {
      return implies(lhs, parse_implication());
    }
    return lhs;
  }

  Formula parse_or() {
    Formula lhs = parse_and();
    while (accept("||")) {
      lhs = Formula::disjunction(lhs, parse_and());
    }
    return lhs;
  }

  Formula parse_and() {
    Formula lhs = parse_until();
    while (accept("&&")) {
      lhs = conjunction(lhs, parse_until());
    }
    return lhs;
  }

  Formula parse_until() {
    Formula lhs = parse_unary();
    if (accept_keyword('U')) {
      TimeBound b = parse_optional_interval();
      return Formula::until(lhs, parse_until(), b);
    }
    return lhs;
  }

  Formula parse_unary() {
    if (accept("!")) return Formula::negation(parse_unary());
    if (accept_keyword('X')) return Formula::next(parse_unary());
    if (accept_keyword('G') || accept("[]")) {
      TimeBound b = parse_optional_interval();
      return globally(parse_unary(), b);
    }
    if (accept_keyword('F') || accept("<>")) {
      TimeBound b = parse_optional_interval();
      return eventually(parse_unary(), b);
    }
    return parse_primary();
  }

  TimeBound parse_optional_interval() {
    if (pos_ >= text_.size() || text_[pos_] != '_') return {};
    ++pos_;
    if (!accept("[")) fail("expected '[' after '_'");
    std::size_t at = pos_;
    TimeBound b;
    b.lo = parse_bound(false);
    if (!accept(",")) fail("expected ',' in interval");
    b.hi = parse_bound(true);
    if (!accept("]")) fail("expected ']' closing interval");
    if (b.lo > b.hi) {
      throw ParseError("interval lower bound exceeds upper bound", at);
    }
    return b;
  }

  std::size_t parse_bound(bool allow_inf) {
    skip_space();
    if (allow_inf && accept("inf")) return kInfinity;
    std::size_t value = 0;
    auto [end, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
    if (ec != std::errc{} || end == text_.data() + pos_) fail("expected a non-negative integer bound");
    pos_ = static_cast<std::size_t>(end - text_.data());
    return value;
  }

  Formula parse_primary() {
    skip_space();
    if (accept("(")) {
      Formula f = parse_implication();
      if (!accept(")")) fail("expected ')'");
      return f;
    }
    std::size_t at = pos_;
    std::string ident = parse_identifier();
    if (ident == "true") return Formula::top();
    if (ident == "false") return bottom();
    return parse_atom(ident, at);
  }

  std::string parse_identifier() {
    skip_space();
    std::size_t start = pos_;
    if (pos_ < text_.size() &&
        (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    }
    if (start == pos_) fail("expected a formula");
    return std::string(text_.substr(start, pos_ - start));
  }

  Formula parse_atom(const std::string& var, std::size_t var_pos) {
    const VariableDecl* decl = nullptr;
    for (const auto& d : vars_) {
      if (d.name == var) decl = &d;
    }
    if (decl == nullptr) throw ParseError("undeclared variable '" + var + "'", var_pos);

    skip_space();
    std::size_t op_pos = pos_;
    enum { Gt, Lt, Ge, Le, Eq, Ne } op;
    if (accept(">=")) op = Ge;
    else if (accept("<=")) op = Le;
    else if (accept("==")) op = Eq;
    else if (accept("!=")) op = Ne;
    else if (accept(">")) op = Gt;
    else if (accept("<")) op = Lt;
    else fail("expected a comparison operator");

    if ((op == Eq || op == Ne) && !decl->discrete) {
      throw ParseError("equality comparison on continuous variable '" + var + "'", op_pos);
    }
    double c = parse_number();
    auto mk = [&](Comparator cmp) { return Formula::atom(AtomPredicate{var, cmp, c}); };
    switch (op) {
      case Gt: return mk(Comparator::Greater);
      case Lt: return mk(Comparator::Less);
      case Ge: return Formula::negation(mk(Comparator::Less));
      case Le: return Formula::negation(mk(Comparator::Greater));
      case Eq: return mk(Comparator::Equal);
      case Ne: return Formula::negation(mk(Comparator::Equal));
    }
    fail("unreachable");
  }

  double parse_number() {
    skip_space();
    std::size_t start = pos_;
    if (pos_ < text_.size() && text_[pos_] == '+') ++pos_;
    double value = 0.0;
    auto [end, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
    if (ec != std::errc{} || end == text_.data() + pos_) {
      pos_ = start;
      fail("expected a numeric constant");
    }
    pos_ = static_cast<std::size_t>(end - text_.data());
    return value;
  }

  std::string_view text_;
  const VariableDecls& vars_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses STL text into a desugared core-syntax formula.
///
/// Throws ParseError on malformed input, undeclared variables, `==`/`!=` on
/// variables not declared discrete, and intervals whose lower bound exceeds the
/// upper bound.
inline Formula parse_formula(std::string_view text, const VariableDecls& vars) {
  return detail::FormulaParser(text, vars).parse();
}

}  // namespace bbcstl
