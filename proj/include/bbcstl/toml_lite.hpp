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
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bbcstl/error.hpp"

namespace bbcstl::toml {

/// Value of the supported TOML subset: strings, numbers, booleans and
/// (possibly nested) arrays of those.
struct Value {
  enum class Type { String, Number, Bool, Array };

  Type type = Type::String;
  std::string str;
  double num = 0.0;
  bool boolean = false;
  std::vector<Value> items;

  bool is_integer() const { return type == Type::Number && num == static_cast<double>(static_cast<long long>(num)); }
};

struct Table {
  std::string name;
  std::vector<std::pair<std::string, Value>> entries;  // in document order

  const Value* find(std::string_view key) const {
    for (const auto& [k, v] : entries) {
      if (k == key) return &v;
    }
    return nullptr;
  }
};

/// Tables in document order; keys before the first header land in table "".
struct Document {
  std::vector<Table> tables;

  const Table* table(std::string_view name) const {
    for (const auto& t : tables) {
      if (t.name == name) return &t;
    }
    return nullptr;
  }
};

namespace detail {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  Document parse() {
    Document doc;
    doc.tables.push_back({"", {}});
    while (true) {
      skip_blank_lines();
      if (at_end()) break;
      if (peek() == '[') {
        ++pos_;
        skip_ws();
        std::string name;
        while (!at_end() && peek() != ']' && peek() != '\n') name.push_back(text_[pos_++]);
        while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.pop_back();
        expect(']');
        end_of_line();
        for (const auto& t : doc.tables) {
          if (t.name == name) fail("duplicate table [" + name + "]");
        }
        doc.tables.push_back({name, {}});
        continue;
      }
      std::string key = parse_key();
      skip_ws();
      expect('=');
      skip_ws();
      Value v = parse_value();
      end_of_line();
      auto& table = doc.tables.back();
      if (table.find(key)) fail("duplicate key '" + key + "'");
      table.entries.emplace_back(std::move(key), std::move(v));
    }
    return doc;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("config line " + std::to_string(line()) + ": " + what);
  }

  std::size_t line() const {
    std::size_t n = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) n += text_[i] == '\n';
    return n;
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void skip_ws() {
    while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) ++pos_;
  }

  void skip_comment() {
    if (!at_end() && peek() == '#') {
      while (!at_end() && peek() != '\n') ++pos_;
    }
  }

  void skip_blank_lines() {
    while (true) {
      skip_ws();
      skip_comment();
      if (!at_end() && peek() == '\n') {
        ++pos_;
        continue;
      }
      return;
    }
  }

  // Whitespace, comments and newlines, for use inside arrays.
  void skip_all() {
    while (true) {
      skip_ws();
      skip_comment();
      if (!at_end() && peek() == '\n') {
        ++pos_;
        continue;
      }
      return;
    }
  }

  void end_of_line() {
    skip_ws();
    skip_comment();
    if (!at_end() && peek() != '\n') fail("unexpected trailing characters");
    if (!at_end()) ++pos_;
  }

  void expect(char c) {
    if (at_end() || peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string parse_key() {
    if (peek() == '"') return parse_string();
    std::string key;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-' || peek() == '.')) {
      key.push_back(text_[pos_++]);
    }
    if (key.empty()) fail("expected a key");
    return key;
  }

  std::string parse_string() {
    expect('"');
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') fail("unterminated string");
      char c = text_[pos_++];
      if (c == '"') return out;
      if (c == '\\') {
        if (at_end()) fail("unterminated string");
        char e = text_[pos_++];
        switch (e) {
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          case '"': out.push_back('"'); break;
          case '\\': out.push_back('\\'); break;
          default: fail(std::string("unsupported escape \\") + e);
        }
        continue;
      }
      out.push_back(c);
    }
  }

  Value parse_value() {
    if (at_end()) fail("expected a value");
    Value v;
    if (peek() == '"') {
      v.type = Value::Type::String;
      v.str = parse_string();
      return v;
    }
    if (peek() == '[') {
      ++pos_;
      v.type = Value::Type::Array;
      skip_all();
      while (!at_end() && peek() != ']') {
        v.items.push_back(parse_value());
        skip_all();
        if (!at_end() && peek() == ',') {
          ++pos_;
          skip_all();
        } else {
          break;
        }
      }
      expect(']');
      return v;
    }
    if (text_.substr(pos_, 4) == "true") {
      pos_ += 4;
      v.type = Value::Type::Bool;
      v.boolean = true;
      return v;
    }
    if (text_.substr(pos_, 5) == "false") {
      pos_ += 5;
      v.type = Value::Type::Bool;
      return v;
    }
    std::size_t start = pos_;
    if (peek() == '+') ++pos_;
    std::string digits;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '.' || peek() == '-' || peek() == '+' || peek() == '_')) {
      if (peek() != '_') digits.push_back(peek());
      ++pos_;
    }
    if (digits == "inf") {
      v.type = Value::Type::Number;
      v.num = std::numeric_limits<double>::infinity();
      return v;
    }
    auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v.num);
    if (digits.empty() || ec != std::errc{} || end != digits.data() + digits.size()) {
      pos_ = start;
      fail("malformed value");
    }
    v.type = Value::Type::Number;
    return v;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Document parse(std::string_view text) { return detail::Reader(text).parse(); }

}  // namespace bbcstl::toml
