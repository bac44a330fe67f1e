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

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bbcstl/error.hpp"
#include "bbcstl/formula.hpp"
#include "bbcstl/trace.hpp"

namespace bbcstl {

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace detail

/// Reads a trace from CSV: a header row of variable names, then one row of
/// numbers per time step. Blank lines are skipped.
inline ConcreteTrace read_trace_csv(std::istream& in) {
  ConcreteTrace t;
  std::string line;
  std::size_t row = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = detail::split_csv_line(line);
    if (!header) {
      t.variables = cells;
      for (const auto& v : t.variables) {
        if (v.empty()) throw ConfigError("trace header has an empty column name");
      }
      header = true;
      continue;
    }
    if (cells.size() != t.variables.size()) {
      throw ConfigError("trace row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                        " cells, expected " + std::to_string(t.variables.size()));
    }
    Valuation v;
    for (const auto& c : cells) {
      double x = 0.0;
      auto [end, ec] = std::from_chars(c.data(), c.data() + c.size(), x);
      if (c.empty() || ec != std::errc{} || end != c.data() + c.size()) {
        throw ConfigError("trace row " + std::to_string(row) + ": malformed number '" + c + "'");
      }
      v.push_back(x);
    }
    t.samples.push_back(std::move(v));
  }
  if (!header) throw ConfigError("trace file has no header row");
  return t;
}

inline ConcreteTrace load_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace file '" + path + "'");
  return read_trace_csv(in);
}

inline void write_trace_csv(std::ostream& out, const ConcreteTrace& t) {
  for (std::size_t i = 0; i < t.variables.size(); ++i) out << (i ? "," : "") << t.variables[i];
  out << "\n";
  for (const auto& v : t.samples) {
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << format_number(v[i]);
    out << "\n";
  }
}

}  // namespace bbcstl
