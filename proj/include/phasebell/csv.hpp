// Copyright 2026 The phasebell Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// CSV helpers. Floating point is always written with 17 significant digits
// ("%.17g") so outputs round-trip exactly and are byte-stable.

#pragma once

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "phasebell/errors.hpp"
#include "phasebell/grid.hpp"

namespace phasebell::csv {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  Writer& header(std::initializer_list<std::string_view> cols) {
    bool first = true;
    for (auto c : cols) {
      if (!first) out_ << ',';
      out_ << c;
      first = false;
    }
    out_ << '\n';
    return *this;
  }

  template <typename... Ts>
  Writer& row(const Ts&... values) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(values), first = false), ...);
    out_ << '\n';
    return *this;
  }

 private:
  static std::string cell(double v) { return fmt(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(long v) { return std::to_string(v); }
  static std::string cell(long long v) { return std::to_string(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }

  std::ostream& out_;
};

/// Splits a comma separated line; surrounding blanks are trimmed.
inline std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    const auto b = cur.find_first_not_of(" \t\r");
    const auto e = cur.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string{} : cur.substr(b, e - b + 1));
    cur.clear();
  };
  for (char ch : line) {
    if (ch == ',') {
      flush();
    } else {
      cur.push_back(ch);
    }
  }
  flush();
  return out;
}

inline double parse_double(const std::string& s, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument("csv line " + std::to_string(line_no) + ": not a number: '" + s + "'");
  }
}

/// Reads a numeric table. The first line is a header whose column names must
/// match `expected` (one of the accepted layouts).
inline std::vector<std::vector<double>> read_table(std::istream& in,
                                                   const std::vector<std::string>& expected) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.find_first_not_of(" \t\r") != std::string::npos) break;
  }
  const auto header = split(line);
  if (header != expected) {
    std::string want;
    for (const auto& e : expected) want += (want.empty() ? "" : ",") + e;
    throw InvalidArgument("csv header mismatch: expected '" + want + "'");
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split(line);
    if (cells.size() != expected.size()) {
      throw InvalidArgument("csv line " + std::to_string(line_no) + ": expected " +
                            std::to_string(expected.size()) + " columns");
    }
    std::vector<double> r;
    r.reserve(cells.size());
    for (const auto& c : cells) r.push_back(parse_double(c, line_no));
    rows.push_back(std::move(r));
  }
  return rows;
}

/// Columns x, re, im.
inline void write_wavefunction(std::ostream& out, const WaveFunction& psi) {
  Writer w(out);
  w.header({"x", "re", "im"});
  for (Eigen::Index j = 0; j < psi.size(); ++j) {
    w.row(psi.grid().x(j), psi[j].real(), psi[j].imag());
  }
}

/// Inverse of `write_wavefunction`; the x column must be a uniform grid.
inline WaveFunction read_wavefunction(std::istream& in, PhysParams params = {}) {
  const auto rows = read_table(in, {"x", "re", "im"});
  detail::require(rows.size() >= static_cast<std::size_t>(Grid1D::kMinPoints),
                  "read_wavefunction: need at least 8 rows");
  const auto n = static_cast<Eigen::Index>(rows.size());
  Grid1D grid(rows.front()[0], rows.back()[0], n);
  Eigen::VectorXcd amps(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& r = rows[static_cast<std::size_t>(j)];
    const double tol = 1e-9 * std::max(1.0, std::abs(grid.x(j)));
    detail::require(std::abs(r[0] - grid.x(j)) <= tol,
                    "read_wavefunction: x column is not a uniform grid");
    amps[j] = {r[1], r[2]};
  }
  return {grid, std::move(amps), params};
}

/// Columns x_f, x_i, re, im.
inline void write_kernel(std::ostream& out, const Kernel& k) {
  Writer w(out);
  w.header({"x_f", "x_i", "re", "im"});
  const auto& g = k.grid();
  for (Eigen::Index f = 0; f < g.size(); ++f) {
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      w.row(g.x(f), g.x(i), k(f, i).real(), k(f, i).imag());
    }
  }
}

}  // namespace phasebell::csv
