// Copyright 2026 The nlsdp authors
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

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nlsdp/core.hpp"
#include "nlsdp/outer_loop.hpp"
#include "nlsdp/problem.hpp"

namespace nlsdp {

/// Machine-readable solve report. The text form is line oriented:
///
///   status=converged
///   objective=3.09499445691693e-01
///   outer_iters=11
///   newton_iters=37
///   linesearch_steps=40
///   kkt_residual=1.2e-08
///   history outer=1 f=... F=... hnorm=... kkt=... pi=... Pi=... ...
///   vector x 2
///   1 1.5
///   matrix Y1 2
///   2 0.5
///   0.5 1
///
/// Scalar fields are key=value, one per line. Each history row repeats the
/// progress-log line (six significant digits, like the log itself). A
/// vector block is "vector <name> <n>" followed by n values; a matrix
/// block is "matrix <name> <dim>" followed by dim rows of dim values.
/// Scalar fields and vector/matrix payloads round-trip exactly.
struct Report {
  std::string status;
  double objective = std::numeric_limits<double>::quiet_NaN();
  int outer_iters = 0;
  int newton_iters = 0;
  int linesearch_steps = 0;
  double kkt_residual = kInf;
  std::vector<OuterRecord> history;
  std::vector<std::pair<std::string, Vector>> vectors;
  std::vector<std::pair<std::string, Matrix>> matrices;
};

namespace detail {

inline std::string report_fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// Fills a report from a solve result: the scalar summary, the history,
/// the scalar variables as "x" and the matrix variables as "Y1", "Y2", ...
inline Report make_report(const SolveResult& res, const Problem& p) {
  Report rep;
  rep.status = to_string(res.report.status);
  rep.objective = res.report.objective;
  rep.outer_iters = res.report.outer_iters;
  rep.newton_iters = res.report.newton_iters;
  rep.linesearch_steps = res.report.linesearch_evals;
  rep.kkt_residual = res.report.kkt_residual;
  rep.history = res.report.history;
  if (p.n_x() > 0) rep.vectors.emplace_back("x", res.point.x);
  for (size_t k = 0; k < res.point.Y.size(); ++k)
    rep.matrices.emplace_back("Y" + std::to_string(k + 1), res.point.Y[k]);
  return rep;
}

inline void write_report(std::ostream& out, const Report& rep) {
  out << "status=" << rep.status << '\n';
  out << "objective=" << detail::report_fmt(rep.objective) << '\n';
  out << "outer_iters=" << rep.outer_iters << '\n';
  out << "newton_iters=" << rep.newton_iters << '\n';
  out << "linesearch_steps=" << rep.linesearch_steps << '\n';
  out << "kkt_residual=" << detail::report_fmt(rep.kkt_residual) << '\n';
  for (const auto& r : rep.history)
    out << "history " << detail::format_outer_line(r) << '\n';
  for (const auto& [name, v] : rep.vectors) {
    out << "vector " << name << ' ' << v.size() << '\n';
    for (Eigen::Index i = 0; i < v.size(); ++i)
      out << (i ? " " : "") << detail::report_fmt(v[i]);
    out << '\n';
  }
  for (const auto& [name, m] : rep.matrices) {
    out << "matrix " << name << ' ' << m.rows() << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c)
        out << (c ? " " : "") << detail::report_fmt(m(r, c));
      out << '\n';
    }
  }
}

class ReportParseError : public std::runtime_error {
 public:
  ReportParseError(int line, const std::string& what)
      : std::runtime_error("report line " + std::to_string(line) + ": " +
                           what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_ = 0;
};

namespace detail {

// Parses "key=value ..." pairs of a history line back into a record.
inline OuterRecord parse_history_line(const std::string& text, int line) {
  OuterRecord rec;
  std::istringstream ss(text);
  std::string pair;
  while (ss >> pair) {
    const size_t eq = pair.find('=');
    if (eq == std::string::npos)
      throw ReportParseError(line, "bad history field '" + pair + "'");
    const std::string key = pair.substr(0, eq);
    const std::string val = pair.substr(eq + 1);
    try {
      if (key == "outer")
        rec.outer = std::stoi(val);
      else if (key == "f")
        rec.f = std::stod(val);
      else if (key == "F")
        rec.F = std::stod(val);
      else if (key == "hnorm")
        rec.h_norm = std::stod(val);
      else if (key == "kkt")
        rec.kkt = std::stod(val);
      else if (key == "pi")
        rec.pi = std::stod(val);
      else if (key == "Pi")
        rec.Pi = std::stod(val);
      else if (key == "alpha")
        rec.alpha = std::stod(val);
      else if (key == "kappa")
        rec.kappa = std::stod(val);
      else if (key == "inner")
        rec.inner_iters = std::stoi(val);
      else
        throw ReportParseError(line, "unknown history field '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw ReportParseError(line, "bad history value '" + pair + "'");
    }
  }
  return rec;
}

}  // namespace detail

inline Report read_report(std::istream& in) {
  Report rep;
  std::string line;
  int lineno = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  auto parse_values = [&](double* dst, int count, const char* what) {
    int got = 0;
    while (got < count) {
      if (!next_line())
        throw ReportParseError(lineno, std::string("unexpected end of ") +
                                           what + " block");
      std::istringstream vs(line);
      double v;
      while (got < count && vs >> v) dst[got++] = v;
      std::string extra;
      if (vs >> extra)
        throw ReportParseError(lineno, "bad value '" + extra + "'");
    }
  };

  while (next_line()) {
    std::istringstream ss(line);
    std::string head;
    ss >> head;
    if (head == "history") {
      std::string rest;
      std::getline(ss, rest);
      rep.history.push_back(detail::parse_history_line(rest, lineno));
    } else if (head == "vector") {
      std::string name;
      long n = -1;
      if (!(ss >> name >> n) || n < 0)
        throw ReportParseError(lineno, "bad vector header");
      Vector v(n);
      parse_values(v.data(), static_cast<int>(n), "vector");
      rep.vectors.emplace_back(name, std::move(v));
    } else if (head == "matrix") {
      std::string name;
      long dim = -1;
      if (!(ss >> name >> dim) || dim < 0)
        throw ReportParseError(lineno, "bad matrix header");
      Matrix m(dim, dim);
      // Row-major on disk; fill through a transposed view of the
      // column-major storage.
      Matrix mt(dim, dim);
      parse_values(mt.data(), static_cast<int>(dim * dim), "matrix");
      m = mt.transpose();
      rep.matrices.emplace_back(name, std::move(m));
    } else {
      const size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw ReportParseError(lineno, "expected key=value, got '" + line +
                                           "'");
      const std::string key = line.substr(0, eq);
      const std::string val = line.substr(eq + 1);
      try {
        if (key == "status")
          rep.status = val;
        else if (key == "objective")
          rep.objective = std::stod(val);
        else if (key == "outer_iters")
          rep.outer_iters = std::stoi(val);
        else if (key == "newton_iters")
          rep.newton_iters = std::stoi(val);
        else if (key == "linesearch_steps")
          rep.linesearch_steps = std::stoi(val);
        else if (key == "kkt_residual")
          rep.kkt_residual = std::stod(val);
        else
          throw ReportParseError(lineno, "unknown field '" + key + "'");
      } catch (const std::invalid_argument&) {
        throw ReportParseError(lineno, "bad value for '" + key + "'");
      }
    }
  }
  return rep;
}

inline Report read_report(const std::string& text) {
  std::istringstream in(text);
  return read_report(in);
}

}  // namespace nlsdp
