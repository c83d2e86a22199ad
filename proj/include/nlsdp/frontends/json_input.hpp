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

#include <istream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "nlsdp/frontends/bmi.hpp"
#include "nlsdp/frontends/pmi.hpp"

namespace nlsdp {

/// Raised for structurally invalid problem files (bad JSON, wrong type tag,
/// missing fields, shape mismatches, asymmetric coefficient matrices).
class JsonFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

using nlohmann::json;

inline json parse_json(std::istream& in) {
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw JsonFormatError(std::string("invalid json: ") + e.what());
  }
}

inline Matrix json_matrix(const json& j, int dim, const char* where) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw JsonFormatError(std::string(where) + ": expected a " +
                          std::to_string(dim) + "x" + std::to_string(dim) +
                          " array");
  Matrix out(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const json& row = j[static_cast<size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      throw JsonFormatError(std::string(where) + ": ragged matrix rows");
    for (int c = 0; c < dim; ++c) {
      const json& cell = row[static_cast<size_t>(c)];
      if (!cell.is_number())
        throw JsonFormatError(std::string(where) + ": non-numeric entry");
      out(r, c) = cell.get<double>();
    }
  }
  return out;
}

inline SymMatrix json_sym_matrix(const json& j, int dim, const char* where) {
  const Matrix full = json_matrix(j, dim, where);
  try {
    return SymMatrix::from_dense_checked(full);
  } catch (const std::exception&) {
    throw JsonFormatError(std::string(where) +
                          ": coefficient matrix is not symmetric");
  }
}

inline Vector json_vector(const json& j, int n, const char* where) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw JsonFormatError(std::string(where) + ": expected " +
                          std::to_string(n) + " entries");
  Vector out(n);
  for (int i = 0; i < n; ++i) {
    const json& cell = j[static_cast<size_t>(i)];
    if (!cell.is_number())
      throw JsonFormatError(std::string(where) + ": non-numeric entry");
    out[i] = cell.get<double>();
  }
  return out;
}

/// Bound arrays allow null entries meaning "no bound on this variable".
inline Vector json_bound_vector(const json& j, int n, double fill,
                                const char* where) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw JsonFormatError(std::string(where) + ": expected " +
                          std::to_string(n) + " entries");
  Vector out = Vector::Constant(n, fill);
  for (int i = 0; i < n; ++i) {
    const json& cell = j[static_cast<size_t>(i)];
    if (cell.is_null()) continue;
    if (!cell.is_number())
      throw JsonFormatError(std::string(where) + ": non-numeric entry");
    out[i] = cell.get<double>();
  }
  return out;
}

struct CommonHeader {
  int n_vars = 0;
  Matrix H;
  Vector c;
  Vector b_lo, b_up;
};

inline CommonHeader read_common_header(const json& j, const char* type_tag) {
  if (!j.is_object()) throw JsonFormatError("top level must be an object");
  const auto type_it = j.find("type");
  if (type_it == j.end() || !type_it->is_string() ||
      type_it->get<std::string>() != type_tag)
    throw JsonFormatError(std::string("expected \"type\": \"") + type_tag +
                          "\"");
  const auto n_it = j.find("n_vars");
  if (n_it == j.end() || !n_it->is_number_integer())
    throw JsonFormatError("missing integer field n_vars");
  CommonHeader out;
  out.n_vars = n_it->get<int>();
  if (out.n_vars < 1) throw JsonFormatError("n_vars must be positive");

  out.c = Vector::Zero(out.n_vars);
  if (const auto obj_it = j.find("objective"); obj_it != j.end()) {
    if (!obj_it->is_object())
      throw JsonFormatError("objective must be an object");
    if (const auto c_it = obj_it->find("c"); c_it != obj_it->end())
      out.c = json_vector(*c_it, out.n_vars, "objective.c");
    if (const auto h_it = obj_it->find("H"); h_it != obj_it->end()) {
      out.H = json_matrix(*h_it, out.n_vars, "objective.H");
      if (!out.H.isApprox(out.H.transpose()))
        throw JsonFormatError("objective.H is not symmetric");
    }
  }

  out.b_lo = Vector::Constant(out.n_vars, -kInf);
  out.b_up = Vector::Constant(out.n_vars, kInf);
  if (const auto b_it = j.find("bounds"); b_it != j.end()) {
    if (!b_it->is_object()) throw JsonFormatError("bounds must be an object");
    if (const auto lo_it = b_it->find("lower"); lo_it != b_it->end())
      out.b_lo = json_bound_vector(*lo_it, out.n_vars, -kInf, "bounds.lower");
    if (const auto up_it = b_it->find("upper"); up_it != b_it->end())
      out.b_up = json_bound_vector(*up_it, out.n_vars, kInf, "bounds.upper");
  }
  return out;
}

/// Reads one constraint's term list: each term has "vars" (1-based indices,
/// with multiplicity; empty for the absolute term) and "matrix".
inline std::vector<std::pair<std::vector<int>, SymMatrix>> read_terms(
    const json& jcon, int n_vars, int dim) {
  const auto terms_it = jcon.find("terms");
  if (terms_it == jcon.end() || !terms_it->is_array() || terms_it->empty())
    throw JsonFormatError("constraint needs a non-empty terms array");
  std::vector<std::pair<std::vector<int>, SymMatrix>> out;
  for (const json& jterm : *terms_it) {
    if (!jterm.is_object())
      throw JsonFormatError("constraint term must be an object");
    const auto vars_it = jterm.find("vars");
    const auto mat_it = jterm.find("matrix");
    if (vars_it == jterm.end() || mat_it == jterm.end())
      throw JsonFormatError("constraint term needs vars and matrix");
    if (!vars_it->is_array())
      throw JsonFormatError("term vars must be an array");
    std::vector<int> kappa;
    for (const json& v : *vars_it) {
      if (!v.is_number_integer())
        throw JsonFormatError("term vars must be integers");
      const int idx = v.get<int>();
      if (idx < 1 || idx > n_vars)
        throw JsonFormatError("term variable index out of range: " +
                              std::to_string(idx));
      kappa.push_back(idx - 1);
    }
    std::sort(kappa.begin(), kappa.end());
    out.emplace_back(std::move(kappa),
                     json_sym_matrix(*mat_it, dim, "term matrix"));
  }
  return out;
}

template <class Fn>
void read_constraints(const json& j, int n_vars, const Fn& add) {
  const auto cons_it = j.find("constraints");
  if (cons_it == j.end() || !cons_it->is_array() || cons_it->empty())
    throw JsonFormatError("missing non-empty constraints array");
  for (const json& jcon : *cons_it) {
    if (!jcon.is_object()) throw JsonFormatError("constraint must be object");
    const auto dim_it = jcon.find("dim");
    if (dim_it == jcon.end() || !dim_it->is_number_integer())
      throw JsonFormatError("constraint needs an integer dim");
    const int dim = dim_it->get<int>();
    if (dim < 1) throw JsonFormatError("constraint dim must be positive");
    add(dim, read_terms(jcon, n_vars, dim));
  }
}

}  // namespace detail

/// Reads a bilinear matrix inequality problem. Terms of degree zero, one
/// and two populate the absolute, linear and bilinear slots; repeated terms
/// for the same monomial are summed.
inline BmiData read_bmi_json(std::istream& in) {
  const detail::json j = detail::parse_json(in);
  const detail::CommonHeader head = detail::read_common_header(j, "bmi");
  BmiData data;
  data.n_vars = head.n_vars;
  data.H = head.H;
  data.c = head.c;
  data.b_lo = head.b_lo;
  data.b_up = head.b_up;

  detail::read_constraints(
      j, data.n_vars,
      [&data](int dim,
              std::vector<std::pair<std::vector<int>, SymMatrix>> terms) {
        BmiData::Constraint con;
        con.dim = dim;
        SymAccumulator q0(dim);
        std::vector<SymAccumulator> q1(static_cast<size_t>(data.n_vars),
                                       SymAccumulator(dim));
        std::map<std::pair<int, int>, SymAccumulator> q2;
        for (auto& [kappa, Q] : terms) {
          if (kappa.size() == 0) {
            q0.add(Q, 1.0);
          } else if (kappa.size() == 1) {
            q1[static_cast<size_t>(kappa[0])].add(Q, 1.0);
          } else if (kappa.size() == 2) {
            auto [it, unused] = q2.try_emplace(
                std::make_pair(kappa[0], kappa[1]), SymAccumulator(dim));
            it->second.add(Q, 1.0);
          } else {
            throw JsonFormatError(
                "bmi terms may involve at most two variables");
          }
        }
        if (!q0.empty()) con.Q0 = q0.take();
        con.Q1.resize(static_cast<size_t>(data.n_vars));
        for (size_t i = 0; i < q1.size(); ++i)
          if (!q1[i].empty()) con.Q1[i] = q1[i].take();
        for (auto& [key, acc] : q2)
          if (!acc.empty()) con.Q2[key] = acc.take();
        data.constraints.push_back(std::move(con));
      });
  return data;
}

/// Reads a polynomial matrix inequality problem: arbitrary-degree monomial
/// exponent lists with coefficient matrices.
inline PmiData read_pmi_json(std::istream& in) {
  const detail::json j = detail::parse_json(in);
  const detail::CommonHeader head = detail::read_common_header(j, "pmi");
  PmiData data;
  data.n_vars = head.n_vars;
  data.H = head.H;
  data.c = head.c;
  data.b_lo = head.b_lo;
  data.b_up = head.b_up;

  detail::read_constraints(
      j, data.n_vars,
      [&data](int dim,
              std::vector<std::pair<std::vector<int>, SymMatrix>> terms) {
        PmiData::Constraint con;
        con.dim = dim;
        for (auto& [kappa, Q] : terms)
          con.terms.push_back({std::move(kappa), std::move(Q)});
        data.constraints.push_back(std::move(con));
      });
  return data;
}

inline BmiData read_bmi_json(const std::string& text) {
  std::istringstream in(text);
  return read_bmi_json(in);
}

inline PmiData read_pmi_json(const std::string& text) {
  std::istringstream in(text);
  return read_pmi_json(in);
}

}  // namespace nlsdp
