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

#include <map>
#include <memory>
#include <vector>

#include "nlsdp/core.hpp"
#include "nlsdp/frontends/box_objective.hpp"
#include "nlsdp/problem.hpp"
#include "nlsdp/sym_matrix.hpp"

namespace nlsdp {

/// Bilinear matrix inequality problem
///
///   min  0.5 x' H x + c' x
///   s.t. Q0_k + sum_i x_i Qi_k + sum_{i<=j} x_i x_j Qij_k >= 0 (psd),
///        b_lo <= x <= b_up  (infinite entries drop the bound)
///
/// Empty SymMatrix slots mean a zero term.
struct BmiData {
  int n_vars = 0;
  Matrix H;   // 0 x 0 for a linear objective
  Vector c;
  Vector b_lo, b_up;

  struct Constraint {
    int dim = 0;
    SymMatrix Q0;
    std::vector<SymMatrix> Q1;                       // per variable
    std::map<std::pair<int, int>, SymMatrix> Q2;     // keyed (i, j), i <= j

    bool bilinear() const { return !Q2.empty(); }
  };
  std::vector<Constraint> constraints;

  detail::BoxRows box;  // derived; filled by bmi_define / the JSON reader
};

inline void validate_bmi(const BmiData& d) {
  if (d.n_vars < 1) throw std::invalid_argument("bmi: no variables");
  if (d.c.size() != d.n_vars)
    throw std::invalid_argument("bmi: objective size mismatch");
  if (d.H.size() > 0 && (d.H.rows() != d.n_vars || d.H.cols() != d.n_vars))
    throw std::invalid_argument("bmi: quadratic term shape mismatch");
  if (d.b_lo.size() != d.n_vars || d.b_up.size() != d.n_vars)
    throw std::invalid_argument("bmi: bound vector size mismatch");
  if (d.constraints.empty())
    throw std::invalid_argument("bmi: no matrix constraints");
  for (const auto& con : d.constraints) {
    if (con.dim < 1) throw std::invalid_argument("bmi: constraint dim < 1");
    auto check = [&](const SymMatrix& q) {
      if (!q.empty() && q.dim() != con.dim)
        throw std::invalid_argument("bmi: term dimension mismatch");
    };
    check(con.Q0);
    if (!con.Q1.empty() &&
        con.Q1.size() != static_cast<size_t>(d.n_vars))
      throw std::invalid_argument("bmi: linear term list size mismatch");
    for (const auto& q : con.Q1) check(q);
    for (const auto& [key, q] : con.Q2) {
      if (key.first > key.second || key.first < 0 || key.second >= d.n_vars)
        throw std::invalid_argument("bmi: bilinear index out of range");
      check(q);
    }
  }
}

/// Instantiates the BMI as a solvable problem. The matrix inequality is
/// negated into the <= 0 (psd order) convention internally.
inline Problem bmi_define(BmiData data) {
  data.box = detail::BoxRows::build(data.b_lo, data.b_up);
  validate_bmi(data);
  auto sd = std::make_shared<const BmiData>(std::move(data));
  const int n = sd->n_vars;

  CallbackSet cb;
  detail::install_quadratic_objective(cb, sd, n);
  if (sd->box.count() > 0) detail::install_box_inequalities(cb, sd, n);

  cb.mcon_val = [sd](const EvalPoint& pt, int k, UserData&) -> SymMatrix {
    const auto& con = sd->constraints[static_cast<size_t>(k)];
    SymAccumulator acc(con.dim);
    acc.add(con.Q0, -1.0);
    for (size_t i = 0; i < con.Q1.size(); ++i)
      acc.add(con.Q1[i], -pt.x[static_cast<int>(i)]);
    for (const auto& [key, q] : con.Q2)
      acc.add(q, -pt.x[key.first] * pt.x[key.second]);
    return acc.take();
  };
  cb.mcon_grad = [sd](const EvalPoint& pt, int k, int t,
                      UserData&) -> SymMatrix {
    const auto& con = sd->constraints[static_cast<size_t>(k)];
    SymAccumulator acc(con.dim);
    bool any = false;
    if (static_cast<size_t>(t) < con.Q1.size() &&
        !con.Q1[static_cast<size_t>(t)].empty()) {
      acc.add(con.Q1[static_cast<size_t>(t)], -1.0);
      any = true;
    }
    for (const auto& [key, q] : con.Q2) {
      if (key.first == t && key.second == t) {
        acc.add(q, -2.0 * pt.x[t]);
        any = true;
      } else if (key.first == t) {
        acc.add(q, -pt.x[key.second]);
        any = true;
      } else if (key.second == t) {
        acc.add(q, -pt.x[key.first]);
        any = true;
      }
    }
    if (!any) return SymMatrix();  // structural zero
    return acc.take();
  };
  cb.mcon_hess = [sd](const EvalPoint&, int k, int t, int u,
                      UserData&) -> SymMatrix {
    const auto& con = sd->constraints[static_cast<size_t>(k)];
    const auto it = con.Q2.find({std::min(t, u), std::max(t, u)});
    if (it == con.Q2.end() || it->second.empty()) return SymMatrix();
    return it->second.scaled(t == u ? -2.0 : -1.0);
  };

  std::vector<MatrixConSpec> cons;
  cons.reserve(sd->constraints.size());
  for (const auto& con : sd->constraints)
    cons.push_back({con.dim, !con.bilinear()});
  return Problem(n, {}, sd->box.count(), 0, std::move(cons), std::move(cb));
}

}  // namespace nlsdp
