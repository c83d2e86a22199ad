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

#include <algorithm>
#include <memory>
#include <vector>

#include "nlsdp/core.hpp"
#include "nlsdp/frontends/box_objective.hpp"
#include "nlsdp/problem.hpp"
#include "nlsdp/sym_matrix.hpp"

namespace nlsdp {
namespace detail {

/// A monomial is a sorted multiset of 0-based variable indices: {} = 1,
/// {0, 0, 2} = x_0^2 x_2.
inline double monomial_value(const std::vector<int>& kappa, const Vector& x) {
  double v = 1.0;
  for (const int i : kappa) v *= x[i];
  return v;
}

inline int monomial_multiplicity(const std::vector<int>& kappa, int t) {
  return static_cast<int>(std::count(kappa.begin(), kappa.end(), t));
}

/// Removes one occurrence of t; the caller must know it is present.
inline std::vector<int> monomial_remove(std::vector<int> kappa, int t) {
  const auto it = std::find(kappa.begin(), kappa.end(), t);
  kappa.erase(it);
  return kappa;
}

}  // namespace detail

/// Polynomial matrix inequality problem
///
///   min  0.5 x' H x + c' x
///   s.t. sum_terms x^kappa Q_kappa >= 0 (psd),
///        b_lo <= x <= b_up
///
/// where each term is a monomial exponent multiset together with its
/// coefficient matrix; the empty monomial is the absolute term.
struct PmiData {
  int n_vars = 0;
  Matrix H;
  Vector c;
  Vector b_lo, b_up;

  struct Term {
    std::vector<int> kappa;  // sorted, 0-based
    SymMatrix Q;
  };
  struct Constraint {
    int dim = 0;
    std::vector<Term> terms;

    int degree() const {
      size_t d = 0;
      for (const auto& t : terms) d = std::max(d, t.kappa.size());
      return static_cast<int>(d);
    }
  };
  std::vector<Constraint> constraints;

  detail::BoxRows box;  // derived; filled by pmi_define / the JSON reader
};

inline void validate_pmi(const PmiData& d) {
  if (d.n_vars < 1) throw std::invalid_argument("pmi: no variables");
  if (d.c.size() != d.n_vars)
    throw std::invalid_argument("pmi: objective size mismatch");
  if (d.H.size() > 0 && (d.H.rows() != d.n_vars || d.H.cols() != d.n_vars))
    throw std::invalid_argument("pmi: quadratic term shape mismatch");
  if (d.b_lo.size() != d.n_vars || d.b_up.size() != d.n_vars)
    throw std::invalid_argument("pmi: bound vector size mismatch");
  if (d.constraints.empty())
    throw std::invalid_argument("pmi: no matrix constraints");
  for (const auto& con : d.constraints) {
    if (con.dim < 1) throw std::invalid_argument("pmi: constraint dim < 1");
    for (const auto& term : con.terms) {
      if (term.Q.empty() || term.Q.dim() != con.dim)
        throw std::invalid_argument("pmi: term dimension mismatch");
      if (!std::is_sorted(term.kappa.begin(), term.kappa.end()))
        throw std::invalid_argument("pmi: monomial indices not sorted");
      for (const int i : term.kappa)
        if (i < 0 || i >= d.n_vars)
          throw std::invalid_argument("pmi: monomial index out of range");
    }
  }
}

/// Instantiates the PMI as a solvable problem (negated into <= 0 order).
inline Problem pmi_define(PmiData data) {
  data.box = detail::BoxRows::build(data.b_lo, data.b_up);
  validate_pmi(data);
  auto sd = std::make_shared<const PmiData>(std::move(data));
  const int n = sd->n_vars;

  CallbackSet cb;
  detail::install_quadratic_objective(cb, sd, n);
  if (sd->box.count() > 0) detail::install_box_inequalities(cb, sd, n);

  cb.mcon_val = [sd](const EvalPoint& pt, int k, UserData&) -> SymMatrix {
    const auto& con = sd->constraints[static_cast<size_t>(k)];
    SymAccumulator acc(con.dim);
    for (const auto& term : con.terms)
      acc.add(term.Q, -detail::monomial_value(term.kappa, pt.x));
    return acc.take();
  };
  cb.mcon_grad = [sd](const EvalPoint& pt, int k, int t,
                      UserData&) -> SymMatrix {
    const auto& con = sd->constraints[static_cast<size_t>(k)];
    SymAccumulator acc(con.dim);
    bool any = false;
    for (const auto& term : con.terms) {
      const int mult = detail::monomial_multiplicity(term.kappa, t);
      if (mult == 0) continue;
      const std::vector<int> rest = detail::monomial_remove(term.kappa, t);
      acc.add(term.Q, -mult * detail::monomial_value(rest, pt.x));
      any = true;
    }
    if (!any) return SymMatrix();  // structural zero
    return acc.take();
  };
  cb.mcon_hess = [sd](const EvalPoint& pt, int k, int t, int u,
                      UserData&) -> SymMatrix {
    const auto& con = sd->constraints[static_cast<size_t>(k)];
    SymAccumulator acc(con.dim);
    bool any = false;
    for (const auto& term : con.terms) {
      const int mult_t = detail::monomial_multiplicity(term.kappa, t);
      if (mult_t == 0) continue;
      const std::vector<int> rest = detail::monomial_remove(term.kappa, t);
      const int mult_u = detail::monomial_multiplicity(rest, u);
      if (mult_u == 0) continue;
      const std::vector<int> rest2 = detail::monomial_remove(rest, u);
      acc.add(term.Q,
              -static_cast<double>(mult_t) * mult_u *
                  detail::monomial_value(rest2, pt.x));
      any = true;
    }
    if (!any) return SymMatrix();
    return acc.take();
  };

  std::vector<MatrixConSpec> cons;
  cons.reserve(sd->constraints.size());
  for (const auto& con : sd->constraints)
    cons.push_back({con.dim, con.degree() <= 1});
  return Problem(n, {}, sd->box.count(), 0, std::move(cons), std::move(cb));
}

}  // namespace nlsdp
