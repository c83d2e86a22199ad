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

#include "nlsdp/core.hpp"
#include "nlsdp/problem.hpp"

namespace nlsdp {
namespace detail {

/// Finite box bounds turned into scalar inequalities, ordered by variable
/// with the lower bound before the upper one.
struct BoxRows {
  struct Row {
    int var;
    bool upper;     // false: lo - x <= 0, true: x - up <= 0
    double bound;
  };
  std::vector<Row> rows;

  static BoxRows build(const Vector& lo, const Vector& up) {
    BoxRows out;
    for (int j = 0; j < lo.size(); ++j) {
      if (std::isfinite(lo[j])) out.rows.push_back({j, false, lo[j]});
      if (std::isfinite(up[j])) out.rows.push_back({j, true, up[j]});
    }
    return out;
  }

  int count() const { return static_cast<int>(rows.size()); }

  double value(const EvalPoint& pt, int i) const {
    const Row& r = rows[static_cast<size_t>(i)];
    return r.upper ? pt.x[r.var] - r.bound : r.bound - pt.x[r.var];
  }

  Vector grad(int n, int i) const {
    const Row& r = rows[static_cast<size_t>(i)];
    Vector g = Vector::Zero(n);
    g[r.var] = r.upper ? 1.0 : -1.0;
    return g;
  }
};

/// Installs callbacks for f(x) = 0.5 x' H x + c' x (H empty means zero)
/// and the box inequalities. Pd must capture the containing data by value.
template <class Shared>
void install_quadratic_objective(CallbackSet& cb, const Shared& sd, int n) {
  cb.obj_val = [sd, n](const EvalPoint& pt, UserData&) {
    double f = sd->c.dot(pt.x);
    if (sd->H.size() > 0) f += 0.5 * pt.x.dot(sd->H * pt.x);
    (void)n;
    return f;
  };
  cb.obj_grad = [sd, n](const EvalPoint& pt, UserData&) -> Vector {
    Vector g = sd->c;
    if (sd->H.size() > 0) g += sd->H * pt.x;
    (void)n;
    return g;
  };
  cb.obj_hess = [sd, n](const EvalPoint&, UserData&) -> Matrix {
    if (sd->H.size() > 0) return sd->H;
    return Matrix::Zero(n, n);
  };
}

template <class Shared>
void install_box_inequalities(CallbackSet& cb, const Shared& sd, int n) {
  cb.ineq_val = [sd](const EvalPoint& pt, int i, UserData&) {
    return sd->box.value(pt, i);
  };
  cb.ineq_grad = [sd, n](const EvalPoint&, int i, UserData&) -> Vector {
    return sd->box.grad(n, i);
  };
  cb.ineq_hess = [n](const EvalPoint&, int, UserData&) -> Matrix {
    return Matrix::Zero(n, n);
  };
}

}  // namespace detail
}  // namespace nlsdp
