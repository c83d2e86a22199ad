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

#include <optional>
#include <span>
#include <vector>

#include "nlsdp/core.hpp"
#include "nlsdp/sym_matrix.hpp"

namespace nlsdp {

/// Sparsity pattern of a symmetric matrix variable: lower-triangle index
/// pairs (row >= col). Off-pattern entries are fixed to zero.
using Pattern = std::vector<std::pair<int, int>>;

/// Canonical order: column-major over the lower triangle, deduplicated.
/// Entries given in the upper triangle are folded down.
inline Pattern canonical_pattern(Pattern p) {
  for (auto& [r, c] : p)
    if (r < c) std::swap(r, c);
  std::sort(p.begin(), p.end(), [](const auto& a, const auto& b) {
    return std::pair(a.second, a.first) < std::pair(b.second, b.first);
  });
  p.erase(std::unique(p.begin(), p.end()), p.end());
  return p;
}

inline Pattern full_pattern(int dim) {
  Pattern p;
  p.reserve(dim * (dim + 1) / 2);
  for (int c = 0; c < dim; ++c)
    for (int r = c; r < dim; ++r) p.emplace_back(r, c);
  return p;
}

/// A symmetric matrix variable Y with optional spectral bounds
/// lambda_lo * I <= Y <= lambda_hi * I. Strict variables keep their bounds
/// strictly feasible via barrier terms instead of penalty terms.
struct MatrixVarSpec {
  int dim = 0;
  Pattern pattern;  // must contain every diagonal entry
  std::optional<double> lambda_lo;
  std::optional<double> lambda_hi;
  bool strict = false;
};

/// A matrix inequality constraint A(x, Y) <= 0 (negative semidefinite).
/// is_linear promises identically zero second derivatives, letting the
/// Hessian assembly skip the element-Hessian callback.
struct MatrixConSpec {
  int dim = 0;
  bool is_linear = false;
};

/// Unpacked view of one iterate: the scalar variables and each matrix
/// variable as a full dense symmetric matrix (off-pattern entries zero).
struct EvalPoint {
  Vector x;
  std::vector<Matrix> Y;
};

/// User-supplied evaluation callbacks. Scalar-function gradients and
/// Hessians are over the packed variable vector (matrix-variable unknowns
/// already symmetrized: the packed slot for an off-diagonal unknown carries
/// d/dy_rs + d/dy_sr). Matrix-constraint derivatives are elementwise: the
/// partial of A_k with respect to packed variable t, itself a symmetric
/// matrix. Derivative callbacks may return a default-constructed SymMatrix
/// to mean "no dependence". mcon_hess is only ever invoked with t <= u; the
/// (u, t) mirror is supplied by symmetry on the caller's side.
struct CallbackSet {
  std::function<double(const EvalPoint&, UserData&)> obj_val;
  std::function<Vector(const EvalPoint&, UserData&)> obj_grad;
  std::function<Matrix(const EvalPoint&, UserData&)> obj_hess;

  std::function<double(const EvalPoint&, int, UserData&)> ineq_val;
  std::function<Vector(const EvalPoint&, int, UserData&)> ineq_grad;
  std::function<Matrix(const EvalPoint&, int, UserData&)> ineq_hess;

  std::function<double(const EvalPoint&, int, UserData&)> eq_val;
  std::function<Vector(const EvalPoint&, int, UserData&)> eq_grad;
  std::function<Matrix(const EvalPoint&, int, UserData&)> eq_hess;

  std::function<SymMatrix(const EvalPoint&, int, UserData&)> mcon_val;
  std::function<SymMatrix(const EvalPoint&, int, int, UserData&)> mcon_grad;
  std::function<SymMatrix(const EvalPoint&, int, int, int, UserData&)>
      mcon_hess;

  UserData user_data;
};

/// Immutable problem description
///
///   min  f(x, Y)
///   s.t. g_i(x, Y) <= 0            i = 1..n_ineq
///        h_i(x, Y)  = 0            i = 1..n_eq
///        A_i(x, Y) <= 0 (psd order) per matrix_cons
///        lambda_lo_i I <= Y_i <= lambda_hi_i I
///        x_j > 0 for strict scalar variables
///
/// Matrix-variable patterns are canonicalized on construction and the packed
/// layout (x first, then each variable's pattern entries) is precomputed.
class Problem {
 public:
  Problem() = default;

  Problem(int n_x, std::vector<MatrixVarSpec> matrix_vars, int n_ineq,
          int n_eq, std::vector<MatrixConSpec> matrix_cons,
          CallbackSet callbacks, std::vector<bool> x_strict = {})
      : n_x_(n_x),
        matrix_vars_(std::move(matrix_vars)),
        n_ineq_(n_ineq),
        n_eq_(n_eq),
        matrix_cons_(std::move(matrix_cons)),
        callbacks_(std::move(callbacks)),
        x_strict_(std::move(x_strict)) {
    for (auto& mv : matrix_vars_) mv.pattern = canonical_pattern(mv.pattern);
    offsets_.resize(matrix_vars_.size() + 1);
    offsets_[0] = n_x_;
    for (size_t i = 0; i < matrix_vars_.size(); ++i)
      offsets_[i + 1] =
          offsets_[i] + static_cast<int>(matrix_vars_[i].pattern.size());
  }

  int n_x() const { return n_x_; }
  int n_ineq() const { return n_ineq_; }
  int n_eq() const { return n_eq_; }
  const std::vector<MatrixVarSpec>& matrix_vars() const {
    return matrix_vars_;
  }
  const std::vector<MatrixConSpec>& matrix_cons() const {
    return matrix_cons_;
  }
  const CallbackSet& callbacks() const { return callbacks_; }
  const std::vector<bool>& x_strict() const { return x_strict_; }

  bool x_is_strict(int j) const {
    return !x_strict_.empty() && x_strict_[static_cast<size_t>(j)];
  }

  /// Total packed dimension: n_x plus all pattern entries.
  int packed_dim() const { return offsets_.back(); }

  /// Packed index of the first unknown of matrix variable i.
  int var_offset(int i) const { return offsets_[static_cast<size_t>(i)]; }

 private:
  int n_x_ = 0;
  std::vector<MatrixVarSpec> matrix_vars_;
  int n_ineq_ = 0;
  int n_eq_ = 0;
  std::vector<MatrixConSpec> matrix_cons_;
  CallbackSet callbacks_;
  std::vector<bool> x_strict_;
  std::vector<int> offsets_;
};

struct Diagnostic {
  std::string field;
  std::string message;
};

/// Structural checks; an empty result means the problem is well formed.
inline std::vector<Diagnostic> validate(const Problem& p) {
  std::vector<Diagnostic> out;
  auto bad = [&](std::string field, std::string msg) {
    out.push_back({std::move(field), std::move(msg)});
  };

  if (p.n_x() < 0) bad("n_x", "negative scalar variable count");
  if (p.n_ineq() < 0) bad("n_ineq", "negative inequality count");
  if (p.n_eq() < 0) bad("n_eq", "negative equality count");
  if (p.n_x() == 0 && p.matrix_vars().empty())
    bad("variables", "problem has no variables");
  if (!p.x_strict().empty() &&
      static_cast<int>(p.x_strict().size()) != p.n_x())
    bad("x_strict", "strict mask length differs from n_x");

  for (size_t i = 0; i < p.matrix_vars().size(); ++i) {
    const auto& mv = p.matrix_vars()[i];
    const std::string field = "matrix_vars[" + std::to_string(i) + "]";
    if (mv.dim < 1) {
      bad(field, "dimension must be at least 1");
      continue;
    }
    if (mv.lambda_lo && mv.lambda_hi && !(*mv.lambda_lo < *mv.lambda_hi))
      bad(field, "lower spectral bound not below upper bound");
    if (mv.strict && !mv.lambda_lo && !mv.lambda_hi)
      bad(field, "strict variable needs at least one spectral bound");
    std::vector<bool> diag_seen(static_cast<size_t>(mv.dim), false);
    bool range_ok = true;
    for (const auto& [r, c] : mv.pattern) {
      if (r < 0 || c < 0 || r >= mv.dim || c >= mv.dim) {
        range_ok = false;
        continue;
      }
      if (r == c) diag_seen[static_cast<size_t>(r)] = true;
    }
    if (!range_ok) bad(field, "pattern entry out of range");
    if (!std::all_of(diag_seen.begin(), diag_seen.end(),
                     [](bool b) { return b; }))
      bad(field, "pattern must contain every diagonal entry");
  }

  for (size_t k = 0; k < p.matrix_cons().size(); ++k) {
    if (p.matrix_cons()[k].dim < 1)
      bad("matrix_cons[" + std::to_string(k) + "]",
          "dimension must be at least 1");
  }

  const auto& cb = p.callbacks();
  if (!cb.obj_val || !cb.obj_grad || !cb.obj_hess)
    bad("callbacks", "objective value/gradient/Hessian are required");
  if (p.n_ineq() > 0 && (!cb.ineq_val || !cb.ineq_grad || !cb.ineq_hess))
    bad("callbacks", "inequality callbacks missing");
  if (p.n_eq() > 0 && (!cb.eq_val || !cb.eq_grad || !cb.eq_hess))
    bad("callbacks", "equality callbacks missing");
  if (!p.matrix_cons().empty() && (!cb.mcon_val || !cb.mcon_grad))
    bad("callbacks", "matrix-constraint value/gradient callbacks missing");
  const bool any_nonlinear_mcon =
      std::any_of(p.matrix_cons().begin(), p.matrix_cons().end(),
                  [](const MatrixConSpec& mc) { return !mc.is_linear; });
  if (any_nonlinear_mcon && !cb.mcon_hess)
    bad("callbacks",
        "element-Hessian callback required for nonlinear matrix constraints");

  return out;
}

/// Packs (x, Y_1..Y_q) into the flat variable vector: x first, then each
/// variable's pattern entries in canonical order.
inline Vector pack_variables(const Vector& x, std::span<const SymMatrix> Y,
                             const Problem& p) {
  if (x.size() != p.n_x())
    throw std::invalid_argument("pack_variables: x length mismatch");
  if (Y.size() != p.matrix_vars().size())
    throw std::invalid_argument("pack_variables: matrix variable count");
  Vector s(p.packed_dim());
  s.head(p.n_x()) = x;
  for (size_t i = 0; i < Y.size(); ++i) {
    const auto& mv = p.matrix_vars()[i];
    if (Y[i].dim() != mv.dim)
      throw std::invalid_argument("pack_variables: matrix dimension mismatch");
    int t = p.var_offset(static_cast<int>(i));
    for (const auto& [r, c] : mv.pattern) s[t++] = Y[i].coeff(r, c);
  }
  return s;
}

/// Inverse of pack_variables; matrix variables come back as full dense
/// symmetric matrices with off-pattern entries zero.
inline EvalPoint unpack_variables(const Vector& s, const Problem& p) {
  if (s.size() != p.packed_dim())
    throw std::invalid_argument("unpack_variables: length mismatch");
  EvalPoint pt;
  pt.x = s.head(p.n_x());
  pt.Y.reserve(p.matrix_vars().size());
  for (size_t i = 0; i < p.matrix_vars().size(); ++i) {
    const auto& mv = p.matrix_vars()[i];
    Matrix Y = Matrix::Zero(mv.dim, mv.dim);
    int t = p.var_offset(static_cast<int>(i));
    for (const auto& [r, c] : mv.pattern) {
      Y(r, c) = s[t];
      Y(c, r) = s[t];
      ++t;
    }
    pt.Y.push_back(std::move(Y));
  }
  return pt;
}

}  // namespace nlsdp
