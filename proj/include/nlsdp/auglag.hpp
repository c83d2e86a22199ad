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

#include <cmath>
#include <span>
#include <vector>

#include "nlsdp/core.hpp"
#include "nlsdp/penalties.hpp"
#include "nlsdp/problem.hpp"
#include "nlsdp/sym_matrix.hpp"

namespace nlsdp {

/// Lagrange multiplier estimates carried across outer iterations. U_lo/U_hi
/// hold one (possibly empty) matrix per matrix variable; a slot is populated
/// exactly when the corresponding spectral bound is handled by a penalty
/// term (finite bound on a non-strict variable).
struct Multipliers {
  Vector u;                       // scalar inequalities, positive
  std::vector<Matrix> Xi;         // matrix constraints, PSD
  std::vector<Matrix> U_lo;       // lower spectral bounds
  std::vector<Matrix> U_hi;       // upper spectral bounds
  Vector v;                       // equalities, free sign
};

/// Penalty and barrier weights driven by the outer loop.
struct PenaltyState {
  double pi = 1.0;     // scalar-penalty scaling
  double Pi = 1.0;     // matrix-penalty asymptote
  double kappa = 1e-2; // barrier weight for strict variables
};

inline Multipliers make_default_multipliers(const Problem& p) {
  Multipliers m;
  m.u = Vector::Ones(p.n_ineq());
  m.Xi.reserve(p.matrix_cons().size());
  for (const auto& mc : p.matrix_cons())
    m.Xi.push_back(Matrix::Identity(mc.dim, mc.dim));
  m.U_lo.resize(p.matrix_vars().size());
  m.U_hi.resize(p.matrix_vars().size());
  for (size_t i = 0; i < p.matrix_vars().size(); ++i) {
    const auto& mv = p.matrix_vars()[i];
    if (!mv.strict && mv.lambda_lo)
      m.U_lo[i] = Matrix::Identity(mv.dim, mv.dim);
    if (!mv.strict && mv.lambda_hi)
      m.U_hi[i] = Matrix::Identity(mv.dim, mv.dim);
  }
  m.v = Vector::Zero(p.n_eq());
  return m;
}

namespace detail {

/// Column-grouped view of the full (mirrored) nonzero structure of a
/// SymMatrix, as consumed by the trace kernel.
struct SymColView {
  int dim = 0;
  std::vector<std::vector<std::pair<int, double>>> cols;

  SymColView() = default;
  explicit SymColView(const SymMatrix& A) : dim(A.dim()), cols(A.dim()) {
    A.for_each_lower([&](int r, int c, double v) {
      cols[static_cast<size_t>(c)].emplace_back(r, v);
      if (r != c) cols[static_cast<size_t>(r)].emplace_back(c, v);
    });
  }

  bool structurally_zero() const {
    for (const auto& col : cols)
      if (!col.empty()) return false;
    return true;
  }
};

/// z_l = <T A_k U, A_l> (elementwise matrix inner product) for l = k..end,
/// exploiting sparsity of the A_l. Partial products T[i,:] A_k U[:,j] are
/// computed at most once per (i, j) via a column-stamp cache: stamps start
/// at zero and column j is marked with j + 1 once row i's product for that
/// column is available.
inline std::vector<double> trace_kernel_views(
    const Matrix& T, const Matrix& U, std::span<const SymColView> views,
    size_t k) {
  const int m = static_cast<int>(T.rows());
  std::vector<double> z(views.size() - k, 0.0);

  // Nonempty rows of A_k (rows equal columns by symmetry).
  std::vector<int> I;
  for (int i = 0; i < m; ++i)
    if (!views[k].cols[static_cast<size_t>(i)].empty()) I.push_back(i);
  if (I.empty()) return z;

  // Columns nonempty in any A_l, l >= k.
  std::vector<char> inJ(static_cast<size_t>(m), 0);
  for (size_t l = k; l < views.size(); ++l)
    for (int j = 0; j < m; ++j)
      if (!views[l].cols[static_cast<size_t>(j)].empty())
        inJ[static_cast<size_t>(j)] = 1;

  std::vector<double> v(static_cast<size_t>(m), 0.0);
  std::vector<double> w(static_cast<size_t>(m), 0.0);
  std::vector<int> stamp(static_cast<size_t>(m), 0);

  for (int j = 0; j < m; ++j) {
    if (!inJ[static_cast<size_t>(j)]) continue;
    for (int i : I) {
      double acc = 0.0;
      for (const auto& [a, val] : views[k].cols[static_cast<size_t>(i)])
        acc += val * U(a, j);  // (A_k)_{i,a} U_{a,j}
      v[static_cast<size_t>(i)] = acc;
    }
    for (size_t l = k; l < views.size(); ++l) {
      for (const auto& [i, val] : views[l].cols[static_cast<size_t>(j)]) {
        if (stamp[static_cast<size_t>(i)] < j + 1) {
          double acc = 0.0;
          for (int a : I) acc += T(i, a) * v[static_cast<size_t>(a)];
          w[static_cast<size_t>(i)] = acc;
          stamp[static_cast<size_t>(i)] = j + 1;
        }
        z[l - k] += w[static_cast<size_t>(i)] * val;
      }
    }
  }
  return z;
}

}  // namespace detail

/// Convenience entry point over SymMatrix operands: returns
/// z_l = <T A_list[k] U, A_list[l]> for l = k..A_list.size()-1.
inline std::vector<double> trace_kernel(const Matrix& T, const Matrix& U,
                                        std::span<const SymMatrix> A_list,
                                        size_t k) {
  if (k >= A_list.size())
    throw std::invalid_argument("trace_kernel: k out of range");
  const auto m = T.rows();
  if (T.cols() != m || U.rows() != m || U.cols() != m)
    throw std::invalid_argument("trace_kernel: T and U must be square");
  for (const auto& A : A_list)
    if (A.dim() != m)
      throw std::invalid_argument("trace_kernel: operand dimension mismatch");
  std::vector<detail::SymColView> views;
  views.reserve(A_list.size());
  for (const auto& A : A_list) views.emplace_back(A);
  return detail::trace_kernel_views(T, U, views, k);
}

namespace detail {

struct BarrierTermInfo {
  enum Kind { kXPositive, kMatLower, kMatUpper } kind;
  int index = 0;   // scalar variable or matrix variable index
  double bound = 0.0;
};

inline std::vector<BarrierTermInfo> barrier_terms(const Problem& p) {
  std::vector<BarrierTermInfo> out;
  for (int j = 0; j < p.n_x(); ++j)
    if (p.x_is_strict(j)) out.push_back({BarrierTermInfo::kXPositive, j, 0.0});
  for (size_t i = 0; i < p.matrix_vars().size(); ++i) {
    const auto& mv = p.matrix_vars()[i];
    if (!mv.strict) continue;
    if (mv.lambda_lo)
      out.push_back(
          {BarrierTermInfo::kMatLower, static_cast<int>(i), *mv.lambda_lo});
    if (mv.lambda_hi)
      out.push_back(
          {BarrierTermInfo::kMatUpper, static_cast<int>(i), *mv.lambda_hi});
  }
  return out;
}

}  // namespace detail

/// All cached evaluations of the augmented Lagrangian
///
///   F(s, v) = f + sum_i u_i pi phi(g_i / pi)
///           + sum_k <Xi_k, Phi_Pi(A_k)>
///           + sum_i <Ulo_i, Phi_Pi(lo_i I - Y_i)> + <Uhi_i, Phi_Pi(Y_i - hi_i I)>
///           + kappa * (barriers of strict variables) + v' h
///
/// at one point s. Construction evaluates everything the value needs and
/// throws DomainError if any penalty or barrier argument is out of domain;
/// gradient and Hessian pieces are built lazily and cached. The equality
/// multiplier v is a method argument so one context serves all v used within
/// a Newton iteration.
class AuglagContext {
 public:
  struct MatrixTerm {
    enum Kind { kConstraint, kBoundLower, kBoundUpper } kind;
    int index = 0;  // constraint index, or matrix variable index for bounds
    bool linear = true;
    Matrix Xi;      // multiplier (copied)
    Matrix A;       // term value, full dense symmetric
    MatrixPenaltyContext pctx;
    Matrix Phi;
    // lazily populated by the gradient pass:
    Matrix W;                      // Pi^2 Z Xi Z
    std::vector<SymMatrix> dA;     // per packed variable, empty = no dependence
  };

  AuglagContext(Vector s, const Multipliers& mult, const PenaltyState& pen,
                const Problem& prob, UserData& ud)
      : prob_(&prob), ud_(&ud), pen_(pen), s_(std::move(s)) {
    check_inputs(mult);
    point_ = unpack_variables(s_, prob);
    const auto& cb = prob.callbacks();

    f_ = cb.obj_val(point_, ud);
    if (!std::isfinite(f_))
      throw DomainError("objective", "objective value is not finite");
    double total = f_;

    g_.resize(prob.n_ineq());
    u_ = mult.u;
    const ScalarPenaltyParams sp{kTauBar, pen.pi};
    for (int i = 0; i < prob.n_ineq(); ++i) {
      g_[i] = cb.ineq_val(point_, i, ud);
      if (!std::isfinite(g_[i]))
        throw DomainError("inequality", "constraint value is not finite");
      total += mult.u[i] * phi_value(g_[i], sp);
    }

    h_.resize(prob.n_eq());
    for (int i = 0; i < prob.n_eq(); ++i) {
      h_[i] = cb.eq_val(point_, i, ud);
      if (!std::isfinite(h_[i]))
        throw DomainError("equality", "constraint value is not finite");
    }

    for (size_t k = 0; k < prob.matrix_cons().size(); ++k) {
      MatrixTerm term;
      term.kind = MatrixTerm::kConstraint;
      term.index = static_cast<int>(k);
      term.linear = prob.matrix_cons()[k].is_linear;
      term.Xi = mult.Xi[k];
      const SymMatrix A = cb.mcon_val(point_, static_cast<int>(k), ud);
      if (A.dim() != prob.matrix_cons()[k].dim)
        throw std::invalid_argument("matrix constraint dimension mismatch");
      term.A = A.dense();
      total += add_penalty(term);
      terms_.push_back(std::move(term));
    }

    for (size_t i = 0; i < prob.matrix_vars().size(); ++i) {
      const auto& mv = prob.matrix_vars()[i];
      if (mv.strict) continue;
      if (mv.lambda_lo) {
        MatrixTerm term;
        term.kind = MatrixTerm::kBoundLower;
        term.index = static_cast<int>(i);
        term.Xi = mult.U_lo[i];
        term.A = -point_.Y[i];
        term.A.diagonal().array() += *mv.lambda_lo;
        total += add_penalty(term);
        terms_.push_back(std::move(term));
      }
      if (mv.lambda_hi) {
        MatrixTerm term;
        term.kind = MatrixTerm::kBoundUpper;
        term.index = static_cast<int>(i);
        term.Xi = mult.U_hi[i];
        term.A = point_.Y[i];
        term.A.diagonal().array() -= *mv.lambda_hi;
        total += add_penalty(term);
        terms_.push_back(std::move(term));
      }
    }

    for (const auto& bt : detail::barrier_terms(prob)) {
      BarrierTerm b;
      b.info = bt;
      switch (bt.kind) {
        case detail::BarrierTermInfo::kXPositive: {
          const double xj = point_.x[bt.index];
          if (!(xj > 0.0))
            throw DomainError("barrier",
                              "strict scalar variable not positive");
          total += pen.kappa * (-std::log(xj));
          break;
        }
        case detail::BarrierTermInfo::kMatLower: {
          Matrix M = point_.Y[static_cast<size_t>(bt.index)];
          M.diagonal().array() -= bt.bound;
          b.bar = barrier_logdet(SymMatrix::from_dense(M));
          total += pen.kappa * b.bar.value;
          break;
        }
        case detail::BarrierTermInfo::kMatUpper: {
          Matrix M = -point_.Y[static_cast<size_t>(bt.index)];
          M.diagonal().array() += bt.bound;
          b.bar = barrier_logdet(SymMatrix::from_dense(M));
          total += pen.kappa * b.bar.value;
          break;
        }
      }
      barriers_.push_back(std::move(b));
    }

    if (!std::isfinite(total))
      throw DomainError("auglag", "augmented Lagrangian value is not finite");
    value_base_ = total;
  }

  const Problem& problem() const { return *prob_; }
  const Vector& packed() const { return s_; }
  const EvalPoint& point() const { return point_; }
  const PenaltyState& penalties() const { return pen_; }
  double f() const { return f_; }
  const Vector& g_vals() const { return g_; }
  const Vector& h_vals() const { return h_; }
  const std::vector<MatrixTerm>& matrix_terms() const { return terms_; }

  /// F(s, v): the v-independent base plus v' h.
  double value(const Vector& v) const {
    if (v.size() != h_.size())
      throw std::invalid_argument("auglag: v length mismatch");
    return value_base_ + (h_.size() > 0 ? v.dot(h_) : 0.0);
  }

  /// Line-search merit F(s, v) + ||h||^2 / (2 mu).
  double merit(const Vector& v, double mu) const {
    return value(v) + (h_.size() > 0 ? h_.squaredNorm() / (2.0 * mu) : 0.0);
  }

  /// grad_s F(s, v).
  Vector gradient(const Vector& v) {
    ensure_gradient();
    Vector g = grad_base_;
    if (h_.size() > 0) g.noalias() += eq_jacobian().transpose() * v;
    return g;
  }

  /// hess_ss F(s, v), dense symmetric over packed variables.
  Matrix hessian(const Vector& v) {
    ensure_hessian();
    Matrix H = hess_base_;
    const auto& cb = prob_->callbacks();
    for (int i = 0; i < prob_->n_eq(); ++i)
      if (v[i] != 0.0) H.noalias() += v[i] * cb.eq_hess(point_, i, *ud_);
    return 0.5 * (H + H.transpose()).eval();
  }

  /// Jacobian of the equality constraints, one row per constraint.
  const Matrix& eq_jacobian() {
    if (!have_jac_) {
      const auto& cb = prob_->callbacks();
      jac_ = Matrix::Zero(prob_->n_eq(), prob_->packed_dim());
      for (int i = 0; i < prob_->n_eq(); ++i)
        jac_.row(i) = cb.eq_grad(point_, i, *ud_).transpose();
      have_jac_ = true;
    }
    return jac_;
  }

  static constexpr double kTauBar = -0.5;

 private:
  struct BarrierTerm {
    detail::BarrierTermInfo info;
    LogDetBarrier bar;  // matrix kinds only
  };

  void check_inputs(const Multipliers& mult) const {
    if (s_.size() != prob_->packed_dim())
      throw std::invalid_argument("auglag: packed vector length mismatch");
    if (mult.u.size() != prob_->n_ineq())
      throw std::invalid_argument("auglag: u length mismatch");
    if (mult.v.size() != prob_->n_eq())
      throw std::invalid_argument("auglag: v length mismatch");
    if (mult.Xi.size() != prob_->matrix_cons().size())
      throw std::invalid_argument("auglag: Xi count mismatch");
    if (mult.U_lo.size() != prob_->matrix_vars().size() ||
        mult.U_hi.size() != prob_->matrix_vars().size())
      throw std::invalid_argument("auglag: bound multiplier count mismatch");
    if (!(pen_.pi > 0.0) || !(pen_.Pi > 0.0) || !(pen_.kappa > 0.0))
      throw std::invalid_argument("auglag: penalty weights must be positive");
  }

  /// Fills Phi and pctx for a term and returns its value contribution.
  double add_penalty(MatrixTerm& term) {
    if (term.Xi.rows() != term.A.rows() || term.Xi.cols() != term.A.cols())
      throw std::invalid_argument("auglag: multiplier dimension mismatch");
    auto [Phi, ctx] = matrix_penalty_value(SymMatrix::from_dense(term.A),
                                           pen_.Pi);
    term.Phi = std::move(Phi);
    term.pctx = std::move(ctx);
    return (term.Xi.array() * term.Phi.array()).sum();
  }

  /// The derivative of the term argument A with respect to packed variable
  /// t. Bound terms depend affinely on their own variable's unknowns with
  /// coefficient +/-1; constraint terms ask the callback.
  SymMatrix term_dA(const MatrixTerm& term, int t) const {
    if (term.kind == MatrixTerm::kConstraint)
      return prob_->callbacks().mcon_grad(point_, term.index, t, *ud_);
    const auto& mv = prob_->matrix_vars()[static_cast<size_t>(term.index)];
    const int off = prob_->var_offset(term.index);
    if (t < off || t >= off + static_cast<int>(mv.pattern.size()))
      return SymMatrix();
    const auto [r, c] = mv.pattern[static_cast<size_t>(t - off)];
    const double sign = term.kind == MatrixTerm::kBoundLower ? -1.0 : 1.0;
    return SymMatrix::unit(mv.dim, r, c, sign);
  }

  void ensure_gradient() {
    if (have_grad_) return;
    const auto& cb = prob_->callbacks();
    const int N = prob_->packed_dim();
    Vector g = cb.obj_grad(point_, *ud_);
    if (g.size() != N)
      throw std::invalid_argument("auglag: objective gradient length");

    const ScalarPenaltyParams sp{kTauBar, pen_.pi};
    ineq_grads_.clear();
    for (int i = 0; i < prob_->n_ineq(); ++i) {
      ineq_grads_.push_back(cb.ineq_grad(point_, i, *ud_));
      g.noalias() += u_[i] * phi_d1(g_[i], sp) * ineq_grads_.back();
    }

    for (auto& term : terms_) {
      term.W = pen_.Pi * pen_.Pi * term.pctx.Z * term.Xi * term.pctx.Z;
      term.W = 0.5 * (term.W + term.W.transpose()).eval();
      term.dA.resize(static_cast<size_t>(N));
      for (int t = 0; t < N; ++t) {
        term.dA[static_cast<size_t>(t)] = term_dA(term, t);
        const SymMatrix& dA = term.dA[static_cast<size_t>(t)];
        if (dA.empty()) continue;
        if (dA.dim() != term.A.rows())
          throw std::invalid_argument(
              "auglag: constraint derivative dimension mismatch");
        g[t] += dA.inner(term.W);
      }
    }

    for (const auto& b : barriers_) add_barrier_gradient(b, g);
    grad_base_ = std::move(g);
    have_grad_ = true;
  }

  void add_barrier_gradient(const BarrierTerm& b, Vector& g) const {
    const double kappa = pen_.kappa;
    switch (b.info.kind) {
      case detail::BarrierTermInfo::kXPositive:
        g[b.info.index] += kappa * (-1.0 / point_.x[b.info.index]);
        return;
      case detail::BarrierTermInfo::kMatLower:
      case detail::BarrierTermInfo::kMatUpper: {
        // d/ds_a of -log det M with dM/ds_a = sign * (E_rc + E_cr):
        // -sign * <M^{-1}, E_rc + E_cr>.
        const double sign =
            b.info.kind == detail::BarrierTermInfo::kMatLower ? 1.0 : -1.0;
        const auto& mv = prob_->matrix_vars()[static_cast<size_t>(b.info.index)];
        const int off = prob_->var_offset(b.info.index);
        for (size_t a = 0; a < mv.pattern.size(); ++a) {
          const auto [r, c] = mv.pattern[a];
          const double minv = b.bar.Yinv(r, c);
          g[off + static_cast<int>(a)] +=
              kappa * (-sign) * (r == c ? minv : 2.0 * minv);
        }
        return;
      }
    }
  }

  void ensure_hessian() {
    if (have_hess_) return;
    ensure_gradient();
    const auto& cb = prob_->callbacks();
    const int N = prob_->packed_dim();
    Matrix H = cb.obj_hess(point_, *ud_);
    if (H.rows() != N || H.cols() != N)
      throw std::invalid_argument("auglag: objective Hessian shape");

    const ScalarPenaltyParams sp{kTauBar, pen_.pi};
    for (int i = 0; i < prob_->n_ineq(); ++i) {
      const Vector& gi = ineq_grads_[static_cast<size_t>(i)];
      H.noalias() += u_[i] * phi_d2(g_[i], sp) * (gi * gi.transpose());
      H.noalias() += u_[i] * phi_d1(g_[i], sp) * cb.ineq_hess(point_, i, *ud_);
    }

    for (const auto& term : terms_) add_matrix_term_hessian(term, H);
    for (const auto& b : barriers_) add_barrier_hessian(b, H);

    hess_base_ = std::move(H);
    have_hess_ = true;
  }

  /// Curvature of <Xi, Phi_Pi(A(s))>: the congruence part
  /// 2 <W dA_t Z dA_u> via the trace kernel over the term's nonempty
  /// derivative slots, plus <W, ddA_tu> for nonlinear constraint terms.
  void add_matrix_term_hessian(const MatrixTerm& term, Matrix& H) const {
    const int N = prob_->packed_dim();
    std::vector<int> slots;
    std::vector<detail::SymColView> views;
    for (int t = 0; t < N; ++t) {
      const SymMatrix& dA = term.dA[static_cast<size_t>(t)];
      if (dA.empty()) continue;
      detail::SymColView view(dA);
      if (view.structurally_zero()) continue;
      slots.push_back(t);
      views.push_back(std::move(view));
    }
    for (size_t a = 0; a < slots.size(); ++a) {
      const std::vector<double> z =
          detail::trace_kernel_views(term.W, term.pctx.Z, views, a);
      for (size_t b = a; b < slots.size(); ++b) {
        const double val = 2.0 * z[b - a];
        H(slots[a], slots[b]) += val;
        if (slots[a] != slots[b]) H(slots[b], slots[a]) += val;
      }
    }
    if (term.kind == MatrixTerm::kConstraint && !term.linear) {
      const auto& cb = prob_->callbacks();
      for (int t = 0; t < N; ++t) {
        for (int u = t; u < N; ++u) {
          const SymMatrix dd = cb.mcon_hess(point_, term.index, t, u, *ud_);
          if (dd.empty()) continue;
          const double val = dd.inner(term.W);
          H(t, u) += val;
          if (t != u) H(u, t) += val;
        }
      }
    }
  }

  void add_barrier_hessian(const BarrierTerm& b, Matrix& H) const {
    const double kappa = pen_.kappa;
    if (b.info.kind == detail::BarrierTermInfo::kXPositive) {
      const double xj = point_.x[b.info.index];
      H(b.info.index, b.info.index) += kappa / (xj * xj);
      return;
    }
    // Second partials of -log det M over the variable's packed unknowns:
    // sum over the symmetry orbits of both unknowns of
    // (M^{-1})_{jk} (M^{-1})_{li}; the bound's sign enters squared.
    const auto& mv = prob_->matrix_vars()[static_cast<size_t>(b.info.index)];
    const int off = prob_->var_offset(b.info.index);
    const Matrix& Minv = b.bar.Yinv;
    auto orbit = [](std::pair<int, int> rc) {
      std::vector<std::pair<int, int>> o{rc};
      if (rc.first != rc.second) o.emplace_back(rc.second, rc.first);
      return o;
    };
    for (size_t a = 0; a < mv.pattern.size(); ++a) {
      for (size_t bidx = a; bidx < mv.pattern.size(); ++bidx) {
        double acc = 0.0;
        for (const auto& [i, j] : orbit(mv.pattern[a]))
          for (const auto& [k, l] : orbit(mv.pattern[bidx]))
            acc += Minv(j, k) * Minv(l, i);
        const int ta = off + static_cast<int>(a);
        const int tb = off + static_cast<int>(bidx);
        H(ta, tb) += kappa * acc;
        if (ta != tb) H(tb, ta) += kappa * acc;
      }
    }
  }

  const Problem* prob_;
  UserData* ud_;
  PenaltyState pen_;
  Vector s_;
  EvalPoint point_;

  double f_ = 0.0;
  double value_base_ = 0.0;
  Vector g_, h_, u_;
  std::vector<MatrixTerm> terms_;
  std::vector<BarrierTerm> barriers_;

  bool have_grad_ = false;
  bool have_hess_ = false;
  bool have_jac_ = false;
  Vector grad_base_;
  Matrix hess_base_;
  Matrix jac_;
  std::vector<Vector> ineq_grads_;
};

/// One-shot evaluations (each builds a fresh context and a private copy of
/// the user payload). The equality term uses mult.v.
inline double auglag_value(const Vector& s, const Multipliers& mult,
                           const PenaltyState& pen, const Problem& prob) {
  UserData ud = prob.callbacks().user_data;
  AuglagContext ctx(s, mult, pen, prob, ud);
  return ctx.value(mult.v);
}

inline Vector auglag_gradient(const Vector& s, const Multipliers& mult,
                              const PenaltyState& pen, const Problem& prob) {
  UserData ud = prob.callbacks().user_data;
  AuglagContext ctx(s, mult, pen, prob, ud);
  return ctx.gradient(mult.v);
}

inline Matrix auglag_hessian(const Vector& s, const Multipliers& mult,
                             const PenaltyState& pen, const Problem& prob) {
  UserData ud = prob.callbacks().user_data;
  AuglagContext ctx(s, mult, pen, prob, ud);
  return ctx.hessian(mult.v);
}

}  // namespace nlsdp
