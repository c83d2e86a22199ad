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

#include "nlsdp/core.hpp"
#include "nlsdp/sym_matrix.hpp"

namespace nlsdp {

/// Parameters of the scalar penalty-barrier function. The function is
/// quadratic right of the switch point tau_bar and logarithmic left of it,
/// glued twice continuously differentiable:
///
///   phi(tau) = tau + tau^2/2                                   tau >= tau_bar
///   phi(tau) = -(1+tau_bar)^2 log((1+2 tau_bar-tau)/(1+tau_bar))
///              + tau_bar + tau_bar^2/2                         tau <  tau_bar
///
/// The penalty is applied with scaling pi > 0 as pi * phi(t / pi).
struct ScalarPenaltyParams {
  double tau_bar = -0.5;
  double pi = 1.0;
};

namespace detail {

inline void check_scalar_penalty_params(const ScalarPenaltyParams& p) {
  if (!(p.tau_bar > -1.0 && p.tau_bar < 0.0))
    throw std::invalid_argument("scalar penalty: tau_bar must be in (-1, 0)");
  if (!(p.pi > 0.0))
    throw std::invalid_argument("scalar penalty: pi must be positive");
}

/// Argument of the log branch; positive on the whole branch for admissible
/// tau_bar, but guarded anyway so a corrupt state surfaces as DomainError.
inline double log_branch_arg(double tau, const ScalarPenaltyParams& p) {
  const double a = 1.0 + 2.0 * p.tau_bar - tau;
  if (!(a > 0.0))
    throw DomainError("scalar-penalty",
                      "scalar penalty evaluated beyond its asymptote");
  return a;
}

}  // namespace detail

/// pi * phi(t / pi).
inline double phi_value(double t, const ScalarPenaltyParams& p) {
  detail::check_scalar_penalty_params(p);
  const double tau = t / p.pi;
  if (tau >= p.tau_bar) return p.pi * (tau + 0.5 * tau * tau);
  const double b = 1.0 + p.tau_bar;
  const double a = detail::log_branch_arg(tau, p);
  return p.pi *
         (-b * b * std::log(a / b) + p.tau_bar + 0.5 * p.tau_bar * p.tau_bar);
}

/// d/dt [pi * phi(t / pi)] = phi'(t / pi).
inline double phi_d1(double t, const ScalarPenaltyParams& p) {
  detail::check_scalar_penalty_params(p);
  const double tau = t / p.pi;
  if (tau >= p.tau_bar) return 1.0 + tau;
  const double b = 1.0 + p.tau_bar;
  return b * b / detail::log_branch_arg(tau, p);
}

/// d^2/dt^2 [pi * phi(t / pi)] = phi''(t / pi) / pi.
inline double phi_d2(double t, const ScalarPenaltyParams& p) {
  detail::check_scalar_penalty_params(p);
  const double tau = t / p.pi;
  if (tau >= p.tau_bar) return 1.0 / p.pi;
  const double b = 1.0 + p.tau_bar;
  const double a = detail::log_branch_arg(tau, p);
  return b * b / (a * a) / p.pi;
}

/// Shared factorization data for the matrix penalty at one argument:
/// Z = (Pi I - A)^{-1}, symmetric positive definite on the domain.
struct MatrixPenaltyContext {
  double Pi = 1.0;
  Matrix Z;
};

inline constexpr double kMatrixPenaltyMargin = 1e-10;

/// Matrix penalty Phi_Pi(A) = Pi^2 (Pi I - A)^{-1} - Pi I, acting on
/// eigenvalues as lambda -> Pi lambda / (Pi - lambda). Throws DomainError
/// when lambda_max(A) is not safely below Pi (relative margin 1e-10).
/// Returns the penalty value and the reusable context.
inline std::pair<Matrix, MatrixPenaltyContext> matrix_penalty_value(
    const SymMatrix& A, double Pi) {
  if (!(Pi > 0.0))
    throw std::invalid_argument("matrix penalty: Pi must be positive");
  const int n = A.dim();
  const Matrix Ad = A.dense();
  // Margin check: Pi(1 - eps) I - A must stay positive definite.
  {
    Matrix S = -Ad;
    S.diagonal().array() += Pi * (1.0 - kMatrixPenaltyMargin);
    Eigen::LLT<Matrix> llt(S);
    if (llt.info() != Eigen::Success)
      throw DomainError("matrix-penalty",
                        "matrix penalty argument too close to the asymptote");
  }
  Matrix S = -Ad;
  S.diagonal().array() += Pi;
  Eigen::LLT<Matrix> llt(S);
  if (llt.info() != Eigen::Success)
    throw DomainError("matrix-penalty",
                      "matrix penalty argument outside its domain");
  MatrixPenaltyContext ctx;
  ctx.Pi = Pi;
  ctx.Z = llt.solve(Matrix::Identity(n, n));
  ctx.Z = 0.5 * (ctx.Z + ctx.Z.transpose()).eval();
  Matrix val = Pi * Pi * ctx.Z;
  val.diagonal().array() -= Pi;
  return {std::move(val), std::move(ctx)};
}

/// First directional derivative: D Phi_Pi(A; V) = Pi^2 Z V Z.
inline Matrix matrix_penalty_grad(const MatrixPenaltyContext& ctx,
                                  const Matrix& V) {
  return ctx.Pi * ctx.Pi * ctx.Z * V * ctx.Z;
}

/// Second derivative along directions V_i, V_j with curvature term ddA
/// (the second derivative of A itself, zero for affine A):
///   Pi^2 Z (V_i Z V_j + ddA + V_j Z V_i) Z.
inline Matrix matrix_penalty_hess(const MatrixPenaltyContext& ctx,
                                  const Matrix& V_i, const Matrix& V_j,
                                  const Matrix& ddA) {
  Matrix inner = V_i * ctx.Z * V_j;
  inner += inner.transpose().eval();
  if (ddA.size() > 0) inner += ddA;
  return ctx.Pi * ctx.Pi * ctx.Z * inner * ctx.Z;
}

/// Log-determinant barrier -log det Y for strict matrix variables. The
/// gradient table is in the elementwise independent convention
/// (d/dy_ij = -(Y^{-1})_ij); hess_apply(k, l) returns Y^{-1} E_kl Y^{-1},
/// from which the independent second partial w.r.t. (i,j),(k,l) is its
/// (j, i) entry.
struct LogDetBarrier {
  double value = 0.0;
  Matrix grad;
  Matrix Yinv;

  Matrix hess_apply(int k, int l) const {
    return Yinv.col(k) * Yinv.row(l);
  }
};

inline LogDetBarrier barrier_logdet(const SymMatrix& Y) {
  const Matrix Yd = Y.dense();
  Eigen::LLT<Matrix> llt(Yd);
  if (llt.info() != Eigen::Success)
    throw DomainError("barrier", "barrier argument not positive definite");
  LogDetBarrier out;
  out.value = 0.0;
  const auto& L = llt.matrixLLT();
  for (int i = 0; i < Yd.rows(); ++i) out.value -= 2.0 * std::log(L(i, i));
  out.Yinv = llt.solve(Matrix::Identity(Yd.rows(), Yd.cols()));
  out.Yinv = 0.5 * (out.Yinv + out.Yinv.transpose()).eval();
  out.grad = -out.Yinv;
  return out;
}

}  // namespace nlsdp
