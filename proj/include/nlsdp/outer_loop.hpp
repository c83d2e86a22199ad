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
#include <optional>
#include <sstream>

#include "nlsdp/auglag.hpp"
#include "nlsdp/core.hpp"
#include "nlsdp/inner_solver.hpp"
#include "nlsdp/penalties.hpp"
#include "nlsdp/problem.hpp"

namespace nlsdp {

/// Controls for the outer multiplier/penalty loop.
struct OuterOptions {
  double epsilon = 1e-6;          // overall stopping tolerance
  double pi_eps = 1e-6;           // floor under both penalty parameters
  double pi_init = 1.0;           // initial scalar-penalty scaling
  double Pi_init = 1.0;           // initial matrix-penalty asymptote
  double penalty_factor = 0.7;    // shrink factor for pi and Pi
  double mult_restrict_mu = 0.3;  // multiplier update clamp (mu, 1/mu)
  double alpha_init = 1e-2;       // initial subproblem tolerance
  double alpha_factor = 0.2;      // shrink factor for alpha
  double alpha_floor = 1e-7;      // floor under alpha
  double kappa_init = 1e-2;       // initial barrier weight
  double kappa_factor = 0.1;      // shrink factor for kappa (no floor)
  int max_outer = 100;
  NewtonOptions newton;
  Logger log;
  bool log_inner = false;  // also route per-Newton-iteration lines to log
};

/// One row of the solve history.
struct OuterRecord {
  int outer = 0;
  double f = 0.0;
  double F = 0.0;
  double h_norm = 0.0;
  double kkt = 0.0;
  double pi = 0.0;
  double Pi = 0.0;
  double alpha = 0.0;
  double kappa = 0.0;
  int inner_iters = 0;
};

enum class SolveStatus {
  kConverged,
  kMaxOuterIterations,
  kSubproblemFailure,
  kInfeasibleStart,
};

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kConverged:
      return "converged";
    case SolveStatus::kMaxOuterIterations:
      return "max_outer_iterations";
    case SolveStatus::kSubproblemFailure:
      return "subproblem_failure";
    case SolveStatus::kInfeasibleStart:
      return "infeasible_start";
  }
  return "unknown";
}

struct SolveReport {
  SolveStatus status = SolveStatus::kMaxOuterIterations;
  std::string message;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double kkt_residual = kInf;
  int outer_iters = 0;
  int newton_iters = 0;
  int linesearch_evals = 0;
  std::vector<OuterRecord> history;
};

struct SolveResult {
  SolveReport report;
  Vector s;          // final packed iterate
  EvalPoint point;   // the same iterate, unpacked
  Multipliers mult;  // final multiplier estimates
};

/// u_i <- u_i * clamp(phi'(g_i / pi), mu, 1/mu): the first-order multiplier
/// update, restricted so no component changes by more than a factor 1/mu.
inline Vector update_scalar_multipliers(const Vector& u, const Vector& g_vals,
                                        double pi, double mu) {
  if (u.size() != g_vals.size())
    throw std::invalid_argument("update_scalar_multipliers: size mismatch");
  Vector out(u.size());
  const ScalarPenaltyParams params{AuglagContext::kTauBar, pi};
  for (int i = 0; i < u.size(); ++i)
    out[i] = u[i] * std::clamp(phi_d1(g_vals[i], params), mu, 1.0 / mu);
  return out;
}

namespace detail {

inline Matrix restrict_matrix_update(const Matrix& Xi, const Matrix& cand,
                                     double mu) {
  const double n_old = Xi.norm();
  const double n_new = cand.norm();
  if (n_old == 0.0 || n_new == 0.0) return cand;
  const double ratio = n_new / n_old;
  if (ratio < mu) return cand * (mu * n_old / n_new);
  if (ratio > 1.0 / mu) return cand * (n_old / (mu * n_new));
  return cand;
}

}  // namespace detail

/// Xi <- Pi^2 Z Xi Z with Z = (Pi I - A)^{-1}, rescaled so the Frobenius
/// norm moves by at most a factor 1/mu relative to the old multiplier. The
/// congruence keeps the update positive semidefinite and maps a zero
/// multiplier to zero.
inline Matrix update_matrix_multiplier(const Matrix& Xi, const Matrix& Z,
                                       double Pi, double mu) {
  Matrix cand = (Pi * Pi) * (Z * Xi * Z);
  cand = 0.5 * (cand + cand.transpose()).eval();
  return detail::restrict_matrix_update(Xi, cand, mu);
}

inline Matrix update_matrix_multiplier(const Matrix& Xi, const SymMatrix& A,
                                       double Pi, double mu) {
  const auto [value, ctx] = matrix_penalty_value(A, Pi);
  (void)value;
  return update_matrix_multiplier(Xi, ctx.Z, Pi, mu);
}

/// Shrinks pi, Pi (both floored at pi_eps: a value that would cross the
/// floor is held instead), kappa (no floor), and the subproblem tolerance
/// alpha (floored at alpha_floor).
inline std::pair<PenaltyState, double> update_penalties(
    const PenaltyState& pen, double alpha, const OuterOptions& opts) {
  PenaltyState next = pen;
  if (pen.pi * opts.penalty_factor >= opts.pi_eps)
    next.pi = pen.pi * opts.penalty_factor;
  if (pen.Pi * opts.penalty_factor >= opts.pi_eps)
    next.Pi = pen.Pi * opts.penalty_factor;
  next.kappa = pen.kappa * opts.kappa_factor;
  const double alpha_next =
      std::max(alpha * opts.alpha_factor, opts.alpha_floor);
  return {next, alpha_next};
}

/// Relative stopping test: the augmented objective agrees with f, f has
/// stalled across outer iterations, and the scaled KKT residual is small.
inline bool check_stop(double f_now, double f_prev, double F_now, double kkt,
                       const OuterOptions& opts) {
  const double scale = 1.0 + std::abs(f_now);
  return std::abs(f_now - F_now) / scale < opts.epsilon &&
         std::abs(f_now - f_prev) / scale < opts.epsilon &&
         kkt < opts.epsilon;
}

/// Default start: zero scalars (1 for strict ones) and spectral-midpoint
/// multiples of the identity for matrix variables.
inline Vector default_initial_point(const Problem& p) {
  Vector x = Vector::Zero(p.n_x());
  for (int j = 0; j < p.n_x(); ++j)
    if (p.x_is_strict(j)) x[j] = 1.0;
  std::vector<SymMatrix> ys;
  ys.reserve(p.matrix_vars().size());
  for (const auto& mv : p.matrix_vars()) {
    double c = 1.0;
    if (mv.lambda_lo && mv.lambda_hi)
      c = 0.5 * (*mv.lambda_lo + *mv.lambda_hi);
    else if (mv.lambda_lo)
      c = *mv.lambda_lo + 1.0;
    else if (mv.lambda_hi)
      c = *mv.lambda_hi - 1.0;
    ys.push_back(SymMatrix::identity(mv.dim).scaled(c));
  }
  return pack_variables(x, ys, p);
}

namespace detail {

/// Largest eigenvalue over all penalized matrix terms at the current point;
/// -inf when there are none.
inline double max_term_eigenvalue(const std::vector<AuglagContext::MatrixTerm>&
                                      terms) {
  double lmax = -kInf;
  for (const auto& term : terms) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(term.A,
                                             Eigen::EigenvaluesOnly);
    lmax = std::max(lmax, es.eigenvalues().maxCoeff());
  }
  return lmax;
}

/// The same bound computed without a context: evaluates the matrix
/// constraints and spectral-bound terms directly. Used to size the
/// asymptote before the first full evaluation.
inline double max_term_eigenvalue(const Problem& p, const Vector& s,
                                  UserData& ud) {
  const EvalPoint pt = unpack_variables(s, p);
  double lmax = -kInf;
  auto absorb = [&lmax](const Matrix& A) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(A, Eigen::EigenvaluesOnly);
    lmax = std::max(lmax, es.eigenvalues().maxCoeff());
  };
  for (size_t k = 0; k < p.matrix_cons().size(); ++k)
    absorb(p.callbacks().mcon_val(pt, static_cast<int>(k), ud).dense());
  for (size_t i = 0; i < p.matrix_vars().size(); ++i) {
    const auto& mv = p.matrix_vars()[i];
    if (mv.strict) continue;
    const Matrix& Y = pt.Y[i];
    const Matrix I = Matrix::Identity(mv.dim, mv.dim);
    if (mv.lambda_lo) absorb(*mv.lambda_lo * I - Y);
    if (mv.lambda_hi) absorb(Y - *mv.lambda_hi * I);
  }
  return lmax;
}

inline std::string format_outer_line(const OuterRecord& r) {
  std::ostringstream os;
  os.setf(std::ios::scientific);
  os.precision(6);
  os << "outer=" << r.outer << " f=" << r.f << " F=" << r.F
     << " hnorm=" << r.h_norm << " kkt=" << r.kkt << " pi=" << r.pi
     << " Pi=" << r.Pi << " alpha=" << r.alpha << " kappa=" << r.kappa
     << " inner=" << r.inner_iters;
  return os.str();
}

}  // namespace detail

/// Full outer loop: repeatedly minimizes the augmented Lagrangian to the
/// working tolerance, then applies the first-order multiplier updates and
/// shrinks the penalty parameters. A failed subproblem is retried once with
/// the matrix-penalty asymptote doubled.
inline SolveResult solve(const Problem& prob, const OuterOptions& opts = {},
                         std::optional<Vector> s0 = std::nullopt) {
  {
    const std::vector<Diagnostic> diags = validate(prob);
    if (!diags.empty()) {
      std::ostringstream os;
      os << "invalid problem:";
      for (const auto& d : diags) os << " [" << d.field << "] " << d.message;
      throw std::invalid_argument(os.str());
    }
  }

  SolveResult result;
  result.s = s0 ? *s0 : default_initial_point(prob);
  if (result.s.size() != prob.packed_dim())
    throw std::invalid_argument("solve: initial point has wrong dimension");
  result.mult = make_default_multipliers(prob);
  UserData ud = prob.callbacks().user_data;

  PenaltyState pen;
  pen.pi = opts.pi_init;
  pen.Pi = opts.Pi_init;
  pen.kappa = opts.kappa_init;
  double alpha = opts.alpha_init;

  SolveReport& rep = result.report;

  // Size the matrix-penalty asymptote so the initial point is inside its
  // domain, then evaluate once to check the barrier domains as well.
  double f_prev;
  const double lmax0 = detail::max_term_eigenvalue(prob, result.s, ud);
  if (lmax0 >= pen.Pi * (1.0 - 1e-8)) pen.Pi = 2.0 * lmax0;
  try {
    AuglagContext ctx(result.s, result.mult, pen, prob, ud);
    f_prev = ctx.f();
  } catch (const DomainError& e) {
    rep.status = SolveStatus::kInfeasibleStart;
    rep.message = std::string("initial point infeasible: ") + e.what();
    result.point = unpack_variables(result.s, prob);
    return result;
  }

  const Logger inner_log = opts.log_inner ? opts.log : Logger{};
  double f_now = f_prev;
  for (int ell = 1; ell <= opts.max_outer; ++ell) {
    SubproblemResult sub = solve_subproblem(result.s, result.mult, pen, prob,
                                            ud, alpha, opts.newton, inner_log);
    if (!sub.usable()) {
      // One retry with a relaxed matrix-penalty asymptote.
      pen.Pi *= 2.0;
      sub = solve_subproblem(result.s, result.mult, pen, prob, ud, alpha,
                             opts.newton, inner_log);
    }
    if (!sub.usable()) {
      rep.status = SolveStatus::kSubproblemFailure;
      rep.message = sub.message;
      break;
    }
    result.s = sub.s;
    result.mult.v = sub.v;
    rep.outer_iters = ell;
    rep.newton_iters += sub.newton_iters;
    rep.linesearch_evals += sub.linesearch_evals;

    AuglagContext ctx(result.s, result.mult, pen, prob, ud);
    f_now = ctx.f();
    const double F_now = ctx.value(result.mult.v);
    const Vector grad = ctx.gradient(result.mult.v);
    const double h_norm =
        ctx.h_vals().size() > 0 ? ctx.h_vals().lpNorm<Eigen::Infinity>() : 0.0;
    const double kkt = std::max(
        grad.lpNorm<Eigen::Infinity>() /
            (1.0 + result.s.lpNorm<Eigen::Infinity>()),
        h_norm);

    OuterRecord rec{ell,     f_now,  F_now, h_norm,     kkt,
                    pen.pi,  pen.Pi, alpha, pen.kappa,  sub.newton_iters};
    rep.history.push_back(rec);
    if (opts.log) opts.log(detail::format_outer_line(rec));
    rep.kkt_residual = kkt;

    if (check_stop(f_now, f_prev, F_now, kkt, opts)) {
      rep.status = SolveStatus::kConverged;
      break;
    }
    f_prev = f_now;

    // First-order multiplier updates at the new point, old penalties.
    result.mult.u = update_scalar_multipliers(result.mult.u, ctx.g_vals(),
                                              pen.pi, opts.mult_restrict_mu);
    for (const auto& term : ctx.matrix_terms()) {
      Matrix* slot = nullptr;
      switch (term.kind) {
        case AuglagContext::MatrixTerm::kConstraint:
          slot = &result.mult.Xi[static_cast<size_t>(term.index)];
          break;
        case AuglagContext::MatrixTerm::kBoundLower:
          slot = &result.mult.U_lo[static_cast<size_t>(term.index)];
          break;
        case AuglagContext::MatrixTerm::kBoundUpper:
          slot = &result.mult.U_hi[static_cast<size_t>(term.index)];
          break;
      }
      *slot = update_matrix_multiplier(*slot, term.pctx.Z, pen.Pi,
                                       opts.mult_restrict_mu);
    }

    // Penalty updates, holding Pi when the shrink would leave the current
    // iterate outside the matrix-penalty domain.
    const auto [pen_next_raw, alpha_next] = update_penalties(pen, alpha, opts);
    PenaltyState pen_next = pen_next_raw;
    if (pen_next.Pi < pen.Pi && !ctx.matrix_terms().empty()) {
      const double lmax = detail::max_term_eigenvalue(ctx.matrix_terms());
      if (lmax >= pen_next.Pi * (1.0 - 1e-8)) pen_next.Pi = pen.Pi;
    }
    pen = pen_next;
    alpha = alpha_next;
  }

  rep.objective = f_now;
  result.point = unpack_variables(result.s, prob);
  return result;
}

}  // namespace nlsdp
