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

#include <lapacke.h>

#include <memory>
#include <optional>
#include <sstream>

#include "nlsdp/auglag.hpp"
#include "nlsdp/core.hpp"
#include "nlsdp/problem.hpp"

namespace nlsdp {

/// Controls for the damped Newton subproblem solver.
struct NewtonOptions {
  int max_iter = 100;
  double armijo_c = 1e-4;
  double backtrack_factor = 0.5;
  double min_step = 1e-12;
  double inertia_shift_init = 1e-4;
  double inertia_shift_growth = 10.0;
  double merit_mu = 1.0;   // equality-violation weight in the merit function
  int max_factor_attempts = 40;
};

/// The saddle-point system of one Newton step: H is the Lagrangian Hessian
/// over packed variables, J the equality Jacobian (0 x N when there are no
/// equalities).
struct KKTSystem {
  Matrix H;
  Matrix J;
};

struct Inertia {
  int pos = 0;
  int neg = 0;
  int zero = 0;

  bool operator==(const Inertia&) const = default;
};

namespace detail {

/// Signs of the eigenvalues of the block-diagonal D factor produced by the
/// Bunch-Kaufman factorization (1x1 blocks and 2x2 blocks read off the
/// lower triangle).
inline Inertia bk_inertia(const Matrix& fact,
                          const std::vector<lapack_int>& ipiv, double tol) {
  Inertia out;
  const int dim = static_cast<int>(fact.rows());
  auto classify = [&](double lambda) {
    if (std::abs(lambda) <= tol)
      ++out.zero;
    else if (lambda > 0.0)
      ++out.pos;
    else
      ++out.neg;
  };
  int i = 0;
  while (i < dim) {
    if (ipiv[static_cast<size_t>(i)] > 0) {
      classify(fact(i, i));
      ++i;
    } else {
      const double a = fact(i, i);
      const double c = fact(i + 1, i + 1);
      const double b = fact(i + 1, i);
      const double mid = 0.5 * (a + c);
      const double rad = std::hypot(0.5 * (a - c), b);
      classify(mid + rad);
      classify(mid - rad);
      i += 2;
    }
  }
  return out;
}

}  // namespace detail

/// Result of factor_with_inertia: holds the Bunch-Kaufman factorization of
/// the (possibly regularized) KKT matrix together with the shifts that made
/// its inertia correct. solve() applies one step of iterative refinement so
/// the backward error stays at roundoff level.
class KKTFactorization {
 public:
  double delta = 0.0;   // primal diagonal shift applied to H
  double gamma = 0.0;   // dual regularization applied to the (2,2) block
  int attempts = 0;
  Inertia inertia;

  const Matrix& matrix() const { return orig_; }

  std::pair<Vector, Vector> solve(const Vector& r1, const Vector& r2) const {
    const int dim = n_ + m_;
    if (r1.size() != n_ || r2.size() != m_)
      throw std::invalid_argument("KKTFactorization::solve: rhs shape");
    Vector rhs(dim);
    rhs.head(n_) = r1;
    rhs.tail(m_) = r2;
    Vector x = rhs;
    backsolve(x);
    // One refinement pass keeps the backward error near machine precision
    // even when delta/gamma were needed.
    Vector r = rhs - orig_ * x;
    backsolve(r);
    x += r;
    return {x.head(n_), x.tail(m_)};
  }

 private:
  friend KKTFactorization factor_with_inertia(const KKTSystem&,
                                              const NewtonOptions&);

  void backsolve(Vector& b) const {
    const int dim = n_ + m_;
    const lapack_int info = LAPACKE_dsytrs(
        LAPACK_COL_MAJOR, 'L', dim, 1, fact_.data(), dim, ipiv_.data(),
        b.data(), dim);
    if (info != 0)
      throw FactorizationError("symmetric-indefinite backsolve failed");
  }

  int n_ = 0;
  int m_ = 0;
  Matrix orig_;   // assembled (shifted) KKT matrix
  Matrix fact_;   // dsytrf output
  std::vector<lapack_int> ipiv_;
};

/// Factors [[H + delta I, J'], [J, -gamma I]] by Bunch-Kaufman, escalating
/// delta (and, once, gamma) until the inertia equals (N, m_h, 0): delta
/// starts at zero and grows by max(init, growth * delta); gamma switches to
/// 1e-10 when zero pivots show up in an equality-constrained system.
inline KKTFactorization factor_with_inertia(const KKTSystem& kkt,
                                            const NewtonOptions& opts) {
  const int n = static_cast<int>(kkt.H.rows());
  const int m = static_cast<int>(kkt.J.rows());
  if (kkt.H.cols() != n)
    throw std::invalid_argument("factor_with_inertia: H must be square");
  if (m > 0 && kkt.J.cols() != n)
    throw std::invalid_argument("factor_with_inertia: J shape mismatch");
  const int dim = n + m;
  const Inertia target{n, m, 0};

  KKTFactorization out;
  out.n_ = n;
  out.m_ = m;

  double delta = 0.0;
  double gamma = 0.0;
  for (int attempt = 1; attempt <= opts.max_factor_attempts; ++attempt) {
    Matrix K = Matrix::Zero(dim, dim);
    K.topLeftCorner(n, n) = kkt.H;
    K.diagonal().head(n).array() += delta;
    if (m > 0) {
      K.bottomLeftCorner(m, n) = kkt.J;
      K.topRightCorner(n, m) = kkt.J.transpose();
      K.diagonal().tail(m).array() -= gamma;
    }

    Matrix fact = K;
    std::vector<lapack_int> ipiv(static_cast<size_t>(dim));
    const lapack_int info = LAPACKE_dsytrf(LAPACK_COL_MAJOR, 'L', dim,
                                           fact.data(), dim, ipiv.data());
    if (info < 0)
      throw FactorizationError("symmetric-indefinite factorization: bad arg");

    const double scale = std::max(1.0, K.cwiseAbs().maxCoeff());
    const double tol =
        static_cast<double>(dim) * std::numeric_limits<double>::epsilon() *
        scale;
    const Inertia inertia = detail::bk_inertia(fact, ipiv, tol);
    if (inertia == target) {
      out.delta = delta;
      out.gamma = gamma;
      out.attempts = attempt;
      out.inertia = inertia;
      out.orig_ = std::move(K);
      out.fact_ = std::move(fact);
      out.ipiv_ = std::move(ipiv);
      return out;
    }

    const bool zero_pivots = info > 0 || inertia.zero > 0;
    if (zero_pivots && gamma == 0.0 && m > 0) {
      gamma = 1e-10;
      continue;  // retry at the same delta
    }
    delta = std::max(opts.inertia_shift_init,
                     opts.inertia_shift_growth * delta);
  }
  std::ostringstream os;
  os << "could not reach inertia (" << target.pos << ", " << target.neg
     << ", 0) in " << opts.max_factor_attempts << " attempts";
  throw FactorizationError(os.str());
}

struct LineSearchResult {
  double step = 0.0;
  double merit = 0.0;
  int evals = 0;
  bool ok = false;
};

/// Backtracking Armijo search on a one-dimensional merit slice. merit_fn(t)
/// returns the merit at step length t, or nullopt when the trial point is
/// outside a penalty/barrier domain (treated as +inf: keep backtracking).
/// dir_deriv must be a descent slope; a nonnegative value is a caller bug.
inline LineSearchResult armijo_search(
    const std::function<std::optional<double>(double)>& merit_fn,
    double merit0, double dir_deriv, const NewtonOptions& opts) {
  if (!(dir_deriv < 0.0))
    throw std::invalid_argument(
        "armijo_search: direction is not a descent direction");
  LineSearchResult out;
  double t = 1.0;
  while (t >= opts.min_step) {
    ++out.evals;
    const std::optional<double> m = merit_fn(t);
    if (m && *m <= merit0 + opts.armijo_c * t * dir_deriv) {
      out.step = t;
      out.merit = *m;
      out.ok = true;
      return out;
    }
    t *= opts.backtrack_factor;
  }
  return out;  // ok = false: no admissible step above min_step
}

struct SubproblemResult {
  enum class Status {
    kConverged,
    kMaxIterations,
    kFactorizationFailed,
    kLineSearchFailed,
    kDomainFailed,
  };

  Vector s;
  Vector v;
  Status status = Status::kMaxIterations;
  int newton_iters = 0;
  int linesearch_evals = 0;
  double grad_norm = kInf;
  double h_norm = kInf;
  std::string message;

  bool usable() const {
    return status == Status::kConverged || status == Status::kMaxIterations;
  }
};

/// Approximately minimizes F(., v) over s while iterating v by its Newton
/// update: damped Newton on the KKT system with inertia correction and an
/// Armijo backtracking search on the merit F(s, v) + ||h||^2 / (2 mu). Stops
/// when ||grad F|| <= alpha and ||h|| <= alpha.
inline SubproblemResult solve_subproblem(const Vector& s0,
                                         const Multipliers& mult,
                                         const PenaltyState& pen,
                                         const Problem& prob, UserData& ud,
                                         double alpha,
                                         const NewtonOptions& opts,
                                         const Logger& log = {}) {
  SubproblemResult res;
  res.s = s0;
  res.v = mult.v;

  std::unique_ptr<AuglagContext> ctx;
  try {
    ctx = std::make_unique<AuglagContext>(s0, mult, pen, prob, ud);
  } catch (const DomainError& e) {
    res.status = SubproblemResult::Status::kDomainFailed;
    res.message = std::string("initial point out of domain: ") + e.what();
    return res;
  }

  const bool has_eq = prob.n_eq() > 0;
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    const Vector grad = ctx->gradient(res.v);
    const Vector& h = ctx->h_vals();
    res.grad_norm = grad.norm();
    res.h_norm = has_eq ? h.norm() : 0.0;
    if (res.grad_norm <= alpha && res.h_norm <= alpha) {
      res.status = SubproblemResult::Status::kConverged;
      return res;
    }

    KKTSystem kkt;
    kkt.H = ctx->hessian(res.v);
    kkt.J = has_eq ? ctx->eq_jacobian() : Matrix(0, prob.packed_dim());
    KKTFactorization fact;
    try {
      fact = factor_with_inertia(kkt, opts);
    } catch (const FactorizationError& e) {
      res.status = SubproblemResult::Status::kFactorizationFailed;
      res.message = e.what();
      return res;
    }
    const auto [ds, dv] =
        fact.solve(-grad, has_eq ? Vector(-h) : Vector(Vector::Zero(0)));

    // Degenerate step: the gradient lies in the row space of J, so only v
    // moves. Apply the multiplier update and rerun the optimality test.
    if (ds.norm() <= 1e-15 * (1.0 + res.s.norm())) {
      res.v += dv;
      ++res.newton_iters;
      continue;
    }

    // Directional derivative of the merit along ds; shrink the working
    // equality weight until it certifies descent (always possible for
    // h != 0; guaranteed by the inertia correction for h = 0).
    double mu = opts.merit_mu;
    const double g_dot = grad.dot(ds);
    const double hJds = has_eq ? h.dot(kkt.J * ds) : 0.0;
    double dir_deriv = g_dot + hJds / mu;
    if (has_eq && res.h_norm > 0.0) {
      while (!(dir_deriv < 0.0) && mu > 1e-12) {
        mu *= 0.1;
        dir_deriv = g_dot + hJds / mu;
      }
    }
    if (!(dir_deriv < 0.0)) {
      res.status = SubproblemResult::Status::kLineSearchFailed;
      res.message = "Newton direction is not a descent direction";
      return res;
    }

    const double merit0 = ctx->merit(res.v, mu);
    std::unique_ptr<AuglagContext> trial;
    auto merit_fn = [&](double t) -> std::optional<double> {
      try {
        trial = std::make_unique<AuglagContext>(Vector(res.s + t * ds), mult,
                                                pen, prob, ud);
      } catch (const DomainError&) {
        trial.reset();
        return std::nullopt;
      }
      return trial->merit(res.v, mu);
    };
    const LineSearchResult ls = armijo_search(merit_fn, merit0, dir_deriv,
                                              opts);
    res.linesearch_evals += ls.evals;
    if (!ls.ok) {
      res.status = SubproblemResult::Status::kLineSearchFailed;
      res.message = "line search could not find an admissible step";
      return res;
    }

    ctx = std::move(trial);
    res.s = ctx->packed();
    res.v += dv;  // full Newton step on the equality multipliers
    ++res.newton_iters;

    if (log) {
      std::ostringstream os;
      os << "    inner iter=" << res.newton_iters << " merit=" << ls.merit
         << " step=" << ls.step << " grad=" << res.grad_norm
         << " h=" << res.h_norm << " delta=" << fact.delta;
      log(os.str());
    }
  }

  // Report the state at exit so the caller can decide whether to continue.
  const Vector grad = ctx->gradient(res.v);
  res.grad_norm = grad.norm();
  res.h_norm = has_eq ? ctx->h_vals().norm() : 0.0;
  res.status = SubproblemResult::Status::kMaxIterations;
  return res;
}

}  // namespace nlsdp
