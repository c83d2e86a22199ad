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
#include <functional>
#include <vector>

#include "nlsdp/core.hpp"

namespace nlsdp {

/// Unit matrix E_ij: single 1 at (i, j), zero elsewhere.
struct UnitMatrix {
  int dim = 0;
  int i = 0;
  int j = 0;

  Matrix dense() const {
    Matrix E = Matrix::Zero(dim, dim);
    E(i, j) = 1.0;
    return E;
  }
};

inline Matrix unit_matrix(int dim, int i, int j) {
  return UnitMatrix{dim, i, j}.dense();
}

/// Catalog of matrix-valued functions of a matrix unknown X with closed-form
/// elementwise partial derivatives. LeftMul/RightMul carry a constant factor
/// A; Power carries an exponent s >= 1.
enum class MatFun {
  kIdentity,   // F(X) = X
  kTranspose,  // F(X) = X'
  kLeftMul,    // F(X) = A X
  kRightMul,   // F(X) = X A
  kSquare,     // F(X) = X X      (X square)
  kGramT,      // F(X) = X' X
  kGram,       // F(X) = X X'
  kPower,      // F(X) = X^s      (X square, s >= 1)
  kInverse,    // F(X) = X^{-1}   (X invertible)
};

struct MatFunSpec {
  MatFun kind = MatFun::kIdentity;
  Matrix A;      // kLeftMul / kRightMul only
  int power = 2; // kPower only
};

namespace detail {

inline void check_matfun(const MatFunSpec& f, const Matrix& X) {
  switch (f.kind) {
    case MatFun::kLeftMul:
      if (f.A.cols() != X.rows())
        throw std::invalid_argument("matfun: A X dimension mismatch");
      break;
    case MatFun::kRightMul:
      if (X.cols() != f.A.rows())
        throw std::invalid_argument("matfun: X A dimension mismatch");
      break;
    case MatFun::kSquare:
    case MatFun::kPower:
      if (X.rows() != X.cols())
        throw std::invalid_argument("matfun: X must be square");
      if (f.kind == MatFun::kPower && f.power < 1)
        throw std::invalid_argument("matfun: power exponent must be >= 1");
      break;
    case MatFun::kInverse:
      if (X.rows() != X.cols())
        throw std::invalid_argument("matfun: X must be square");
      break;
    default:
      break;
  }
}

inline Matrix mat_power(const Matrix& X, int s) {
  Matrix P = Matrix::Identity(X.rows(), X.cols());
  for (int k = 0; k < s; ++k) P = (P * X).eval();
  return P;
}

/// d(X^s)/dx_ij = sum over splits a + b = s - 1 of X^a E_ij X^b. Written
/// with outer products: X^a E_ij X^b = col_i(X^a) row_j(X^b).
inline Matrix power_partial(const Matrix& X, int s, int i, int j) {
  const int n = static_cast<int>(X.rows());
  Matrix out = Matrix::Zero(n, n);
  std::vector<Matrix> pw(static_cast<size_t>(s));
  pw[0] = Matrix::Identity(n, n);
  for (int k = 1; k < s; ++k) pw[static_cast<size_t>(k)] = pw[k - 1] * X;
  for (int a = 0; a <= s - 1; ++a) {
    const int b = s - 1 - a;
    out.noalias() += pw[static_cast<size_t>(a)].col(i) *
                     pw[static_cast<size_t>(b)].row(j);
  }
  return out;
}

/// d^2(X^s)/dx_ij dx_kl: differentiate each split of the first partial.
inline Matrix power_second_partial(const Matrix& X, int s, int i, int j,
                                   int k, int l) {
  const int n = static_cast<int>(X.rows());
  Matrix out = Matrix::Zero(n, n);
  std::vector<Matrix> pw(static_cast<size_t>(s));
  pw[0] = Matrix::Identity(n, n);
  for (int t = 1; t < s; ++t) pw[static_cast<size_t>(t)] = pw[t - 1] * X;
  for (int a = 0; a <= s - 1; ++a) {
    const int b = s - 1 - a;
    // (dX^a/dx_kl) E_ij X^b
    for (int c = 0; c <= a - 1; ++c) {
      const int d = a - 1 - c;
      // X^c E_kl X^d E_ij X^b = col_k(X^c) [X^d]_li row_j(X^b)
      out.noalias() += pw[static_cast<size_t>(c)].col(k) *
                       (pw[static_cast<size_t>(d)](l, i) *
                        pw[static_cast<size_t>(b)].row(j));
    }
    // X^a E_ij (dX^b/dx_kl)
    for (int c = 0; c <= b - 1; ++c) {
      const int d = b - 1 - c;
      out.noalias() += pw[static_cast<size_t>(a)].col(i) *
                       (pw[static_cast<size_t>(c)](j, k) *
                        pw[static_cast<size_t>(d)].row(l));
    }
  }
  return out;
}

}  // namespace detail

inline Matrix matfun_value(const MatFunSpec& f, const Matrix& X) {
  detail::check_matfun(f, X);
  switch (f.kind) {
    case MatFun::kIdentity:  return X;
    case MatFun::kTranspose: return X.transpose();
    case MatFun::kLeftMul:   return f.A * X;
    case MatFun::kRightMul:  return X * f.A;
    case MatFun::kSquare:    return X * X;
    case MatFun::kGramT:     return X.transpose() * X;
    case MatFun::kGram:      return X * X.transpose();
    case MatFun::kPower:     return detail::mat_power(X, f.power);
    case MatFun::kInverse:   return X.inverse();
  }
  throw std::logic_error("matfun: unknown kind");
}

/// Elementwise partial dF/dx_ij in the independent-entries convention
/// (every x_ij is its own unknown, no symmetry assumed).
inline Matrix matfun_partial(const MatFunSpec& f, const Matrix& X, int i,
                             int j) {
  detail::check_matfun(f, X);
  const int m = static_cast<int>(X.rows());
  const int n = static_cast<int>(X.cols());
  switch (f.kind) {
    case MatFun::kIdentity: {
      Matrix E = Matrix::Zero(m, n);
      E(i, j) = 1.0;
      return E;
    }
    case MatFun::kTranspose: {
      Matrix E = Matrix::Zero(n, m);
      E(j, i) = 1.0;
      return E;
    }
    case MatFun::kLeftMul: {
      // A E_ij = col_i(A) placed in column j
      Matrix out = Matrix::Zero(f.A.rows(), n);
      out.col(j) = f.A.col(i);
      return out;
    }
    case MatFun::kRightMul: {
      // E_ij A = row_j(A) placed in row i
      Matrix out = Matrix::Zero(m, f.A.cols());
      out.row(i) = f.A.row(j);
      return out;
    }
    case MatFun::kSquare: {
      // E_ij X + X E_ij
      Matrix out = Matrix::Zero(m, m);
      out.row(i) += X.row(j);
      out.col(j) += X.col(i);
      return out;
    }
    case MatFun::kGramT: {
      // E_ji X + X' E_ij
      Matrix out = Matrix::Zero(n, n);
      out.row(j) += X.row(i);
      out.col(j) += X.row(i).transpose();
      return out;
    }
    case MatFun::kGram: {
      // E_ij X' + X E_ji
      Matrix out = Matrix::Zero(m, m);
      out.row(i) += X.transpose().row(j);
      out.col(i) += X.col(j);
      return out;
    }
    case MatFun::kPower:
      return detail::power_partial(X, f.power, i, j);
    case MatFun::kInverse: {
      // -X^{-1} E_ij X^{-1}
      const Matrix Xi = X.inverse();
      return -(Xi.col(i) * Xi.row(j));
    }
  }
  throw std::logic_error("matfun: unknown kind");
}

/// Elementwise second partial d^2F/(dx_ij dx_kl), independent convention.
/// Affine kinds return zero; Square/GramT/Gram/Power/Inverse carry the
/// product-rule terms.
inline Matrix matfun_second_partial(const MatFunSpec& f, const Matrix& X,
                                    int i, int j, int k, int l) {
  detail::check_matfun(f, X);
  const int m = static_cast<int>(X.rows());
  const int n = static_cast<int>(X.cols());
  switch (f.kind) {
    case MatFun::kIdentity:
      return Matrix::Zero(m, n);
    case MatFun::kTranspose:
      return Matrix::Zero(n, m);
    case MatFun::kLeftMul:
      return Matrix::Zero(f.A.rows(), n);
    case MatFun::kRightMul:
      return Matrix::Zero(m, f.A.cols());
    case MatFun::kSquare: {
      // E_ij E_kl + E_kl E_ij
      Matrix out = Matrix::Zero(m, m);
      if (j == k) out(i, l) += 1.0;
      if (l == i) out(k, j) += 1.0;
      return out;
    }
    case MatFun::kGramT: {
      // E_ji E_kl + E_lk E_ij
      Matrix out = Matrix::Zero(n, n);
      if (i == k) out(j, l) += 1.0;
      if (k == i) out(l, j) += 1.0;
      return out;
    }
    case MatFun::kGram: {
      // E_ij E_lk + E_kl E_ji
      Matrix out = Matrix::Zero(m, m);
      if (j == l) out(i, k) += 1.0;
      if (l == j) out(k, i) += 1.0;
      return out;
    }
    case MatFun::kPower:
      return detail::power_second_partial(X, f.power, i, j, k, l);
    case MatFun::kInverse: {
      // X^{-1} E_ij X^{-1} E_kl X^{-1} + X^{-1} E_kl X^{-1} E_ij X^{-1}
      const Matrix Xi = X.inverse();
      Matrix out = Xi.col(i) * (Xi(j, k) * Xi.row(l));
      out.noalias() += Xi.col(k) * (Xi(l, i) * Xi.row(j));
      return out;
    }
  }
  throw std::logic_error("matfun: unknown kind");
}

/// Grid of elementwise partials: table[i][j] = dF/dx_ij.
using MatTable = std::vector<std::vector<Matrix>>;

/// Grid of elementwise second partials: table[i][j][k][l].
using MatTable2 = std::vector<std::vector<MatTable>>;

/// Converts an independent-entries gradient table to the symmetric-unknown
/// convention for a symmetric X: diagonal tables are unchanged, off-diagonal
/// tables become G_ij + G_ji (the joint perturbation of x_ij and x_ji).
inline MatTable symmetrize_gradient(const MatTable& g) {
  const size_t p = g.size();
  for (const auto& row : g)
    if (row.size() != p)
      throw std::invalid_argument("symmetrize_gradient: table must be square");
  MatTable out(p, std::vector<Matrix>(p));
  for (size_t i = 0; i < p; ++i) {
    for (size_t j = 0; j < p; ++j)
      out[i][j] = (i == j) ? g[i][j] : Matrix(g[i][j] + g[j][i]);
  }
  return out;
}

/// Same rule applied independently to each index pair of a second-partial
/// table: sums the (2 or 4) orbit combinations of {(i,j),(j,i)} x {(k,l),(l,k)}.
inline Matrix symmetrize_second_partial(const MatTable2& g2, int i, int j,
                                        int k, int l) {
  auto orbit = [](int a, int b) {
    std::vector<std::pair<int, int>> o{{a, b}};
    if (a != b) o.emplace_back(b, a);
    return o;
  };
  Matrix out;
  for (const auto& [a, b] : orbit(i, j)) {
    for (const auto& [c, d] : orbit(k, l)) {
      const Matrix& term = g2[a][b][c][d];
      if (out.size() == 0)
        out = term;
      else
        out += term;
    }
  }
  return out;
}

// Scalar-valued functions of a matrix unknown: elementwise partials.

/// d(tr X)/dx_ij = delta_ij.
inline double scalar_partial_trace(int i, int j) { return i == j ? 1.0 : 0.0; }

/// d(tr A X')/dx_ij = a_ij.
inline double scalar_partial_inner(const Matrix& A, int i, int j) {
  return A(i, j);
}

/// d(a' X a)/dx_ij = a_i a_j.
inline double scalar_partial_quad(const Vector& a, int i, int j) {
  return a[i] * a[j];
}

/// d(tr X^2)/dx_ij = 2 x_ji.
inline double scalar_partial_trace_square(const Matrix& X, int i, int j) {
  return 2.0 * X(j, i);
}

// Composite rules: scalar functions of an inner matrix function Phi(X),
// given Phi and/or its elementwise partial dPhi = dPhi/dx_ij at the point.

/// d(tr Phi)/dx_ij = tr(dPhi).
inline double scalar_partial_trace_of(const Matrix& dPhi) {
  return dPhi.trace();
}

/// d(tr A Phi')/dx_ij = <A, dPhi>.
inline double scalar_partial_inner_of(const Matrix& A, const Matrix& dPhi) {
  return (A.array() * dPhi.array()).sum();
}

/// d(a' Phi a)/dx_ij = a' dPhi a.
inline double scalar_partial_quad_of(const Vector& a, const Matrix& dPhi) {
  return a.dot(dPhi * a);
}

/// d(tr Phi^2)/dx_ij = 2 tr(Phi dPhi).
inline double scalar_partial_trace_square_of(const Matrix& Phi,
                                             const Matrix& dPhi) {
  return 2.0 * (Phi * dPhi).trace();
}

/// d(tr(Phi Psi))/dx_ij = tr(dPhi Psi) + tr(Phi dPsi).
inline double scalar_partial_trace_product_of(const Matrix& Phi,
                                              const Matrix& dPhi,
                                              const Matrix& Psi,
                                              const Matrix& dPsi) {
  return (dPhi * Psi).trace() + (Phi * dPsi).trace();
}

// Finite-difference oracle for validating analytic derivatives. Central
// differences with curvature-appropriate steps; the symmetric flag perturbs
// x_ij and x_ji jointly (the symmetric-unknown convention).

using MatrixFn = std::function<Matrix(const Matrix&)>;

namespace detail {

inline double fd_step(double x, int order) {
  const double eps = std::numeric_limits<double>::epsilon();
  const double base = order == 1 ? std::cbrt(eps) : std::pow(eps, 0.25);
  return base * std::max(1.0, std::abs(x));
}

inline Matrix fd_perturb(const Matrix& X, int i, int j, double h,
                         bool symmetric) {
  Matrix Xp = X;
  Xp(i, j) += h;
  if (symmetric && i != j) Xp(j, i) += h;
  return Xp;
}

}  // namespace detail

/// table[i][j] ~= dF/dx_ij (independent convention) or the joint
/// d/d(x_ij = x_ji) when symmetric is set.
inline MatTable fd_gradient(const MatrixFn& f, const Matrix& X,
                            bool symmetric = false) {
  const int m = static_cast<int>(X.rows());
  const int n = static_cast<int>(X.cols());
  MatTable table(static_cast<size_t>(m),
                 std::vector<Matrix>(static_cast<size_t>(n)));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      const double h = detail::fd_step(X(i, j), 1);
      const Matrix fp = f(detail::fd_perturb(X, i, j, h, symmetric));
      const Matrix fm = f(detail::fd_perturb(X, i, j, -h, symmetric));
      table[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          (fp - fm) / (2.0 * h);
    }
  }
  return table;
}

/// table[i][j][k][l] ~= d^2F/(dx_ij dx_kl). Uses the 3-point formula on the
/// diagonal and the 4-corner cross formula off it. With the symmetric flag,
/// aliased pairs ((k,l) equal to (i,j) or its mirror) collapse to the
/// diagonal formula, matching the joint-perturbation semantics.
inline MatTable2 fd_hessian(const MatrixFn& f, const Matrix& X,
                            bool symmetric = false) {
  const int m = static_cast<int>(X.rows());
  const int n = static_cast<int>(X.cols());
  const Matrix f0 = f(X);
  MatTable2 table(
      static_cast<size_t>(m),
      std::vector<MatTable>(
          static_cast<size_t>(n),
          MatTable(static_cast<size_t>(m),
                   std::vector<Matrix>(static_cast<size_t>(n)))));
  auto aliases = [&](int i, int j, int k, int l) {
    if (i == k && j == l) return true;
    return symmetric && i == l && j == k && i != j;
  };
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < m; ++k) {
        for (int l = 0; l < n; ++l) {
          Matrix d2;
          if (aliases(i, j, k, l)) {
            const double h = detail::fd_step(X(i, j), 2);
            const Matrix fp = f(detail::fd_perturb(X, i, j, h, symmetric));
            const Matrix fm = f(detail::fd_perturb(X, i, j, -h, symmetric));
            d2 = (fp - 2.0 * f0 + fm) / (h * h);
          } else {
            const double hi = detail::fd_step(X(i, j), 2);
            const double hk = detail::fd_step(X(k, l), 2);
            const Matrix fpp = f(detail::fd_perturb(
                detail::fd_perturb(X, i, j, hi, symmetric), k, l, hk,
                symmetric));
            const Matrix fpm = f(detail::fd_perturb(
                detail::fd_perturb(X, i, j, hi, symmetric), k, l, -hk,
                symmetric));
            const Matrix fmp = f(detail::fd_perturb(
                detail::fd_perturb(X, i, j, -hi, symmetric), k, l, hk,
                symmetric));
            const Matrix fmm = f(detail::fd_perturb(
                detail::fd_perturb(X, i, j, -hi, symmetric), k, l, -hk,
                symmetric));
            d2 = (fpp - fpm - fmp + fmm) / (4.0 * hi * hk);
          }
          table[static_cast<size_t>(i)][static_cast<size_t>(j)]
               [static_cast<size_t>(k)][static_cast<size_t>(l)] =
                   std::move(d2);
        }
      }
    }
  }
  return table;
}

// Vector-space finite differences, for validating gradients and Hessians of
// scalar functions over the packed variable vector.

inline Vector fd_gradient_vec(const std::function<double(const Vector&)>& f,
                              const Vector& s) {
  Vector g(s.size());
  for (Eigen::Index t = 0; t < s.size(); ++t) {
    const double h = detail::fd_step(s[t], 1);
    Vector sp = s, sm = s;
    sp[t] += h;
    sm[t] -= h;
    g[t] = (f(sp) - f(sm)) / (2.0 * h);
  }
  return g;
}

inline Matrix fd_hessian_vec(const std::function<double(const Vector&)>& f,
                             const Vector& s) {
  const Eigen::Index n = s.size();
  Matrix H(n, n);
  const double f0 = f(s);
  for (Eigen::Index a = 0; a < n; ++a) {
    const double ha = detail::fd_step(s[a], 2);
    {
      Vector sp = s, sm = s;
      sp[a] += ha;
      sm[a] -= ha;
      H(a, a) = (f(sp) - 2.0 * f0 + f(sm)) / (ha * ha);
    }
    for (Eigen::Index b = a + 1; b < n; ++b) {
      const double hb = detail::fd_step(s[b], 2);
      Vector spp = s, spm = s, smp = s, smm = s;
      spp[a] += ha; spp[b] += hb;
      spm[a] += ha; spm[b] -= hb;
      smp[a] -= ha; smp[b] += hb;
      smm[a] -= ha; smm[b] -= hb;
      H(a, b) = (f(spp) - f(spm) - f(smp) + f(smm)) / (4.0 * ha * hb);
      H(b, a) = H(a, b);
    }
  }
  return H;
}

/// max_ij |A_ij - B_ij| / (1 + max_ij |B_ij|), the relative deviation used
/// throughout the derivative-consistency tests.
inline double rel_deviation(const Matrix& A, const Matrix& B) {
  return (A - B).cwiseAbs().maxCoeff() / (1.0 + B.cwiseAbs().maxCoeff());
}

inline double rel_deviation(const Vector& a, const Vector& b) {
  return (a - b).cwiseAbs().maxCoeff() / (1.0 + b.cwiseAbs().maxCoeff());
}

}  // namespace nlsdp
