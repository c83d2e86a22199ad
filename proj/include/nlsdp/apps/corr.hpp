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
#include <memory>
#include <sstream>
#include <string>

#include "nlsdp/core.hpp"
#include "nlsdp/problem.hpp"

namespace nlsdp {

/// Nearest correlation matrix with a bounded condition number.
///
/// Given a symmetric estimate H, find the correlation matrix X closest to
/// it in the Frobenius norm whose condition number is at most kappa. With
/// the substitution Xt = X / z (z > 0 scalar) this becomes
///
///   min_{z, Xt}  || z Xt - H ||_F^2
///   s.t.         z Xt_ii - 1 = 0   for each i
///                I <= Xt <= kappa I  (spectral order),
///
/// a problem with one strict scalar variable and one bounded matrix
/// variable. The solution is recovered as X = z Xt.

/// Reads a symmetric matrix: optional '#' comment lines, the dimension,
/// then dim * dim row-major values.
inline Matrix read_corr_matrix(std::istream& in) {
  std::string line;
  std::ostringstream numbers;
  while (std::getline(in, line)) {
    const size_t k = line.find_first_not_of(" \t\r");
    if (k == std::string::npos || line[k] == '#') continue;
    numbers << line << ' ';
  }
  std::istringstream vals(numbers.str());
  int dim = 0;
  if (!(vals >> dim) || dim < 1)
    throw std::runtime_error("correlation input: bad dimension");
  Matrix H(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c)
      if (!(vals >> H(r, c)))
        throw std::runtime_error("correlation input: too few entries");
  double trailing;
  if (vals >> trailing)
    throw std::runtime_error("correlation input: trailing data");
  if (!H.isApprox(H.transpose(), 1e-12))
    throw std::runtime_error("correlation input: matrix is not symmetric");
  return H;
}

namespace detail {

struct CorrData {
  Matrix H;
  double kappa = 0.0;
  Pattern pattern;            // packed order of the matrix unknowns
  std::vector<int> diag_idx;  // packed slot of each diagonal entry
};

}  // namespace detail

/// Builds the condition-number-constrained nearest-correlation problem.
inline Problem corr_define(Matrix H, double kappa) {
  if (H.rows() != H.cols() || H.rows() < 1)
    throw std::invalid_argument("corr_define: H must be square");
  if (!H.isApprox(H.transpose(), 1e-12))
    throw std::invalid_argument("corr_define: H must be symmetric");
  if (!(kappa > 1.0))
    throw std::invalid_argument(
        "corr_define: condition bound must exceed 1");
  const int n = static_cast<int>(H.rows());

  auto cd = std::make_shared<detail::CorrData>();
  cd->H = std::move(H);
  cd->kappa = kappa;
  cd->pattern = canonical_pattern(full_pattern(n));
  cd->diag_idx.resize(static_cast<size_t>(n), -1);
  for (size_t k = 0; k < cd->pattern.size(); ++k) {
    const auto [r, c] = cd->pattern[k];
    if (r == c) cd->diag_idx[static_cast<size_t>(r)] = static_cast<int>(k);
  }
  const int packed = 1 + static_cast<int>(cd->pattern.size());

  CallbackSet cb;
  cb.obj_val = [cd](const EvalPoint& pt, UserData&) {
    return (pt.x[0] * pt.Y[0] - cd->H).squaredNorm();
  };
  cb.obj_grad = [cd, packed](const EvalPoint& pt, UserData&) -> Vector {
    const double z = pt.x[0];
    const Matrix& X = pt.Y[0];
    const Matrix R = z * X - cd->H;
    Vector g = Vector::Zero(packed);
    g[0] = 2.0 * R.cwiseProduct(X).sum();
    for (size_t k = 0; k < cd->pattern.size(); ++k) {
      const auto [r, c] = cd->pattern[k];
      const double full = 2.0 * z * R(r, c);
      g[1 + static_cast<int>(k)] = (r == c) ? full : 2.0 * full;
    }
    return g;
  };
  cb.obj_hess = [cd, packed](const EvalPoint& pt, UserData&) -> Matrix {
    const double z = pt.x[0];
    const Matrix& X = pt.Y[0];
    Matrix out = Matrix::Zero(packed, packed);
    out(0, 0) = 2.0 * X.squaredNorm();
    for (size_t k = 0; k < cd->pattern.size(); ++k) {
      const auto [r, c] = cd->pattern[k];
      const int idx = 1 + static_cast<int>(k);
      const double cross = 4.0 * z * X(r, c) - 2.0 * cd->H(r, c);
      out(0, idx) = out(idx, 0) = (r == c) ? cross : 2.0 * cross;
      out(idx, idx) = (r == c) ? 2.0 * z * z : 4.0 * z * z;
    }
    return out;
  };
  cb.eq_val = [](const EvalPoint& pt, int i, UserData&) {
    return pt.x[0] * pt.Y[0](i, i) - 1.0;
  };
  cb.eq_grad = [cd, packed](const EvalPoint& pt, int i,
                            UserData&) -> Vector {
    Vector g = Vector::Zero(packed);
    g[0] = pt.Y[0](i, i);
    g[1 + cd->diag_idx[static_cast<size_t>(i)]] = pt.x[0];
    return g;
  };
  cb.eq_hess = [cd, packed](const EvalPoint&, int i, UserData&) -> Matrix {
    Matrix out = Matrix::Zero(packed, packed);
    const int idx = 1 + cd->diag_idx[static_cast<size_t>(i)];
    out(0, idx) = out(idx, 0) = 1.0;
    return out;
  };

  std::vector<MatrixVarSpec> vars;
  vars.push_back({n, full_pattern(n), 1.0, kappa, false});
  return Problem(1, std::move(vars), 0, n, {}, std::move(cb), {true});
}

struct CorrSolution {
  double zeta = 0.0;  // the condition-scaling factor 1 / z
  Matrix X;           // the recovered correlation matrix z * Xt
};

inline CorrSolution corr_recover(const EvalPoint& pt) {
  CorrSolution out;
  const double z = pt.x[0];
  out.zeta = 1.0 / z;
  out.X = z * pt.Y[0];
  return out;
}

}  // namespace nlsdp
