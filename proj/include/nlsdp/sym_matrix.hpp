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
#include <map>
#include <sstream>
#include <utility>
#include <vector>

#include "nlsdp/core.hpp"

namespace nlsdp {

/// One stored entry of a symmetric matrix, lower triangle (row >= col).
/// An off-diagonal entry represents both (row, col) and (col, row).
struct SymEntry {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

/// Symmetric matrix with either dense or sparse-coordinate storage. The
/// lower triangle is authoritative in both representations; sparse entries
/// are kept canonical (sorted column-major, row >= col, duplicates merged).
/// A default-constructed SymMatrix has dim() == 0 and doubles as the
/// "no dependence" marker in derivative callbacks.
class SymMatrix {
 public:
  SymMatrix() = default;

  static SymMatrix zero(int dim) {
    SymMatrix m;
    m.dim_ = dim;
    return m;
  }

  static SymMatrix identity(int dim) {
    SymMatrix m;
    m.dim_ = dim;
    m.entries_.reserve(dim);
    for (int i = 0; i < dim; ++i) m.entries_.push_back({i, i, 1.0});
    return m;
  }

  /// Single canonical entry: value v at (r, c) and, for r != c, at (c, r).
  static SymMatrix unit(int dim, int r, int c, double v = 1.0) {
    SymMatrix m;
    m.dim_ = dim;
    if (r < c) std::swap(r, c);
    m.entries_.push_back({r, c, v});
    return m;
  }

  /// Dense storage; the lower triangle of `full` is mirrored upward, any
  /// upper-triangle content is ignored.
  static SymMatrix from_dense(const Matrix& full) {
    if (full.rows() != full.cols())
      throw std::invalid_argument("SymMatrix::from_dense: matrix not square");
    SymMatrix m;
    m.dim_ = static_cast<int>(full.rows());
    m.dense_ = full.selfadjointView<Eigen::Lower>();
    m.is_dense_ = true;
    return m;
  }

  /// Dense storage with a symmetry check; rejects input whose upper and
  /// lower triangles disagree beyond `tol` (used by front ends on user data).
  static SymMatrix from_dense_checked(const Matrix& full, double tol = 1e-12) {
    if (full.rows() != full.cols())
      throw std::invalid_argument("SymMatrix: matrix not square");
    const double dev = (full - full.transpose()).cwiseAbs().maxCoeff();
    if (!(dev <= tol * std::max(1.0, full.cwiseAbs().maxCoeff()))) {
      std::ostringstream os;
      os << "SymMatrix: matrix not symmetric (deviation " << dev << ")";
      throw std::invalid_argument(os.str());
    }
    return from_dense(full);
  }

  /// Sparse storage from coordinate triplets. Entries may arrive in either
  /// triangle and in any order; they are folded to the lower triangle, sorted
  /// column-major and duplicates are summed.
  static SymMatrix from_triplets(int dim, std::vector<SymEntry> entries) {
    SymMatrix m;
    m.dim_ = dim;
    for (auto& e : entries) {
      if (e.row < 0 || e.col < 0 || e.row >= dim || e.col >= dim)
        throw std::invalid_argument("SymMatrix: entry index out of range");
      if (e.row < e.col) std::swap(e.row, e.col);
    }
    std::sort(entries.begin(), entries.end(),
              [](const SymEntry& a, const SymEntry& b) {
                return std::pair(a.col, a.row) < std::pair(b.col, b.row);
              });
    for (const auto& e : entries) {
      if (!m.entries_.empty() && m.entries_.back().row == e.row &&
          m.entries_.back().col == e.col) {
        m.entries_.back().value += e.value;
      } else {
        m.entries_.push_back(e);
      }
    }
    return m;
  }

  int dim() const { return dim_; }
  bool empty() const { return dim_ == 0; }
  bool is_dense() const { return is_dense_; }

  /// Stored lower-triangle entries (sparse storage only; canonical order).
  const std::vector<SymEntry>& entries() const { return entries_; }

  int nnz_lower() const {
    if (!is_dense_) return static_cast<int>(entries_.size());
    int n = 0;
    for (int c = 0; c < dim_; ++c)
      for (int r = c; r < dim_; ++r)
        if (dense_(r, c) != 0.0) ++n;
    return n;
  }

  /// Full symmetric dense form.
  Matrix dense() const {
    if (is_dense_) return dense_;
    Matrix full = Matrix::Zero(dim_, dim_);
    for (const auto& e : entries_) {
      full(e.row, e.col) = e.value;
      full(e.col, e.row) = e.value;
    }
    return full;
  }

  double coeff(int r, int c) const {
    if (is_dense_) return r >= c ? dense_(r, c) : dense_(c, r);
    if (r < c) std::swap(r, c);
    auto it = std::lower_bound(entries_.begin(), entries_.end(),
                               std::pair(c, r),
                               [](const SymEntry& e, const std::pair<int, int>& k) {
                                 return std::pair(e.col, e.row) < k;
                               });
    if (it != entries_.end() && it->col == c && it->row == r) return it->value;
    return 0.0;
  }

  /// Visits every structurally nonzero lower-triangle entry as f(r, c, v).
  /// Dense storage skips exact zeros so both representations expose the same
  /// nonzero structure to the assembly kernels.
  template <class F>
  void for_each_lower(F&& f) const {
    if (is_dense_) {
      for (int c = 0; c < dim_; ++c)
        for (int r = c; r < dim_; ++r)
          if (dense_(r, c) != 0.0) f(r, c, dense_(r, c));
    } else {
      for (const auto& e : entries_) f(e.row, e.col, e.value);
    }
  }

  /// Frobenius inner product <this, W> with a full symmetric dense W.
  double inner(const Matrix& W) const {
    double acc = 0.0;
    for_each_lower([&](int r, int c, double v) {
      acc += (r == c ? 1.0 : 2.0) * v * W(r, c);
    });
    return acc;
  }

  SymMatrix scaled(double a) const {
    SymMatrix m = *this;
    if (m.is_dense_) {
      m.dense_ *= a;
    } else {
      for (auto& e : m.entries_) e.value *= a;
    }
    return m;
  }

 private:
  int dim_ = 0;
  bool is_dense_ = false;
  Matrix dense_;                   // full symmetric when is_dense_
  std::vector<SymEntry> entries_;  // canonical lower triangle otherwise
};

/// Representation-independent equality: both operands are rendered to full
/// dense form (the canonicalization) and compared entrywise within atol.
inline bool sym_equal(const SymMatrix& a, const SymMatrix& b,
                      double atol = 0.0) {
  if (a.dim() != b.dim()) return false;
  if (a.dim() == 0) return true;
  return ((a.dense() - b.dense()).cwiseAbs().maxCoeff() <= atol);
}

/// Accumulator for sparse symmetric sums (used by the BMI/PMI front ends to
/// combine term matrices without densifying).
class SymAccumulator {
 public:
  explicit SymAccumulator(int dim) : dim_(dim) {}

  void add(const SymMatrix& m, double scale) {
    if (m.empty() || scale == 0.0) return;
    if (m.dim() != dim_)
      throw std::invalid_argument("SymAccumulator: dimension mismatch");
    m.for_each_lower([&](int r, int c, double v) {
      acc_[{c, r}] += scale * v;
    });
  }

  bool empty() const { return acc_.empty(); }

  SymMatrix take() const {
    std::vector<SymEntry> entries;
    entries.reserve(acc_.size());
    for (const auto& [key, v] : acc_)
      entries.push_back({key.second, key.first, v});
    return SymMatrix::from_triplets(dim_, std::move(entries));
  }

 private:
  int dim_;
  std::map<std::pair<int, int>, double> acc_;  // keyed (col, row)
};

}  // namespace nlsdp
