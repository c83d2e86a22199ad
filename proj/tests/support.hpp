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

#include <random>

#include "nlsdp/core.hpp"
#include "nlsdp/sym_matrix.hpp"

namespace nlsdp::test {

inline std::mt19937 make_rng(uint32_t salt = 0) {
  return std::mt19937(0x5eed2026u ^ salt);
}

inline double urand(std::mt19937& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline int irand(std::mt19937& g, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(g);
}

inline Matrix random_matrix(std::mt19937& g, int rows, int cols,
                            double lo = -1.0, double hi = 1.0) {
  Matrix M(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) M(i, j) = urand(g, lo, hi);
  return M;
}

inline Vector random_vector(std::mt19937& g, int n, double lo = -1.0,
                            double hi = 1.0) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = urand(g, lo, hi);
  return v;
}

inline Matrix random_symmetric(std::mt19937& g, int n, double scale = 1.0) {
  Matrix M = random_matrix(g, n, n, -scale, scale);
  return 0.5 * (M + M.transpose()).eval();
}

inline Matrix random_spd(std::mt19937& g, int n, double shift = 0.1) {
  Matrix B = random_matrix(g, n, n);
  Matrix M = B * B.transpose();
  M.diagonal().array() += shift;
  return M;
}

/// Random sparse symmetric matrix with roughly `density` of the lower
/// triangle populated (always at least one entry).
inline SymMatrix random_sparse_sym(std::mt19937& g, int dim,
                                   double density = 0.3) {
  std::vector<SymEntry> entries;
  for (int c = 0; c < dim; ++c)
    for (int r = c; r < dim; ++r)
      if (urand(g, 0.0, 1.0) < density)
        entries.push_back({r, c, urand(g, -2.0, 2.0)});
  if (entries.empty())
    entries.push_back({irand(g, 0, dim - 1), 0, urand(g, -2.0, 2.0)});
  if (entries.back().row < entries.back().col)
    std::swap(entries.back().row, entries.back().col);
  return SymMatrix::from_triplets(dim, std::move(entries));
}

}  // namespace nlsdp::test
