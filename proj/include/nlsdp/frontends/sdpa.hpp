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

#include <cstdio>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "nlsdp/core.hpp"
#include "nlsdp/problem.hpp"
#include "nlsdp/sym_matrix.hpp"

namespace nlsdp {

/// Linear SDP in the sparse block format
///
///   min  c' x   subject to   sum_i x_i F_i - F_0 >= 0 (psd order),
///
/// block-diagonal with negative sizes marking diagonal blocks. F[i][b] is
/// the b-th block of F_i (i = 0 is the absolute term); an empty SymMatrix
/// means the block is zero.
struct SdpData {
  int m = 0;
  std::vector<int> block_sizes;
  Vector c;
  std::vector<std::vector<SymMatrix>> F;

  int n_blocks() const { return static_cast<int>(block_sizes.size()); }
};

class SdpaParseError : public std::runtime_error {
 public:
  SdpaParseError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}

  int line() const { return line_; }

 private:
  int line_ = 0;
};

namespace detail {

/// Token stream over the sparse-SDP dialect: lines starting with '"' or '*'
/// are comments, and ',', '(', ')', '{', '}' separate tokens like spaces.
class SdpaTokens {
 public:
  explicit SdpaTokens(std::istream& in) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const size_t k = line.find_first_not_of(" \t\r");
      if (k == std::string::npos) continue;
      if (line[k] == '"' || line[k] == '*') continue;
      for (char& ch : line)
        if (ch == ',' || ch == '(' || ch == ')' || ch == '{' || ch == '}' ||
            ch == '\r' || ch == '\t')
          ch = ' ';
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) toks_.emplace_back(std::move(tok), lineno);
    }
  }

  bool done() const { return pos_ >= toks_.size(); }

  int line() const {
    if (toks_.empty()) return 0;
    return toks_[std::min(pos_, toks_.size() - 1)].second;
  }

  /// Header sections tolerate annotation tokens like "=" or "mDIM": when
  /// lenient, non-numeric tokens are skipped until a number appears.
  int next_int(const char* what, bool lenient = false) {
    for (;;) {
      const auto [tok, line] = next(what);
      size_t used = 0;
      int value = 0;
      try {
        value = std::stoi(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == tok.size()) return value;
      if (!lenient)
        throw SdpaParseError(line, std::string("expected integer ") + what +
                                       ", got '" + tok + "'");
    }
  }

  double next_double(const char* what, bool lenient = false) {
    for (;;) {
      const auto [tok, line] = next(what);
      size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == tok.size()) return value;
      if (!lenient)
        throw SdpaParseError(line, std::string("expected number ") + what +
                                       ", got '" + tok + "'");
    }
  }

 private:
  std::pair<std::string, int> next(const char* what) {
    if (done())
      throw SdpaParseError(toks_.empty() ? 0 : toks_.back().second,
                           std::string("unexpected end of file, expected ") +
                               what);
    return toks_[pos_++];
  }

  std::vector<std::pair<std::string, int>> toks_;
  size_t pos_ = 0;
};

}  // namespace detail

/// Parses the sparse block SDP format. Entry rows are five numbers
/// (matno, blkno, i, j, value) with matno 0 denoting the absolute term;
/// both triangles are accepted and duplicate entries are summed.
inline SdpData read_sdpa(std::istream& in) {
  detail::SdpaTokens toks(in);
  SdpData data;
  data.m = toks.next_int("variable count", true);
  if (data.m < 1)
    throw SdpaParseError(toks.line(), "variable count must be positive");
  const int nblocks = toks.next_int("block count", true);
  if (nblocks < 1)
    throw SdpaParseError(toks.line(), "block count must be positive");
  data.block_sizes.resize(static_cast<size_t>(nblocks));
  for (int b = 0; b < nblocks; ++b) {
    const int size = toks.next_int("block size", true);
    if (size == 0) throw SdpaParseError(toks.line(), "block size is zero");
    data.block_sizes[static_cast<size_t>(b)] = size;
  }
  data.c.resize(data.m);
  for (int i = 0; i < data.m; ++i)
    data.c[i] = toks.next_double("objective coefficient", true);

  // Accumulate entries per (matrix, block).
  std::vector<std::vector<SymAccumulator>> acc;
  acc.reserve(static_cast<size_t>(data.m + 1));
  for (int mat = 0; mat <= data.m; ++mat) {
    std::vector<SymAccumulator> row;
    row.reserve(static_cast<size_t>(nblocks));
    for (int b = 0; b < nblocks; ++b)
      row.emplace_back(std::abs(data.block_sizes[static_cast<size_t>(b)]));
    acc.push_back(std::move(row));
  }
  while (!toks.done()) {
    const int mat = toks.next_int("matrix number");
    const int blk = toks.next_int("block number");
    const int i = toks.next_int("row index");
    const int j = toks.next_int("column index");
    const double value = toks.next_double("entry value");
    if (mat < 0 || mat > data.m)
      throw SdpaParseError(toks.line(), "matrix number out of range");
    if (blk < 1 || blk > nblocks)
      throw SdpaParseError(toks.line(), "block number out of range");
    const int size = data.block_sizes[static_cast<size_t>(blk - 1)];
    const int dim = std::abs(size);
    if (i < 1 || i > dim || j < 1 || j > dim)
      throw SdpaParseError(toks.line(), "entry index out of range");
    if (size < 0 && i != j)
      throw SdpaParseError(toks.line(),
                           "off-diagonal entry in a diagonal block");
    acc[static_cast<size_t>(mat)][static_cast<size_t>(blk - 1)].add(
        SymMatrix::unit(dim, i - 1, j - 1, value), 1.0);
  }

  data.F.resize(static_cast<size_t>(data.m + 1));
  for (int mat = 0; mat <= data.m; ++mat) {
    data.F[static_cast<size_t>(mat)].resize(static_cast<size_t>(nblocks));
    for (int b = 0; b < nblocks; ++b) {
      SymAccumulator& a = acc[static_cast<size_t>(mat)][static_cast<size_t>(b)];
      if (!a.empty())
        data.F[static_cast<size_t>(mat)][static_cast<size_t>(b)] = a.take();
    }
  }
  return data;
}

inline SdpData read_sdpa(const std::string& text) {
  std::istringstream in(text);
  return read_sdpa(in);
}

/// Writes the data back in the same format, upper-triangle entries, with
/// enough digits to round-trip doubles exactly.
inline void write_sdpa(std::ostream& out, const SdpData& data) {
  auto fmt = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  out << data.m << "\n" << data.n_blocks() << "\n";
  for (int b = 0; b < data.n_blocks(); ++b) {
    if (b) out << " ";
    out << data.block_sizes[static_cast<size_t>(b)];
  }
  out << "\n";
  for (int i = 0; i < data.m; ++i) {
    if (i) out << " ";
    out << fmt(data.c[i]);
  }
  out << "\n";
  for (int mat = 0; mat <= data.m; ++mat)
    for (int b = 0; b < data.n_blocks(); ++b) {
      const SymMatrix& block = data.F[static_cast<size_t>(mat)]
                                     [static_cast<size_t>(b)];
      block.for_each_lower([&](int r, int c, double v) {
        // stored lower (r >= c); emit the mirrored upper-triangle entry
        out << mat << " " << (b + 1) << " " << (c + 1) << " " << (r + 1)
            << " " << fmt(v) << "\n";
      });
    }
}

/// Instantiates the SDP as a solvable problem: dense blocks become linear
/// matrix constraints A_b(x) = F0_b - sum_i x_i F_ib <= 0, diagonal blocks
/// become per-row scalar inequalities.
inline Problem sdp_define(SdpData data) {
  if (data.m < 1) throw std::invalid_argument("sdp_define: no variables");
  if (data.c.size() != data.m)
    throw std::invalid_argument("sdp_define: objective size mismatch");
  if (data.F.size() != static_cast<size_t>(data.m + 1))
    throw std::invalid_argument("sdp_define: matrix list size mismatch");

  auto sd = std::make_shared<const SdpData>(std::move(data));

  // Index maps: dense blocks in order, then diagonal rows in order.
  std::vector<int> dense_blocks;
  std::vector<std::pair<int, int>> diag_rows;  // (block, row)
  for (int b = 0; b < sd->n_blocks(); ++b) {
    const int size = sd->block_sizes[static_cast<size_t>(b)];
    if (size > 0) {
      dense_blocks.push_back(b);
    } else {
      for (int r = 0; r < -size; ++r) diag_rows.emplace_back(b, r);
    }
  }

  CallbackSet cb;
  cb.obj_val = [sd](const EvalPoint& pt, UserData&) {
    return sd->c.dot(pt.x);
  };
  cb.obj_grad = [sd](const EvalPoint&, UserData&) -> Vector { return sd->c; };
  cb.obj_hess = [sd](const EvalPoint&, UserData&) -> Matrix {
    return Matrix::Zero(sd->m, sd->m);
  };

  if (!dense_blocks.empty()) {
    cb.mcon_val = [sd, dense_blocks](const EvalPoint& pt, int k,
                                     UserData&) -> SymMatrix {
      const int b = dense_blocks[static_cast<size_t>(k)];
      const int dim = sd->block_sizes[static_cast<size_t>(b)];
      SymAccumulator acc(dim);
      acc.add(sd->F[0][static_cast<size_t>(b)], 1.0);
      for (int i = 0; i < sd->m; ++i)
        acc.add(sd->F[static_cast<size_t>(i + 1)][static_cast<size_t>(b)],
                -pt.x[i]);
      return acc.take();
    };
    cb.mcon_grad = [sd, dense_blocks](const EvalPoint&, int k, int t,
                                      UserData&) -> SymMatrix {
      const int b = dense_blocks[static_cast<size_t>(k)];
      const SymMatrix& Ft = sd->F[static_cast<size_t>(t + 1)]
                                 [static_cast<size_t>(b)];
      if (Ft.empty()) return SymMatrix();  // structural zero
      return Ft.scaled(-1.0);
    };
  }

  if (!diag_rows.empty()) {
    cb.ineq_val = [sd, diag_rows](const EvalPoint& pt, int i, UserData&) {
      const auto [b, r] = diag_rows[static_cast<size_t>(i)];
      double g = sd->F[0][static_cast<size_t>(b)].coeff(r, r);
      for (int t = 0; t < sd->m; ++t)
        g -= pt.x[t] *
             sd->F[static_cast<size_t>(t + 1)][static_cast<size_t>(b)].coeff(
                 r, r);
      return g;
    };
    cb.ineq_grad = [sd, diag_rows](const EvalPoint&, int i,
                                   UserData&) -> Vector {
      const auto [b, r] = diag_rows[static_cast<size_t>(i)];
      Vector g(sd->m);
      for (int t = 0; t < sd->m; ++t)
        g[t] = -sd->F[static_cast<size_t>(t + 1)][static_cast<size_t>(b)]
                    .coeff(r, r);
      return g;
    };
    cb.ineq_hess = [sd](const EvalPoint&, int, UserData&) -> Matrix {
      return Matrix::Zero(sd->m, sd->m);
    };
  }

  std::vector<MatrixConSpec> cons;
  cons.reserve(dense_blocks.size());
  for (const int b : dense_blocks)
    cons.push_back({sd->block_sizes[static_cast<size_t>(b)], true});
  return Problem(sd->m, {}, static_cast<int>(diag_rows.size()), 0,
                 std::move(cons), std::move(cb));
}

}  // namespace nlsdp
