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

#include "nlsdp/apps/corr.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "nlsdp/matcalc.hpp"
#include "nlsdp/outer_loop.hpp"
#include "support.hpp"

namespace nlsdp {
namespace {

std::string data_path(const std::string& name) {
  return std::string(NLSDP_DATA_DIR) + "/" + name;
}

Matrix load_corr6() {
  std::ifstream in(data_path("corr6.txt"));
  EXPECT_TRUE(in.good());
  return read_corr_matrix(in);
}

TEST(CorrRead, ParsesDataFile) {
  const Matrix H = load_corr6();
  ASSERT_EQ(H.rows(), 6);
  ASSERT_EQ(H.cols(), 6);
  EXPECT_DOUBLE_EQ(H(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(H(0, 1), -0.44);
  EXPECT_DOUBLE_EQ(H(3, 0), 0.81);
  EXPECT_DOUBLE_EQ(H(4, 5), 0.08);
  EXPECT_DOUBLE_EQ(H(5, 4), 0.08);
  EXPECT_TRUE(H.isApprox(H.transpose()));
  // The whole point of the example: the raw estimate is indefinite.
  Eigen::SelfAdjointEigenSolver<Matrix> es(H);
  EXPECT_LT(es.eigenvalues().minCoeff(), 0.0);
}

TEST(CorrRead, RejectsMalformedInput) {
  {
    std::istringstream in("0\n");
    EXPECT_THROW(read_corr_matrix(in), std::runtime_error);
  }
  {
    std::istringstream in("2\n1 0.5 0.5\n");
    EXPECT_THROW(read_corr_matrix(in), std::runtime_error);
  }
  {
    std::istringstream in("2\n1 0.5 0.5 1 7\n");
    EXPECT_THROW(read_corr_matrix(in), std::runtime_error);
  }
  {
    std::istringstream in("2\n1 0.5 0.4 1\n");
    EXPECT_THROW(read_corr_matrix(in), std::runtime_error);
  }
  {
    std::istringstream in("# only a comment\n");
    EXPECT_THROW(read_corr_matrix(in), std::runtime_error);
  }
}

TEST(CorrDefine, ValidatesArguments) {
  Matrix H = Matrix::Identity(3, 3);
  EXPECT_THROW(corr_define(H, 1.0), std::invalid_argument);
  EXPECT_THROW(corr_define(H, 0.5), std::invalid_argument);
  EXPECT_THROW(corr_define(Matrix::Ones(2, 3), 10.0), std::invalid_argument);
  Matrix asym = H;
  asym(0, 1) = 0.3;
  EXPECT_THROW(corr_define(asym, 10.0), std::invalid_argument);

  const Problem p = corr_define(H, 10.0);
  EXPECT_TRUE(validate(p).empty());
  EXPECT_EQ(p.n_x(), 1);
  EXPECT_TRUE(p.x_is_strict(0));
  EXPECT_EQ(p.n_eq(), 3);
  EXPECT_EQ(p.n_ineq(), 0);
  EXPECT_EQ(p.packed_dim(), 1 + 6);
  ASSERT_EQ(p.matrix_vars().size(), 1u);
  EXPECT_EQ(p.matrix_vars()[0].dim, 3);
  EXPECT_FALSE(p.matrix_vars()[0].strict);
  EXPECT_DOUBLE_EQ(*p.matrix_vars()[0].lambda_lo, 1.0);
  EXPECT_DOUBLE_EQ(*p.matrix_vars()[0].lambda_hi, 10.0);
}

// Packed-variable objective/constraint values for finite differencing.
struct PackedEval {
  const Problem& p;
  UserData ud;

  double obj(const Vector& s) {
    EvalPoint pt = unpack_variables(s, p);
    return p.callbacks().obj_val(pt, ud);
  }
  double eq(const Vector& s, int i) {
    EvalPoint pt = unpack_variables(s, p);
    return p.callbacks().eq_val(pt, i, ud);
  }
};

Vector random_corr_point(std::mt19937& g, const Problem& p, int n) {
  const Vector x = Vector::Constant(1, 0.2 + test::urand(g, 0.0, 1.0));
  const Matrix Yt =
      test::random_symmetric(g, n) + 3.0 * Matrix::Identity(n, n);
  const std::vector<SymMatrix> Y = {SymMatrix::from_dense(Yt)};
  return pack_variables(x, Y, p);
}

TEST(CorrDefine, ObjectiveDerivativesMatchFiniteDifferences) {
  auto g = test::make_rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 4;
    const Matrix H = test::random_symmetric(g, n);
    const Problem p = corr_define(H, 5.0 + trial);
    PackedEval pe{p, {}};
    const Vector s = random_corr_point(g, p, n);
    const EvalPoint pt = unpack_variables(s, p);

    const Vector grad = p.callbacks().obj_grad(pt, pe.ud);
    const Vector fd_g =
        fd_gradient_vec([&](const Vector& q) { return pe.obj(q); }, s);
    EXPECT_LT(rel_deviation(grad, fd_g), 1e-6);

    const Matrix hess = p.callbacks().obj_hess(pt, pe.ud);
    const Matrix fd_h =
        fd_hessian_vec([&](const Vector& q) { return pe.obj(q); }, s);
    EXPECT_LT(rel_deviation(hess, fd_h), 1e-4);
  }
}

TEST(CorrDefine, EqualityDerivativesMatchFiniteDifferences) {
  auto g = test::make_rng(62);
  const int n = 4;
  const Matrix H = test::random_symmetric(g, n);
  const Problem p = corr_define(H, 8.0);
  PackedEval pe{p, {}};
  const Vector s = random_corr_point(g, p, n);
  const EvalPoint pt = unpack_variables(s, p);

  for (int i = 0; i < n; ++i) {
    const Vector grad = p.callbacks().eq_grad(pt, i, pe.ud);
    const Vector fd_g =
        fd_gradient_vec([&](const Vector& q) { return pe.eq(q, i); }, s);
    EXPECT_LT(rel_deviation(grad, fd_g), 1e-6);

    const Matrix hess = p.callbacks().eq_hess(pt, i, pe.ud);
    const Matrix fd_h =
        fd_hessian_vec([&](const Vector& q) { return pe.eq(q, i); }, s);
    EXPECT_LT(rel_deviation(hess, fd_h), 1e-4);
  }
}

TEST(CorrRecover, InvertsSubstitution) {
  EvalPoint pt;
  pt.x = Vector::Constant(1, 0.25);
  pt.Y.push_back(4.0 * Matrix::Identity(2, 2));
  const CorrSolution sol = corr_recover(pt);
  EXPECT_DOUBLE_EQ(sol.zeta, 4.0);
  EXPECT_TRUE(sol.X.isApprox(Matrix::Identity(2, 2)));
}

// The 6x6 data set with condition bound 10. Reference values for the
// optimal point were frozen from a converged high-accuracy run.
TEST(CorrSolve, ReproducesConditionBoundedSolution) {
  const Matrix H = load_corr6();
  const Problem p = corr_define(H, 10.0);

  OuterOptions opts;
  opts.epsilon = 1e-7;
  const SolveResult res = solve(p, opts);
  ASSERT_EQ(res.report.status, SolveStatus::kConverged)
      << res.report.message;

  const CorrSolution sol = corr_recover(res.point);
  EXPECT_NEAR(sol.zeta, 3.4886, 5e-3);
  EXPECT_NEAR(res.point.x[0], 0.28665, 5e-4);
  EXPECT_NEAR(res.report.objective, 0.309499, 1e-4);

  // Diagonal of X must be (numerically) one.
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(sol.X(i, i), 1.0, 1e-6);

  Eigen::SelfAdjointEigenSolver<Matrix> es(sol.X);
  const Vector ev = es.eigenvalues();
  const double expected[6] = {0.2866, 0.2866, 0.2867, 0.6717, 1.6019, 2.8664};
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(ev[i], expected[i], 1e-2);
  EXPECT_NEAR(ev[5] / ev[0], 10.0, 1e-2);
}

}  // namespace
}  // namespace nlsdp
