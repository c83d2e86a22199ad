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

#include "nlsdp/matcalc.hpp"

#include <gtest/gtest.h>

#include "support.hpp"

namespace nlsdp {
namespace {

struct KindCase {
  MatFunSpec spec;
  int rows;
  int cols;
  const char* name;
};

std::vector<KindCase> all_kinds(std::mt19937& g) {
  std::vector<KindCase> cases;
  cases.push_back({{MatFun::kIdentity, {}, 0}, 3, 2, "identity"});
  cases.push_back({{MatFun::kTranspose, {}, 0}, 3, 2, "transpose"});
  cases.push_back({{MatFun::kLeftMul, test::random_matrix(g, 4, 3), 0}, 3, 2,
                   "leftmul"});
  cases.push_back({{MatFun::kRightMul, test::random_matrix(g, 2, 4), 0}, 3, 2,
                   "rightmul"});
  cases.push_back({{MatFun::kSquare, {}, 0}, 3, 3, "square"});
  cases.push_back({{MatFun::kGramT, {}, 0}, 3, 2, "gram_t"});
  cases.push_back({{MatFun::kGram, {}, 0}, 3, 2, "gram"});
  cases.push_back({{MatFun::kPower, {}, 4}, 3, 3, "power4"});
  cases.push_back({{MatFun::kPower, {}, 1}, 2, 2, "power1"});
  cases.push_back({{MatFun::kInverse, {}, 0}, 3, 3, "inverse"});
  return cases;
}

Matrix well_conditioned_point(std::mt19937& g, const KindCase& kc) {
  Matrix X = test::random_matrix(g, kc.rows, kc.cols);
  if (kc.spec.kind == MatFun::kInverse)
    X += 3.0 * Matrix::Identity(kc.rows, kc.cols);
  return X;
}

TEST(MatFun, FirstPartialsMatchFiniteDifferences) {
  auto g = test::make_rng(10);
  for (const auto& kc : all_kinds(g)) {
    for (int trial = 0; trial < 5; ++trial) {
      const Matrix X = well_conditioned_point(g, kc);
      const MatrixFn f = [&](const Matrix& Xt) {
        return matfun_value(kc.spec, Xt);
      };
      const MatTable fd = fd_gradient(f, X);
      for (int i = 0; i < kc.rows; ++i) {
        for (int j = 0; j < kc.cols; ++j) {
          const Matrix an = matfun_partial(kc.spec, X, i, j);
          EXPECT_LT(rel_deviation(an, fd[i][j]), 1e-6)
              << kc.name << " at (" << i << "," << j << ")";
        }
      }
    }
  }
}

TEST(MatFun, SecondPartialsMatchFiniteDifferences) {
  auto g = test::make_rng(11);
  for (const auto& kc : all_kinds(g)) {
    const Matrix X = well_conditioned_point(g, kc);
    const MatrixFn f = [&](const Matrix& Xt) {
      return matfun_value(kc.spec, Xt);
    };
    const MatTable2 fd = fd_hessian(f, X);
    for (int i = 0; i < kc.rows; ++i)
      for (int j = 0; j < kc.cols; ++j)
        for (int k = 0; k < kc.rows; ++k)
          for (int l = 0; l < kc.cols; ++l) {
            const Matrix an = matfun_second_partial(kc.spec, X, i, j, k, l);
            EXPECT_LT(rel_deviation(an, fd[i][j][k][l]), 1e-4)
                << kc.name << " at (" << i << "," << j << "),(" << k << ","
                << l << ")";
          }
  }
}

TEST(MatFun, SquarePartialWorkedExample) {
  // F(X) = X^2, unknown entry (0, 1): E_01 X + X E_01 has first row equal to
  // the second row of X and second column equal to the first column of X.
  Matrix X(2, 2);
  X << 1.0, 2.0,
       3.0, 4.0;
  Matrix G = matfun_partial({MatFun::kSquare, {}, 0}, X, 0, 1);
  Matrix expected(2, 2);
  expected << X(1, 0), X(0, 0) + X(1, 1),
              0.0, X(1, 0);
  EXPECT_NEAR((G - expected).cwiseAbs().maxCoeff(), 0.0, 1e-15);
}

TEST(MatFun, PowerOneIsUnitMatrixAndFormulaCollapses) {
  Matrix X = Matrix::Random(3, 3);
  const Matrix G = matfun_partial({MatFun::kPower, {}, 1}, X, 2, 0);
  EXPECT_NEAR((G - unit_matrix(3, 2, 0)).cwiseAbs().maxCoeff(), 0.0, 1e-15);
  EXPECT_THROW(matfun_partial({MatFun::kPower, {}, 0}, X, 0, 0),
               std::invalid_argument);
}

TEST(MatFun, FrozenSecondPartials) {
  // d^2(X^2)/dx_00 dx_00 = 2 E_00 at any X.
  Matrix X = Matrix::Identity(2, 2);
  Matrix H = matfun_second_partial({MatFun::kSquare, {}, 0}, X, 0, 0, 0, 0);
  EXPECT_NEAR((H - 2.0 * unit_matrix(2, 0, 0)).cwiseAbs().maxCoeff(), 0.0,
              1e-15);

  // d(X^{-1})/dx_00 at X = diag(2, 4) is -diag(1/4, 0).
  Matrix D = Vector::LinSpaced(2, 2.0, 4.0).asDiagonal();
  Matrix G = matfun_partial({MatFun::kInverse, {}, 0}, D, 0, 0);
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = -0.25;
  EXPECT_NEAR((G - expected).cwiseAbs().maxCoeff(), 0.0, 1e-15);

  // Second partial of the inverse against the closed form at the identity:
  // E_ij E_kl + E_kl E_ij.
  Matrix I2 = Matrix::Identity(2, 2);
  Matrix H2 = matfun_second_partial({MatFun::kInverse, {}, 0}, I2, 0, 1, 1, 0);
  Matrix ref = unit_matrix(2, 0, 1) * unit_matrix(2, 1, 0) +
               unit_matrix(2, 1, 0) * unit_matrix(2, 0, 1);
  EXPECT_NEAR((H2 - ref).cwiseAbs().maxCoeff(), 0.0, 1e-15);
}

TEST(MatFun, DimensionChecks) {
  Matrix X = Matrix::Random(3, 2);
  EXPECT_THROW(matfun_value({MatFun::kSquare, {}, 0}, X),
               std::invalid_argument);
  EXPECT_THROW(matfun_value({MatFun::kLeftMul, Matrix::Random(4, 4), 0}, X),
               std::invalid_argument);
  EXPECT_THROW(matfun_value({MatFun::kRightMul, Matrix::Random(3, 3), 0}, X),
               std::invalid_argument);
}

TEST(SymmetrizeGradient, MatchesJointPerturbationForSquare) {
  auto g = test::make_rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix X = test::random_symmetric(g, 3, 1.0);
    const MatFunSpec spec{MatFun::kSquare, {}, 0};
    MatTable indep(3, std::vector<Matrix>(3));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) indep[i][j] = matfun_partial(spec, X, i, j);
    const MatTable sym = symmetrize_gradient(indep);
    const MatrixFn f = [&](const Matrix& Xt) { return Xt * Xt; };
    const MatTable fd = fd_gradient(f, X, /*symmetric=*/true);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        EXPECT_LT(rel_deviation(sym[i][j], fd[i][j]), 1e-7);
  }
}

TEST(SymmetrizeGradient, WorkedSymmetricExample) {
  // For symmetric 2x2 X the joint derivative of X^2 w.r.t. the off-diagonal
  // unknown is [[2 x_10, x_00 + x_11], [x_00 + x_11, 2 x_10]].
  Matrix X(2, 2);
  X << 1.0, 2.0,
       2.0, 4.0;
  const MatFunSpec spec{MatFun::kSquare, {}, 0};
  MatTable indep(2, std::vector<Matrix>(2));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) indep[i][j] = matfun_partial(spec, X, i, j);
  const MatTable sym = symmetrize_gradient(indep);
  Matrix expected(2, 2);
  expected << 2.0 * X(1, 0), X(0, 0) + X(1, 1),
              X(0, 0) + X(1, 1), 2.0 * X(1, 0);
  EXPECT_NEAR((sym[0][1] - expected).cwiseAbs().maxCoeff(), 0.0, 1e-14);
  // Diagonal tables pass through unchanged.
  EXPECT_NEAR((sym[0][0] - indep[0][0]).cwiseAbs().maxCoeff(), 0.0, 0.0);
}

TEST(SymmetrizeGradient, NaiveSubstitutionIsWrong) {
  // Evaluating the independent-entries formula at a symmetric point does not
  // produce the symmetric-unknown derivative; the mirrored table must be
  // added. This distinguishes the two conventions on a concrete matrix.
  Matrix X(2, 2);
  X << 1.0, 2.0,
       2.0, 4.0;
  const MatrixFn f = [&](const Matrix& Xt) { return Xt * Xt; };
  const MatTable fd_joint = fd_gradient(f, X, /*symmetric=*/true);
  const Matrix indep01 = matfun_partial({MatFun::kSquare, {}, 0}, X, 0, 1);
  EXPECT_GT((indep01 - fd_joint[0][1]).cwiseAbs().maxCoeff(), 0.5);
  const Matrix fixed01 = indep01 + matfun_partial({MatFun::kSquare, {}, 0},
                                                  X, 1, 0);
  EXPECT_LT(rel_deviation(fixed01, fd_joint[0][1]), 1e-7);
}

TEST(SymmetrizeSecondPartial, MatchesJointPerturbation) {
  auto g = test::make_rng(13);
  for (const MatFun kind : {MatFun::kSquare, MatFun::kInverse}) {
    const MatFunSpec spec{kind, {}, 0};
    Matrix X = test::random_symmetric(g, 3, 0.4);
    X += 2.0 * Matrix::Identity(3, 3);  // keep the inverse well conditioned
    MatTable2 indep(3, std::vector<MatTable>(3, MatTable(3, std::vector<Matrix>(3))));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l)
            indep[i][j][k][l] = matfun_second_partial(spec, X, i, j, k, l);
    const MatrixFn f = [&](const Matrix& Xt) {
      return matfun_value(spec, Xt);
    };
    const MatTable2 fd = fd_hessian(f, X, /*symmetric=*/true);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l) {
            const Matrix an = symmetrize_second_partial(indep, i, j, k, l);
            EXPECT_LT(rel_deviation(an, fd[i][j][k][l]), 1e-4)
                << "(" << i << j << k << l << ")";
          }
  }
}

TEST(ScalarPartials, ClosedForms) {
  auto g = test::make_rng(14);
  const Matrix X = test::random_matrix(g, 3, 3);
  const Matrix A = test::random_matrix(g, 3, 3);
  const Vector a = test::random_vector(g, 3);

  // tr X.
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      EXPECT_DOUBLE_EQ(scalar_partial_trace(i, j), i == j ? 1.0 : 0.0);

  // tr A X' -> a_ij; a' X a -> a_i a_j; tr X^2 -> 2 x_ji.
  EXPECT_DOUBLE_EQ(scalar_partial_inner(A, 1, 2), A(1, 2));
  EXPECT_DOUBLE_EQ(scalar_partial_quad(a, 0, 2), a[0] * a[2]);
  Matrix X5 = X;
  X5(1, 0) = 5.0;
  EXPECT_DOUBLE_EQ(scalar_partial_trace_square(X5, 0, 1), 10.0);

  // Finite-difference cross-checks of every row.
  auto scalar_fd = [&](const std::function<double(const Matrix&)>& f, int i,
                       int j) {
    const double h = 1e-6;
    Matrix Xp = X, Xm = X;
    Xp(i, j) += h;
    Xm(i, j) -= h;
    return (f(Xp) - f(Xm)) / (2.0 * h);
  };
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      EXPECT_NEAR(scalar_partial_trace(i, j),
                  scalar_fd([](const Matrix& M) { return M.trace(); }, i, j),
                  1e-8);
      EXPECT_NEAR(scalar_partial_inner(A, i, j),
                  scalar_fd(
                      [&](const Matrix& M) {
                        return (A * M.transpose()).trace();
                      },
                      i, j),
                  1e-8);
      EXPECT_NEAR(scalar_partial_quad(a, i, j),
                  scalar_fd([&](const Matrix& M) { return a.dot(M * a); }, i,
                            j),
                  1e-8);
      EXPECT_NEAR(scalar_partial_trace_square(X, i, j),
                  scalar_fd([](const Matrix& M) { return (M * M).trace(); },
                            i, j),
                  1e-6);
    }
  }
}

TEST(ScalarPartials, CompositeRulesOverInnerFunction) {
  // Phi(X) = X^2 and Psi(X) = X^{-1} exercise the chain rules for
  // tr Phi, <A, Phi>, a' Phi a, tr Phi^2 and tr(Phi Psi).
  auto g = test::make_rng(15);
  Matrix X = test::random_matrix(g, 3, 3) + 3.0 * Matrix::Identity(3, 3);
  const Matrix A = test::random_matrix(g, 3, 3);
  const Vector a = test::random_vector(g, 3);
  const MatFunSpec sq{MatFun::kSquare, {}, 0};
  const MatFunSpec inv{MatFun::kInverse, {}, 0};

  const Matrix Phi = matfun_value(sq, X);
  const Matrix Psi = matfun_value(inv, X);
  auto scalar_fd = [&](const std::function<double(const Matrix&)>& f, int i,
                       int j) {
    const double h = 1e-6;
    Matrix Xp = X, Xm = X;
    Xp(i, j) += h;
    Xm(i, j) -= h;
    return (f(Xp) - f(Xm)) / (2.0 * h);
  };

  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Matrix dPhi = matfun_partial(sq, X, i, j);
      const Matrix dPsi = matfun_partial(inv, X, i, j);
      EXPECT_NEAR(scalar_partial_trace_of(dPhi),
                  scalar_fd([&](const Matrix& M) { return (M * M).trace(); },
                            i, j),
                  1e-5);
      EXPECT_NEAR(
          scalar_partial_inner_of(A, dPhi),
          scalar_fd(
              [&](const Matrix& M) { return (A.array() * (M * M).array()).sum(); },
              i, j),
          1e-5);
      EXPECT_NEAR(scalar_partial_quad_of(a, dPhi),
                  scalar_fd([&](const Matrix& M) { return a.dot(M * M * a); },
                            i, j),
                  1e-5);
      EXPECT_NEAR(scalar_partial_trace_square_of(Phi, dPhi),
                  scalar_fd(
                      [&](const Matrix& M) {
                        return (M * M * M * M).trace();
                      },
                      i, j),
                  2e-4);
      EXPECT_NEAR(scalar_partial_trace_product_of(Phi, dPhi, Psi, dPsi),
                  scalar_fd(
                      [&](const Matrix& M) {
                        return (M * M * M.inverse()).trace();
                      },
                      i, j),
                  1e-5);
    }
  }
}

TEST(FdOracle, ExactOnAffineAndQuadraticFunctions) {
  auto g = test::make_rng(16);
  const Matrix C = test::random_matrix(g, 2, 3);
  const Matrix X = test::random_matrix(g, 2, 3);
  // Affine: F(X) = X + C. Gradient is E_ij exactly.
  const MatTable t1 = fd_gradient(
      [&](const Matrix& M) { return Matrix(M + C); }, X);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) {
      Matrix E = Matrix::Zero(2, 3);
      E(i, j) = 1.0;
      EXPECT_LT(rel_deviation(t1[i][j], E), 1e-9);
    }
  // Quadratic scalar in vector form.
  const Matrix Q = test::random_spd(g, 4);
  const Vector s0 = test::random_vector(g, 4);
  auto fq = [&](const Vector& s) { return 0.5 * s.dot(Q * s); };
  EXPECT_LT(rel_deviation(fd_gradient_vec(fq, s0), Vector(Q * s0)), 1e-8);
  EXPECT_LT(rel_deviation(fd_hessian_vec(fq, s0), Q), 1e-6);
}

}  // namespace
}  // namespace nlsdp
