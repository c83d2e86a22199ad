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

#include "nlsdp/auglag.hpp"

#include <gtest/gtest.h>

#include "nlsdp/matcalc.hpp"
#include "support.hpp"

namespace nlsdp {
namespace {

double dense_trace_inner(const Matrix& T, const Matrix& U, const SymMatrix& Ak,
                         const SymMatrix& Al) {
  const Matrix M = T * Ak.dense() * U;
  return (M.array() * Al.dense().array()).sum();
}

TEST(TraceKernel, FrozenTwoByTwoExample) {
  Matrix T(2, 2);
  T << 2.0, 1.0,
       1.0, 2.0;
  Matrix U = Vector::LinSpaced(2, 1.0, 3.0).asDiagonal();
  std::vector<SymMatrix> A{SymMatrix::from_triplets(2, {{1, 0, 1.0}})};
  const auto z = trace_kernel(T, U, A, 0);
  ASSERT_EQ(z.size(), 1u);
  // T A U = [[1, 6], [2, 3]]; elementwise product with A sums to 8.
  EXPECT_DOUBLE_EQ(z[0], 8.0);
}

TEST(TraceKernel, MatchesDenseOracleOnRandomOperands) {
  auto g = test::make_rng(20);
  for (int trial = 0; trial < 60; ++trial) {
    const int dim = test::irand(g, 1, 12);
    const int count = test::irand(g, 1, 8);
    std::vector<SymMatrix> A;
    for (int i = 0; i < count; ++i) {
      if (test::urand(g, 0, 1) < 0.3)
        A.push_back(SymMatrix::from_dense(test::random_symmetric(g, dim)));
      else
        A.push_back(test::random_sparse_sym(g, dim, test::urand(g, 0.1, 0.9)));
    }
    const Matrix T = test::random_matrix(g, dim, dim);
    const Matrix U = test::random_matrix(g, dim, dim);
    const size_t k = static_cast<size_t>(test::irand(g, 0, count - 1));
    const auto z = trace_kernel(T, U, A, k);
    ASSERT_EQ(z.size(), A.size() - k);
    for (size_t l = k; l < A.size(); ++l) {
      const double ref = dense_trace_inner(T, U, A[k], A[l]);
      EXPECT_NEAR(z[l - k], ref, 1e-13 * (1.0 + std::abs(ref)))
          << "dim=" << dim << " k=" << k << " l=" << l;
    }
  }
}

TEST(TraceKernel, EmptyOperandGivesZeros) {
  std::vector<SymMatrix> A{SymMatrix::zero(3),
                           SymMatrix::from_triplets(3, {{2, 0, 1.0}})};
  const Matrix T = Matrix::Identity(3, 3);
  const auto z = trace_kernel(T, T, A, 0);
  EXPECT_DOUBLE_EQ(z[0], 0.0);
  EXPECT_DOUBLE_EQ(z[1], 0.0);
}

TEST(TraceKernel, LastIndexAndValidation) {
  std::vector<SymMatrix> A{SymMatrix::identity(2), SymMatrix::identity(2)};
  const Matrix T = Matrix::Identity(2, 2);
  const auto z = trace_kernel(T, T, A, 1);
  ASSERT_EQ(z.size(), 1u);
  EXPECT_DOUBLE_EQ(z[0], 2.0);
  EXPECT_THROW(trace_kernel(T, T, A, 2), std::invalid_argument);
  std::vector<SymMatrix> bad{SymMatrix::identity(3)};
  EXPECT_THROW(trace_kernel(T, T, bad, 0), std::invalid_argument);
}

TEST(TraceKernel, OperandOrderInsideTheTraceIsIrrelevant) {
  // tr(Xi Z A Z B Z) = tr(Xi Z B Z A Z) for symmetric operands; the Hessian
  // assembly relies on this to fold the two congruence terms into a factor 2.
  auto g = test::make_rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = test::irand(g, 1, 6);
    const Matrix Xi = test::random_spd(g, n);
    const Matrix Z = test::random_spd(g, n);
    const Matrix A = test::random_symmetric(g, n);
    const Matrix B = test::random_symmetric(g, n);
    const double t1 = (Xi * Z * A * Z * B * Z).trace();
    const double t2 = (Xi * Z * B * Z * A * Z).trace();
    EXPECT_NEAR(t1, t2, 1e-12 * (1.0 + std::abs(t1)));
  }
}

// A small but fully featured fixture: two scalar variables (the first
// strict), one matrix variable with two-sided penalty bounds, one strict
// matrix variable with a lower bound, one nonlinear matrix constraint, one
// scalar inequality and one equality.
class MixedProblem {
 public:
  MixedProblem() {
    Q1_ << 0.6, 0.2, -0.1,
           0.2, -0.4, 0.3,
           -0.1, 0.3, 0.1;
    Q2_ << -0.2, 0.5, 0.0,
           0.5, 0.3, -0.3,
           0.0, -0.3, 0.2;
    Q3_ << 0.1, -0.2, 0.4,
           -0.2, 0.0, 0.1,
           0.4, 0.1, -0.5;
    C_ << 0.3, -0.2,
          -0.2, 0.5;

    MatrixVarSpec y;
    y.dim = 2;
    y.pattern = full_pattern(2);
    y.lambda_lo = -2.0;
    y.lambda_hi = 3.0;

    MatrixVarSpec w;
    w.dim = 2;
    w.pattern = full_pattern(2);
    w.lambda_lo = 0.5;
    w.strict = true;

    CallbackSet cb;
    cb.obj_val = [this](const EvalPoint& pt, UserData&) {
      return pt.x[0] * pt.x[0] * pt.x[1] +
             (C_.array() * pt.Y[0].array()).sum();
    };
    cb.obj_grad = [this](const EvalPoint& pt, UserData&) {
      Vector g = Vector::Zero(8);
      g[0] = 2.0 * pt.x[0] * pt.x[1];
      g[1] = pt.x[0] * pt.x[0];
      g[2] = C_(0, 0);        // y00
      g[3] = 2.0 * C_(1, 0);  // y10 appears twice in <C, Y>
      g[4] = C_(1, 1);        // y11
      return g;
    };
    cb.obj_hess = [](const EvalPoint& pt, UserData&) {
      Matrix H = Matrix::Zero(8, 8);
      H(0, 0) = 2.0 * pt.x[1];
      H(0, 1) = H(1, 0) = 2.0 * pt.x[0];
      return H;
    };
    cb.ineq_val = [](const EvalPoint& pt, int, UserData&) {
      return pt.x[0] * pt.x[0] + pt.x[1] - 1.0;
    };
    cb.ineq_grad = [](const EvalPoint& pt, int, UserData&) {
      Vector g = Vector::Zero(8);
      g[0] = 2.0 * pt.x[0];
      g[1] = 1.0;
      return g;
    };
    cb.ineq_hess = [](const EvalPoint&, int, UserData&) {
      Matrix H = Matrix::Zero(8, 8);
      H(0, 0) = 2.0;
      return H;
    };
    cb.eq_val = [](const EvalPoint& pt, int, UserData&) {
      return pt.x[0] + pt.Y[0](1, 1) - 0.7;
    };
    cb.eq_grad = [](const EvalPoint&, int, UserData&) {
      Vector g = Vector::Zero(8);
      g[0] = 1.0;
      g[4] = 1.0;
      return g;
    };
    cb.eq_hess = [](const EvalPoint&, int, UserData&) {
      return Matrix::Zero(8, 8);
    };
    // A(s) = x0 Q1 + x0 x1 Q2 + y00 Q3.
    cb.mcon_val = [this](const EvalPoint& pt, int, UserData&) {
      Matrix A = pt.x[0] * Q1_ + pt.x[0] * pt.x[1] * Q2_ + pt.Y[0](0, 0) * Q3_;
      return SymMatrix::from_dense(A);
    };
    cb.mcon_grad = [this](const EvalPoint& pt, int, int t, UserData&) {
      switch (t) {
        case 0:
          return SymMatrix::from_dense(Matrix(Q1_ + pt.x[1] * Q2_));
        case 1:
          return SymMatrix::from_dense(Matrix(pt.x[0] * Q2_));
        case 2:
          return SymMatrix::from_dense(Q3_);
        default:
          return SymMatrix();
      }
    };
    cb.mcon_hess = [this](const EvalPoint&, int, int t, int u, UserData&) {
      if (t == 0 && u == 1) return SymMatrix::from_dense(Q2_);
      return SymMatrix();
    };

    prob_ = Problem(2, {y, w}, 1, 1, {MatrixConSpec{3, false}}, cb,
                    {true, false});
  }

  const Problem& problem() const { return prob_; }

  Vector interior_point() const {
    Vector x(2);
    x << 0.8, -0.6;
    Matrix Y(2, 2);
    Y << 1.0, 0.3,
         0.3, 1.5;
    Matrix W(2, 2);
    W << 1.2, 0.1,
         0.1, 1.0;
    return pack_variables(
        x,
        std::vector<SymMatrix>{SymMatrix::from_dense(Y),
                               SymMatrix::from_dense(W)},
        prob_);
  }

  Multipliers multipliers() const {
    auto g = test::make_rng(22);
    Multipliers m = make_default_multipliers(prob_);
    m.u[0] = 1.3;
    m.Xi[0] = test::random_spd(g, 3, 0.3);
    m.U_lo[0] = test::random_spd(g, 2, 0.3);
    m.U_hi[0] = test::random_spd(g, 2, 0.3);
    m.v[0] = 0.4;
    return m;
  }

 private:
  Problem prob_;
  Matrix Q1_{3, 3}, Q2_{3, 3}, Q3_{3, 3}, C_{2, 2};
};

TEST(Auglag, ValueAssemblyFrozenMicroExample) {
  // One scalar variable, f = x^2, one inequality g = x - 1, no matrix parts:
  // F = x^2 + u * pi * phi((x - 1)/pi).
  CallbackSet cb;
  cb.obj_val = [](const EvalPoint& pt, UserData&) {
    return pt.x[0] * pt.x[0];
  };
  cb.obj_grad = [](const EvalPoint& pt, UserData&) {
    Vector g(1);
    g << 2.0 * pt.x[0];
    return g;
  };
  cb.obj_hess = [](const EvalPoint&, UserData&) {
    Matrix H(1, 1);
    H << 2.0;
    return H;
  };
  cb.ineq_val = [](const EvalPoint& pt, int, UserData&) {
    return pt.x[0] - 1.0;
  };
  cb.ineq_grad = [](const EvalPoint&, int, UserData&) {
    Vector g(1);
    g << 1.0;
    return g;
  };
  cb.ineq_hess = [](const EvalPoint&, int, UserData&) {
    return Matrix::Zero(1, 1);
  };
  Problem prob(1, {}, 1, 0, {}, cb);

  Multipliers mult = make_default_multipliers(prob);
  mult.u[0] = 2.0;
  PenaltyState pen;
  pen.pi = 0.8;

  Vector s(1);
  s << 0.5;
  // tau = -0.625 is on the log branch: phi = -0.25 ln(1.25) - 0.375.
  const double phi = -0.25 * std::log(1.25) - 0.375;
  const double expected = 0.25 + 2.0 * 0.8 * phi;
  EXPECT_NEAR(auglag_value(s, mult, pen, prob), expected, 1e-14);
}

TEST(Auglag, GradientMatchesPackedFiniteDifferences) {
  MixedProblem fixture;
  const Problem& prob = fixture.problem();
  ASSERT_TRUE(validate(prob).empty());
  const Multipliers mult = fixture.multipliers();
  PenaltyState pen;
  pen.pi = 0.9;
  pen.Pi = 10.0;
  pen.kappa = 0.05;
  const Vector s0 = fixture.interior_point();

  auto F = [&](const Vector& s) { return auglag_value(s, mult, pen, prob); };
  const Vector fd = fd_gradient_vec(F, s0);
  const Vector an = auglag_gradient(s0, mult, pen, prob);
  EXPECT_LT(rel_deviation(an, fd), 1e-6);
}

TEST(Auglag, HessianMatchesPackedFiniteDifferences) {
  MixedProblem fixture;
  const Problem& prob = fixture.problem();
  const Multipliers mult = fixture.multipliers();
  PenaltyState pen;
  pen.pi = 0.9;
  pen.Pi = 10.0;
  pen.kappa = 0.05;
  const Vector s0 = fixture.interior_point();

  auto F = [&](const Vector& s) { return auglag_value(s, mult, pen, prob); };
  const Matrix fd = fd_hessian_vec(F, s0);
  const Matrix an = auglag_hessian(s0, mult, pen, prob);
  EXPECT_LT(rel_deviation(an, fd), 1e-4);
  EXPECT_NEAR((an - an.transpose()).cwiseAbs().maxCoeff(), 0.0, 0.0);
}

TEST(Auglag, EqualityTermIsLinearInV) {
  MixedProblem fixture;
  const Problem& prob = fixture.problem();
  Multipliers mult = fixture.multipliers();
  PenaltyState pen;
  pen.pi = 0.9;
  pen.Pi = 10.0;
  pen.kappa = 0.05;
  const Vector s0 = fixture.interior_point();

  UserData ud = prob.callbacks().user_data;
  AuglagContext ctx(s0, mult, pen, prob, ud);
  Vector v1(1), v2(1);
  v1 << 0.0;
  v2 << 2.5;
  EXPECT_NEAR(ctx.value(v2) - ctx.value(v1), 2.5 * ctx.h_vals()[0], 1e-12);
  // Gradient difference is J' (v2 - v1).
  const Vector dg = ctx.gradient(v2) - ctx.gradient(v1);
  const Vector ref = ctx.eq_jacobian().transpose() * (v2 - v1);
  EXPECT_NEAR((dg - ref).cwiseAbs().maxCoeff(), 0.0, 1e-12);
}

TEST(Auglag, DomainViolationsRaiseTaggedErrors) {
  MixedProblem fixture;
  const Problem& prob = fixture.problem();
  const Multipliers mult = fixture.multipliers();
  PenaltyState pen;
  pen.pi = 0.9;
  pen.Pi = 10.0;
  pen.kappa = 0.05;

  // Drive the strict scalar variable negative: barrier violation.
  Vector s_bad_x = fixture.interior_point();
  s_bad_x[0] = -0.1;
  try {
    auglag_value(s_bad_x, mult, pen, prob);
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_EQ(e.term(), "barrier");
  }

  // Push the bounded matrix variable above its upper bound region so the
  // bound-term penalty leaves its domain (needs lambda_max >= Pi; widen by
  // shrinking Pi).
  PenaltyState tight = pen;
  tight.Pi = 0.5;
  Vector s_bad_y = fixture.interior_point();
  s_bad_y[4] = 4.2;  // y11 makes Y - 3I have lambda_max > 0.5
  EXPECT_THROW(auglag_value(s_bad_y, mult, tight, prob), DomainError);
}

TEST(Auglag, LinearConstraintNeverCallsElementHessian) {
  // A(x) = diag(x0 - 1, -x0): affine, so the element-Hessian callback must
  // not be invoked by the Hessian assembly.
  bool hess_called = false;
  CallbackSet cb;
  cb.obj_val = [](const EvalPoint& pt, UserData&) { return pt.x[0]; };
  cb.obj_grad = [](const EvalPoint&, UserData&) {
    Vector g(1);
    g << 1.0;
    return g;
  };
  cb.obj_hess = [](const EvalPoint&, UserData&) {
    return Matrix::Zero(1, 1);
  };
  cb.mcon_val = [](const EvalPoint& pt, int, UserData&) {
    return SymMatrix::from_triplets(
        2, {{0, 0, pt.x[0] - 1.0}, {1, 1, -pt.x[0]}});
  };
  cb.mcon_grad = [](const EvalPoint&, int, int t, UserData&) {
    if (t == 0)
      return SymMatrix::from_triplets(2, {{0, 0, 1.0}, {1, 1, -1.0}});
    return SymMatrix();
  };
  cb.mcon_hess = [&hess_called](const EvalPoint&, int, int, int, UserData&) {
    hess_called = true;
    return SymMatrix();
  };
  Problem prob(1, {}, 0, 0, {MatrixConSpec{2, true}}, cb);

  Multipliers mult = make_default_multipliers(prob);
  PenaltyState pen;
  pen.Pi = 4.0;
  Vector s(1);
  s << 0.3;
  auglag_hessian(s, mult, pen, prob);
  EXPECT_FALSE(hess_called);
}

TEST(Auglag, CurvatureSurvivesVanishingFirstDerivatives) {
  // A(x) = x0 x1 Q at x = 0: both element gradients vanish but the cross
  // second derivative <W, Q> must still appear in the Hessian.
  Matrix Q(2, 2);
  Q << 0.5, -0.3,
       -0.3, 0.8;
  CallbackSet cb;
  cb.obj_val = [](const EvalPoint&, UserData&) { return 0.0; };
  cb.obj_grad = [](const EvalPoint&, UserData&) { return Vector::Zero(2); };
  cb.obj_hess = [](const EvalPoint&, UserData&) { return Matrix::Zero(2, 2); };
  cb.mcon_val = [&Q](const EvalPoint& pt, int, UserData&) {
    return SymMatrix::from_dense(Matrix(pt.x[0] * pt.x[1] * Q));
  };
  cb.mcon_grad = [&Q](const EvalPoint& pt, int, int t, UserData&) {
    const double coeff = t == 0 ? pt.x[1] : pt.x[0];
    if (coeff == 0.0) return SymMatrix();
    return SymMatrix::from_dense(Matrix(coeff * Q));
  };
  cb.mcon_hess = [&Q](const EvalPoint&, int, int t, int u, UserData&) {
    if (t == 0 && u == 1) return SymMatrix::from_dense(Q);
    return SymMatrix();
  };
  Problem prob(2, {}, 0, 0, {MatrixConSpec{2, false}}, cb);

  Multipliers mult = make_default_multipliers(prob);
  PenaltyState pen;
  pen.Pi = 2.0;
  const Vector s = Vector::Zero(2);
  const Matrix H = auglag_hessian(s, mult, pen, prob);
  // At A = 0, W = Pi^2 Z Xi Z = Xi = I, so H(0,1) = <I, Q> = tr Q.
  EXPECT_NEAR(H(0, 1), Q.trace(), 1e-12);
  EXPECT_NEAR(H(1, 0), Q.trace(), 1e-12);
  EXPECT_NEAR(H(0, 0), 0.0, 1e-12);
}

TEST(Auglag, DefaultMultipliersMatchProblemShape) {
  MixedProblem fixture;
  const Multipliers m = make_default_multipliers(fixture.problem());
  EXPECT_EQ(m.u.size(), 1);
  EXPECT_TRUE(m.u.isOnes());
  ASSERT_EQ(m.Xi.size(), 1u);
  EXPECT_TRUE(m.Xi[0].isIdentity());
  ASSERT_EQ(m.U_lo.size(), 2u);
  EXPECT_TRUE(m.U_lo[0].isIdentity());
  EXPECT_TRUE(m.U_hi[0].isIdentity());
  // The strict variable's bounds are barrier-handled: no multipliers.
  EXPECT_EQ(m.U_lo[1].size(), 0);
  EXPECT_EQ(m.U_hi[1].size(), 0);
  EXPECT_EQ(m.v.size(), 1);
  EXPECT_TRUE(m.v.isZero());
}

TEST(Auglag, RejectsMismatchedMultiplierShapes) {
  MixedProblem fixture;
  const Problem& prob = fixture.problem();
  PenaltyState pen;
  pen.Pi = 10.0;
  const Vector s0 = fixture.interior_point();

  Multipliers bad_u = fixture.multipliers();
  bad_u.u = Vector::Ones(3);
  EXPECT_THROW(auglag_value(s0, bad_u, pen, prob), std::invalid_argument);

  Multipliers bad_xi = fixture.multipliers();
  bad_xi.Xi[0] = Matrix::Identity(2, 2);
  EXPECT_THROW(auglag_value(s0, bad_xi, pen, prob), std::invalid_argument);
}

}  // namespace
}  // namespace nlsdp
