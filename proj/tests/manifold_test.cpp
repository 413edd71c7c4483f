/*
 * Copyright 2026 adasgd authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "adasgd/manifold.hpp"

#include <gtest/gtest.h>

#include "adasgd/diagnostics.hpp"
#include "oracles.hpp"

namespace adasgd {
namespace {

TEST(ProjectTangent, HandExample) {
  // X = e1 in R^{2x1}, xi = (3, 4)^T projects to (0, 4)^T.
  Eigen::MatrixXd xm(2, 1);
  xm << 1, 0;
  const StiefelPoint x(xm);
  Eigen::MatrixXd xi(2, 1);
  xi << 3, 4;
  const StiefelTangent z = project_tangent(x, xi);
  EXPECT_NEAR(z.m(0, 0), 0.0, 1e-14);
  EXPECT_NEAR(z.m(1, 0), 4.0, 1e-14);
}

TEST(ProjectTangent, PointProjectsToZero) {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const StiefelPoint x = random_stiefel(7, 3, rng);
    const StiefelTangent z = project_tangent(x, x.m);
    EXPECT_LT(z.m.cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ProjectTangent, IdempotentAndTangent) {
  Rng rng(2);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 50; ++trial) {
    const StiefelPoint x = random_stiefel(6, 2, rng);
    Eigen::MatrixXd xi(6, 2);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 2; ++j) xi(i, j) = gauss(rng);
    const StiefelTangent once = project_tangent(x, xi);
    const StiefelTangent twice = project_tangent(x, once.m);
    EXPECT_LT((twice.m - once.m).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE(tangency_defect(x, once), 1e-10);
  }
}

TEST(ProjectTangent, MatchesLiteralFormula) {
  Rng rng(3);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 20; ++trial) {
    const StiefelPoint x = random_stiefel(8, 3, rng);
    Eigen::MatrixXd xi(8, 3);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 3; ++j) xi(i, j) = gauss(rng);
    const Eigen::MatrixXd expect = testing::literal_projection(x.m, xi);
    EXPECT_LT((project_tangent(x, xi).m - expect).cwiseAbs().maxCoeff(),
              1e-12);
  }
}

TEST(ProjectTangent, RowFastPathMatchesDense) {
  Rng rng(4);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 30; ++trial) {
    const StiefelPoint x = random_stiefel(9, 3, rng);
    Eigen::VectorXd w(3);
    for (int l = 0; l < 3; ++l) w(l) = gauss(rng);
    const int row = trial % 9;
    Eigen::MatrixXd xi = Eigen::MatrixXd::Zero(9, 3);
    xi.row(row) = w.transpose();
    const StiefelTangent dense = project_tangent(x, xi);
    const StiefelTangent fast = project_tangent_row(x, row, w);
    EXPECT_LT((dense.m - fast.m).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(ProjectTangent, ShapeMismatchThrows) {
  Rng rng(5);
  const StiefelPoint x = random_stiefel(4, 2, rng);
  EXPECT_THROW(project_tangent(x, Eigen::MatrixXd::Zero(3, 2)),
               DimensionError);
  EXPECT_THROW(project_tangent_row(x, 4, Eigen::VectorXd::Zero(2)),
               DimensionError);
}

TEST(Qf, IdentityFixedPoint) {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(4, 4);
  EXPECT_LT((qf(id).m - id).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Qf, SingleColumnNormalization) {
  Eigen::MatrixXd c(2, 1);
  c << 3, 4;
  const StiefelPoint q = qf(c);
  EXPECT_NEAR(q.m(0, 0), 0.6, 1e-14);
  EXPECT_NEAR(q.m(1, 0), 0.8, 1e-14);
}

TEST(Qf, SignConventionForcesPositiveDiagonal) {
  Eigen::MatrixXd c(2, 1);
  c << -2, 0;
  const QrFactors f = qr_positive(c);
  EXPECT_NEAR(f.q(0, 0), -1.0, 1e-14);
  EXPECT_NEAR(f.q(1, 0), 0.0, 1e-14);
  EXPECT_NEAR(f.r(0, 0), 2.0, 1e-14);
}

TEST(Qf, ReconstructsInputAndHasPositiveDiagonal) {
  Rng rng(6);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 40; ++trial) {
    Eigen::MatrixXd c(7, 3);
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 3; ++j) c(i, j) = gauss(rng);
    const QrFactors f = qr_positive(c);
    EXPECT_LT((f.q * f.r - c).norm() / c.norm(), 1e-10);
    EXPECT_TRUE(is_orthonormal(f.q));
    for (int j = 0; j < 3; ++j) EXPECT_GT(f.r(j, j), 0.0);
  }
}

TEST(Qf, MatchesGramSchmidtOracle) {
  Rng rng(7);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 40; ++trial) {
    Eigen::MatrixXd c(6, 3);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 3; ++j) c(i, j) = gauss(rng);
    const testing::GramSchmidtResult gs = testing::gram_schmidt(c);
    EXPECT_LT((qf(c).m - gs.q).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Qf, RankDeficiencyThrows) {
  Eigen::MatrixXd c(4, 2);
  c << 1, 2, 1, 2, 1, 2, 1, 2;  // second column is a multiple of the first
  EXPECT_THROW(qf(c), RankDeficiencyError);
  EXPECT_THROW(qf(Eigen::MatrixXd::Zero(3, 1)), RankDeficiencyError);
}

TEST(StiefelPoint, ConstructorValidates) {
  Eigen::MatrixXd bad(3, 2);
  bad << 1, 1, 0, 1, 0, 0;
  EXPECT_THROW(StiefelPoint{bad}, ContractViolation);
  EXPECT_THROW(StiefelPoint{Eigen::MatrixXd::Identity(2, 3)}, DimensionError);
  EXPECT_NO_THROW(StiefelPoint{Eigen::MatrixXd::Identity(3, 2)});
}

ProductPoint random_product_point(int m, int n, int k, Rng& rng) {
  ProductPoint p;
  p.u = random_stiefel(m, k, rng);
  p.v = random_stiefel(n, k, rng);
  std::normal_distribution<double> gauss(0.0, 2.0);
  p.x = Eigen::VectorXd::NullaryExpr(k, [&](Eigen::Index) {
    return gauss(rng);
  });
  return p;
}

TEST(Retract, ZeroTangentIsIdentity) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const ProductPoint p = random_product_point(6, 5, 2, rng);
    const ProductPoint q = retract(p, ProductTangent::zero(p));
    EXPECT_LT((q.u.m - p.u.m).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((q.v.m - p.v.m).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((q.x - p.x).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Retract, ScalarExample) {
  ProductPoint p;
  p.u = StiefelPoint(Eigen::MatrixXd::Ones(1, 1));
  p.v = StiefelPoint(Eigen::MatrixXd::Ones(1, 1));
  p.x = Eigen::VectorXd::Constant(1, 2.0);
  ProductTangent v = ProductTangent::zero(p);
  v.xhat(0) = 0.5;
  const ProductPoint q = retract(p, v);
  EXPECT_DOUBLE_EQ(q.u.m(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(q.x(0), 2.5);
  EXPECT_DOUBLE_EQ(q.v.m(0, 0), 1.0);
}

TEST(Retract, PreservesOrthonormality) {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const ProductPoint p = random_product_point(8, 6, 3, rng);
    ProductTangent v = random_unit_tangent(p, rng);
    v.y.m *= 5.0;  // large steps still land on the manifold
    v.z.m *= 5.0;
    const ProductPoint q = retract(p, v);
    EXPECT_LE(orthonormality_defect(q.u.m), 1e-10);
    EXPECT_LE(orthonormality_defect(q.v.m), 1e-10);
  }
}

TEST(Retract, FirstOrderInTangent) {
  // ||(retract(p, h v) - p)/h - v|| should shrink linearly in h.
  Rng rng(10);
  const ProductPoint p = random_product_point(7, 5, 3, rng);
  const ProductTangent v = random_unit_tangent(p, rng);
  std::vector<double> errs;
  for (const double h : {1e-3, 1e-4, 1e-5}) {
    ProductTangent hv;
    hv.y.m = h * v.y.m;
    hv.xhat = h * v.xhat;
    hv.z.m = h * v.z.m;
    const ProductPoint q = retract(p, hv);
    const double err =
        std::sqrt(((q.u.m - p.u.m) / h - v.y.m).squaredNorm() +
                  ((q.x - p.x) / h - v.xhat).squaredNorm() +
                  ((q.v.m - p.v.m) / h - v.z.m).squaredNorm());
    EXPECT_LT(err, 10.0 * h);
    errs.push_back(err);
  }
  // log-log slope about 1: each decade of h buys about a decade of error.
  const double slope = std::log10(errs[0] / errs[2]) / 2.0;
  EXPECT_NEAR(slope, 1.0, 0.35);
  EXPECT_LT(errs[2], errs[1]);
  EXPECT_LT(errs[1], errs[0]);
}

TEST(Retract, PropagatesRankDeficiency) {
  ProductPoint p;
  p.u = StiefelPoint(Eigen::MatrixXd::Identity(3, 1));
  p.v = StiefelPoint(Eigen::MatrixXd::Identity(3, 1));
  p.x = Eigen::VectorXd::Zero(1);
  ProductTangent v = ProductTangent::zero(p);
  v.y.m = -p.u.m;  // U + Y = 0: no orthonormalization possible
  EXPECT_THROW(retract(p, v), RankDeficiencyError);
}

TEST(Inner, ZeroAndFactorStructure) {
  Rng rng(11);
  const ProductPoint p = random_product_point(6, 4, 2, rng);
  const ProductTangent v = random_unit_tangent(p, rng);
  EXPECT_DOUBLE_EQ(inner(p, v, ProductTangent::zero(p)), 0.0);

  ProductTangent a = ProductTangent::zero(p);
  ProductTangent b = ProductTangent::zero(p);
  a.xhat << 1.0, 2.0;
  b.xhat << -3.0, 0.5;
  EXPECT_DOUBLE_EQ(inner(p, a, b), a.xhat.dot(b.xhat));
}

TEST(Inner, NormDecomposesOverFactors) {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const ProductPoint p = random_product_point(7, 6, 3, rng);
    const ProductTangent v = random_unit_tangent(p, rng);
    const double expect = v.y.m.squaredNorm() + v.xhat.squaredNorm() +
                          v.z.m.squaredNorm();
    EXPECT_NEAR(norm_sq(p, v), expect, 1e-12 * std::max(1.0, expect));
    EXPECT_GE(norm_sq(p, v), 0.0);
  }
}

TEST(Inner, ShapeMismatchThrows) {
  Rng rng(13);
  const ProductPoint p = random_product_point(5, 4, 2, rng);
  const ProductPoint other = random_product_point(6, 4, 2, rng);
  const ProductTangent v = random_unit_tangent(p, rng);
  const ProductTangent w = random_unit_tangent(other, rng);
  EXPECT_THROW(inner(p, v, w), DimensionError);
}

TEST(RandomStiefel, SquareCaseIsOrthogonal) {
  Rng rng(14);
  const StiefelPoint q = random_stiefel(5, 5, rng);
  EXPECT_NEAR(std::abs(q.m.determinant()), 1.0, 1e-10);
}

TEST(RandomStiefel, DeterministicUnderSeed) {
  Rng a(99), b(99);
  const StiefelPoint qa = random_stiefel(6, 3, a);
  const StiefelPoint qb = random_stiefel(6, 3, b);
  EXPECT_TRUE(qa.m == qb.m);  // bit-identical
}

TEST(RandomStiefel, ColumnsOrthonormal) {
  Rng rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    const StiefelPoint q = random_stiefel(12, 4, rng);
    EXPECT_LE(orthonormality_defect(q.m), 1e-10);
  }
}

TEST(RandomStiefel, RejectsBadShape) {
  Rng rng(16);
  EXPECT_THROW(random_stiefel(2, 3, rng), DimensionError);
}

TEST(Tangency, ValidatorsRejectNonTangentPerturbations) {
  Rng rng(17);
  const StiefelPoint x = random_stiefel(5, 2, rng);
  EXPECT_FALSE(is_tangent_at(x, StiefelTangent(x.m)));
  const StiefelTangent good = project_tangent(x, Eigen::MatrixXd::Ones(5, 2));
  EXPECT_TRUE(is_tangent_at(x, good));

  ProductPoint p;
  p.u = x;
  p.v = random_stiefel(4, 2, rng);
  p.x = Eigen::VectorXd::Zero(2);
  ProductTangent v = ProductTangent::zero(p);
  EXPECT_TRUE(is_tangent_at(p, v));
  v.y.m = p.u.m;  // radial direction is never tangent
  EXPECT_FALSE(is_tangent_at(p, v));
}

}  // namespace
}  // namespace adasgd
