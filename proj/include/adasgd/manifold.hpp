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

#pragma once

#include <Eigen/Dense>

#include "adasgd/common.hpp"

namespace adasgd {

/// A point of the Stiefel manifold V_k(R^n): an n x k matrix with
/// orthonormal columns. Construction through qf() or random_stiefel()
/// guarantees the invariant; the raw constructor checks it.
struct StiefelPoint {
  Eigen::MatrixXd m;

  StiefelPoint() = default;
  explicit StiefelPoint(Eigen::MatrixXd data);

  Eigen::Index rows() const { return m.rows(); }
  Eigen::Index cols() const { return m.cols(); }

  /// Wraps a matrix already known to be orthonormal (outputs of qf), skipping
  /// the O(nk^2) check.
  static StiefelPoint unchecked(Eigen::MatrixXd data);
};

/// A tangent vector at some X in V_k(R^n): Z with X^T Z + Z^T X = 0.
/// The base point is carried by the operations, not the vector.
struct StiefelTangent {
  Eigen::MatrixXd m;

  StiefelTangent() = default;
  explicit StiefelTangent(Eigen::MatrixXd data) : m(std::move(data)) {}

  Eigen::Index rows() const { return m.rows(); }
  Eigen::Index cols() const { return m.cols(); }
};

/// A point of the product manifold V_k(R^m) x R^k x V_k(R^n).
struct ProductPoint {
  StiefelPoint u;
  Eigen::VectorXd x;
  StiefelPoint v;

  Eigen::Index k() const { return x.size(); }
};

/// A tangent vector (Y, xhat, Z) at a ProductPoint.
struct ProductTangent {
  StiefelTangent y;
  Eigen::VectorXd xhat;
  StiefelTangent z;

  static ProductTangent zero(const ProductPoint& p);
};

/// max |X^T X - I| entry; the distance from orthonormality we tolerate is
/// kOrthTol.
double orthonormality_defect(const Eigen::MatrixXd& x);
bool is_orthonormal(const Eigen::MatrixXd& x, double tol = kOrthTol);

/// max |X^T Z + Z^T X| entry.
double tangency_defect(const StiefelPoint& x, const StiefelTangent& z);
bool is_tangent_at(const StiefelPoint& x, const StiefelTangent& z,
                   double tol = kOrthTol);
bool is_tangent_at(const ProductPoint& p, const ProductTangent& v,
                   double tol = kOrthTol);

/// Orthogonal projection of an ambient n x k matrix onto the tangent space
/// at X: (I - X X^T) xi + X (X^T xi - xi^T X) / 2, computed as
/// xi - X sym(X^T xi).
StiefelTangent project_tangent(const StiefelPoint& x,
                               const Eigen::MatrixXd& xi);

/// Same projection for an ambient matrix supported on a single row,
/// xi = e_row * w^T. Costs O(nk) instead of O(nk^2).
StiefelTangent project_tangent_row(const StiefelPoint& x, Eigen::Index row,
                                   const Eigen::VectorXd& w);

struct QrFactors {
  Eigen::MatrixXd q;  // n x k, orthonormal columns
  Eigen::MatrixXd r;  // k x k, upper triangular, positive diagonal
};

/// QR decomposition with the sign convention that makes it unique: R has a
/// strictly positive diagonal. Householder reflections plus a diagonal sign
/// fix; equals the Gram-Schmidt Q up to roundoff but is numerically stabler.
/// Throws RankDeficiencyError when |R_jj| <= kRankTolFactor * ||C_j||.
QrFactors qr_positive(const Eigen::MatrixXd& c);

/// The Q factor of qr_positive: the canonical orthonormalization of C.
StiefelPoint qf(const Eigen::MatrixXd& c);

/// Retraction on the product manifold:
/// R_(U,x,V)(Y, xhat, Z) = (qf(U+Y), x + xhat, qf(V+Z)).
ProductPoint retract(const ProductPoint& p, const ProductTangent& v);

/// Riemannian inner product: Frobenius on the Stiefel factors plus the
/// Euclidean dot on the R^k factor. The base point fixes the expected shapes.
double inner(const ProductPoint& p, const ProductTangent& a,
             const ProductTangent& b);

/// inner(p, v, v).
double norm_sq(const ProductPoint& p, const ProductTangent& v);

/// qf of an n x k matrix of independent standard normal draws. Retries a
/// degenerate draw (probability ~ 0) up to three times.
StiefelPoint random_stiefel(Eigen::Index n, Eigen::Index k, Rng& rng);

}  // namespace adasgd
