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

#include <sstream>
#include <utility>

namespace adasgd {

namespace {

void require_same_shape(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                        const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << what << ": shape mismatch (" << a.rows() << "x" << a.cols()
       << " vs " << b.rows() << "x" << b.cols() << ")";
    throw DimensionError(os.str());
  }
}

}  // namespace

StiefelPoint::StiefelPoint(Eigen::MatrixXd data) : m(std::move(data)) {
  if (m.cols() > m.rows()) {
    throw DimensionError("StiefelPoint: needs k <= n");
  }
  if (!is_orthonormal(m)) {
    std::ostringstream os;
    os << "StiefelPoint: columns not orthonormal, defect "
       << orthonormality_defect(m);
    throw ContractViolation(os.str());
  }
}

StiefelPoint StiefelPoint::unchecked(Eigen::MatrixXd data) {
  StiefelPoint p;
  p.m = std::move(data);
  return p;
}

ProductTangent ProductTangent::zero(const ProductPoint& p) {
  ProductTangent v;
  v.y.m = Eigen::MatrixXd::Zero(p.u.rows(), p.u.cols());
  v.xhat = Eigen::VectorXd::Zero(p.x.size());
  v.z.m = Eigen::MatrixXd::Zero(p.v.rows(), p.v.cols());
  return v;
}

double orthonormality_defect(const Eigen::MatrixXd& x) {
  const Eigen::Index k = x.cols();
  return (x.transpose() * x - Eigen::MatrixXd::Identity(k, k))
      .cwiseAbs()
      .maxCoeff();
}

bool is_orthonormal(const Eigen::MatrixXd& x, double tol) {
  return orthonormality_defect(x) <= tol;
}

double tangency_defect(const StiefelPoint& x, const StiefelTangent& z) {
  require_same_shape(x.m, z.m, "tangency_defect");
  Eigen::MatrixXd s = x.m.transpose() * z.m;
  return (s + s.transpose()).cwiseAbs().maxCoeff();
}

bool is_tangent_at(const StiefelPoint& x, const StiefelTangent& z,
                   double tol) {
  return tangency_defect(x, z) <= tol;
}

bool is_tangent_at(const ProductPoint& p, const ProductTangent& v,
                   double tol) {
  if (v.xhat.size() != p.x.size()) return false;
  return is_tangent_at(p.u, v.y, tol) && is_tangent_at(p.v, v.z, tol);
}

StiefelTangent project_tangent(const StiefelPoint& x,
                               const Eigen::MatrixXd& xi) {
  require_same_shape(x.m, xi, "project_tangent");
  // (I - XX^T) xi + X (X^T xi - xi^T X)/2 == xi - X sym(X^T xi)
  Eigen::MatrixXd xtxi = x.m.transpose() * xi;
  Eigen::MatrixXd sym = 0.5 * (xtxi + xtxi.transpose());
  return StiefelTangent(xi - x.m * sym);
}

StiefelTangent project_tangent_row(const StiefelPoint& x, Eigen::Index row,
                                   const Eigen::VectorXd& w) {
  if (row < 0 || row >= x.rows()) {
    throw DimensionError("project_tangent_row: row index out of range");
  }
  if (w.size() != x.cols()) {
    throw DimensionError("project_tangent_row: vector length != k");
  }
  // For xi = e_row w^T:  X^T xi = u w^T with u = X(row,:)^T, and
  //   xi - X sym(u w^T) = e_row w^T - ((X u) w^T + (X w) u^T) / 2.
  Eigen::VectorXd u = x.m.row(row).transpose();
  Eigen::VectorXd xu = x.m * u;
  Eigen::VectorXd xw = x.m * w;
  Eigen::MatrixXd out = -0.5 * (xu * w.transpose() + xw * u.transpose());
  out.row(row) += w.transpose();
  return StiefelTangent(std::move(out));
}

QrFactors qr_positive(const Eigen::MatrixXd& c) {
  const Eigen::Index n = c.rows();
  const Eigen::Index k = c.cols();
  if (k > n) {
    throw DimensionError("qr_positive: needs k <= n");
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(c);
  QrFactors f;
  f.q = qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
  f.r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < k; ++j) {
    const double col_norm = c.col(j).norm();
    if (std::abs(f.r(j, j)) <= kRankTolFactor * col_norm) {
      std::ostringstream os;
      os << "qr_positive: column " << j << " numerically dependent (|R_jj| = "
         << std::abs(f.r(j, j)) << ", column norm = " << col_norm << ")";
      throw RankDeficiencyError(os.str());
    }
    if (f.r(j, j) < 0) {
      f.q.col(j) = -f.q.col(j);
      f.r.row(j) = -f.r.row(j);
    }
  }
  return f;
}

StiefelPoint qf(const Eigen::MatrixXd& c) {
  return StiefelPoint::unchecked(qr_positive(c).q);
}

ProductPoint retract(const ProductPoint& p, const ProductTangent& v) {
  require_same_shape(p.u.m, v.y.m, "retract (U factor)");
  require_same_shape(p.v.m, v.z.m, "retract (V factor)");
  if (v.xhat.size() != p.x.size()) {
    throw DimensionError("retract: xhat length != k");
  }
  ProductPoint out;
  out.u = qf(p.u.m + v.y.m);
  out.x = p.x + v.xhat;
  out.v = qf(p.v.m + v.z.m);
  return out;
}

double inner(const ProductPoint& p, const ProductTangent& a,
             const ProductTangent& b) {
  require_same_shape(p.u.m, a.y.m, "inner (first tangent, U factor)");
  require_same_shape(p.u.m, b.y.m, "inner (second tangent, U factor)");
  require_same_shape(p.v.m, a.z.m, "inner (first tangent, V factor)");
  require_same_shape(p.v.m, b.z.m, "inner (second tangent, V factor)");
  if (a.xhat.size() != p.x.size() || b.xhat.size() != p.x.size()) {
    throw DimensionError("inner: xhat length != k");
  }
  return a.y.m.cwiseProduct(b.y.m).sum() + a.xhat.dot(b.xhat) +
         a.z.m.cwiseProduct(b.z.m).sum();
}

double norm_sq(const ProductPoint& p, const ProductTangent& v) {
  return inner(p, v, v);
}

StiefelPoint random_stiefel(Eigen::Index n, Eigen::Index k, Rng& rng) {
  if (k > n || k < 1) {
    throw DimensionError("random_stiefel: needs 1 <= k <= n");
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int attempt = 0; attempt < 3; ++attempt) {
    Eigen::MatrixXd g(n, k);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < k; ++j) {
        g(i, j) = gauss(rng);
      }
    }
    try {
      return qf(g);
    } catch (const RankDeficiencyError&) {
      // essentially impossible for a Gaussian draw; retry
    }
  }
  throw RankDeficiencyError("random_stiefel: repeated degenerate draws");
}

}  // namespace adasgd
