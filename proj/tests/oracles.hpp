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

// Test-only reference implementations, kept independent of the library code
// paths they are used to check.

#pragma once

#include <Eigen/Dense>

#include "adasgd/wlra.hpp"

namespace adasgd::testing {

struct GramSchmidtResult {
  Eigen::MatrixXd q;
  Eigen::MatrixXd r;
};

// Classical Gram-Schmidt with column normalization. Numerically worse than
// Householder but a direct transcription of the textbook construction, which
// makes it an independent oracle for qf().
inline GramSchmidtResult gram_schmidt(const Eigen::MatrixXd& c) {
  const Eigen::Index n = c.rows();
  const Eigen::Index k = c.cols();
  GramSchmidtResult out;
  out.q = Eigen::MatrixXd::Zero(n, k);
  out.r = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    Eigen::VectorXd v = c.col(j);
    for (Eigen::Index i = 0; i < j; ++i) {
      out.r(i, j) = out.q.col(i).dot(c.col(j));
      v -= out.r(i, j) * out.q.col(i);
    }
    out.r(j, j) = v.norm();
    out.q.col(j) = v / out.r(j, j);
  }
  return out;
}

// The dense matrix U diag(x) V^T the factored representation stands for.
inline Eigen::MatrixXd dense_product(const ProductPoint& p) {
  return p.u.m * p.x.asDiagonal() * p.v.m.transpose();
}

// Weighted cost evaluated through the dense product.
inline double dense_cost(const ProductPoint& p,
                         const SparseWeightedMatrix& data, double lambda) {
  const Eigen::MatrixXd dense = dense_product(p);
  double acc = 0.0;
  for (const WeightedEntry& e : data.entries()) {
    const double r = e.value - dense(e.i, e.j);
    acc += e.weight * r * r;
  }
  return acc + lambda * dense.squaredNorm();
}

// Literal transcription of the tangent projection formula, as an oracle for
// the rearranged implementation.
inline Eigen::MatrixXd literal_projection(const Eigen::MatrixXd& x,
                                          const Eigen::MatrixXd& xi) {
  const Eigen::Index n = x.rows();
  return (Eigen::MatrixXd::Identity(n, n) - x * x.transpose()) * xi +
         0.5 * x * (x.transpose() * xi - xi.transpose() * x);
}

}  // namespace adasgd::testing
