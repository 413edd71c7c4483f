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

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "adasgd/manifold.hpp"

namespace adasgd {

/// One observed matrix entry with its sampling weight.
struct WeightedEntry {
  int i = 0;  // row, 0-based
  int j = 0;  // col, 0-based
  double value = 0.0;
  double weight = 0.0;
};

/// The observed part of an m x n data matrix together with normalized
/// weights. The weights define the sampling measure over entries: they are
/// nonnegative and sum to one. Immutable after construction; safe to share
/// across threads.
class SparseWeightedMatrix {
 public:
  /// Validates indices, rejects duplicates and negative weights. A weight sum
  /// within 1e-12 of 1 is accepted as-is; a deviation up to 1e-6 is fixed by
  /// renormalizing; anything larger is an error.
  SparseWeightedMatrix(int m, int n, std::vector<WeightedEntry> entries);

  int rows() const { return m_; }
  int cols() const { return n_; }
  const std::vector<WeightedEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  /// The entry at (i, j), or nullptr when (i, j) is unobserved.
  const WeightedEntry* find(int i, int j) const;

 private:
  int m_ = 0;
  int n_ = 0;
  std::vector<WeightedEntry> entries_;
  std::unordered_map<std::int64_t, std::uint32_t> index_;
};

/// A draw from the sampling measure: the entry index pair (tau, gamma).
struct EntrySample {
  int tau = 0;
  int gamma = 0;
};

/// Walker alias tables over the observed-entry list, for O(1) sampling from
/// the weight measure. The induced per-entry probability reproduces the
/// weight to ~1e-15.
class SamplingTable {
 public:
  explicit SamplingTable(const SparseWeightedMatrix& data);

  /// Index into data.entries() of one draw.
  std::size_t draw_index(Rng& rng) const;

  /// The exact probability the table assigns to slot idx (for verification).
  double induced_probability(std::size_t idx) const;

  std::size_t size() const { return prob_.size(); }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

EntrySample sample_entry(const SparseWeightedMatrix& data,
                         const SamplingTable& table, Rng& rng);

/// p_(tau,gamma) = sum_l U(tau,l) x_l V(gamma,l), never forming the dense
/// product.
double entry_value(const ProductPoint& p, int tau, int gamma);

/// F-hat: sum over observed entries of w_ij (a_ij - p_ij)^2.
double cost_unregularized(const ProductPoint& p,
                          const SparseWeightedMatrix& data);

/// G = F-hat + lambda ||x||^2 (the Frobenius norm of the factored matrix
/// equals ||x||).
double cost_regularized(const ProductPoint& p,
                        const SparseWeightedMatrix& data, double lambda);

/// Riemannian gradient of the per-sample cost
///   g(U,x,V) = (a - p_(tau,gamma))^2 + lambda ||x||^2
/// at p. The raw Euclidean partials live in a single row of each Stiefel
/// factor, so the tangent projections run in O(k (m+n)).
ProductTangent stochastic_gradient(const ProductPoint& p,
                                   const EntrySample& s,
                                   const SparseWeightedMatrix& data,
                                   double lambda);

/// Gradient of G: the weight-weighted sum of per-entry residual gradients
/// with the regularizer counted once.
ProductTangent full_gradient(const ProductPoint& p,
                             const SparseWeightedMatrix& data, double lambda);

}  // namespace adasgd
