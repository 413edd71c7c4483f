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

#include "adasgd/wlra.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace adasgd {

namespace {

constexpr double kWeightSumExact = 1e-12;
constexpr double kWeightSumRenorm = 1e-6;

std::int64_t flat_key(int i, int j, int n) {
  return static_cast<std::int64_t>(i) * n + j;
}

void require_indices(const ProductPoint& p, int tau, int gamma,
                     const char* what) {
  if (tau < 0 || tau >= p.u.rows() || gamma < 0 || gamma >= p.v.rows()) {
    std::ostringstream os;
    os << what << ": entry (" << tau << "," << gamma << ") out of range for "
       << p.u.rows() << "x" << p.v.rows();
    throw DimensionError(os.str());
  }
}

void require_consistent(const ProductPoint& p,
                        const SparseWeightedMatrix& data, const char* what) {
  if (p.u.rows() != data.rows() || p.v.rows() != data.cols() ||
      p.u.cols() != p.x.size() || p.v.cols() != p.x.size()) {
    std::ostringstream os;
    os << what << ": point is " << p.u.rows() << "x" << p.v.rows() << " rank "
       << p.x.size() << ", data is " << data.rows() << "x" << data.cols();
    throw DimensionError(os.str());
  }
}

}  // namespace

SparseWeightedMatrix::SparseWeightedMatrix(int m, int n,
                                           std::vector<WeightedEntry> entries)
    : m_(m), n_(n), entries_(std::move(entries)) {
  if (m < 1 || n < 1) {
    throw DimensionError("SparseWeightedMatrix: needs m, n >= 1");
  }
  index_.reserve(entries_.size());
  // Kahan summation: the 1e-12 acceptance band must reflect the weights
  // themselves, not rounding noise from adding hundreds of thousands of
  // them.
  double weight_sum = 0.0;
  double comp = 0.0;
  for (std::size_t idx = 0; idx < entries_.size(); ++idx) {
    const WeightedEntry& e = entries_[idx];
    if (e.i < 0 || e.i >= m_ || e.j < 0 || e.j >= n_) {
      std::ostringstream os;
      os << "SparseWeightedMatrix: entry (" << e.i << "," << e.j
         << ") outside " << m_ << "x" << n_;
      throw DimensionError(os.str());
    }
    if (e.weight < 0.0 || !std::isfinite(e.weight) ||
        !std::isfinite(e.value)) {
      std::ostringstream os;
      os << "SparseWeightedMatrix: bad entry (" << e.i << "," << e.j
         << "): value " << e.value << ", weight " << e.weight;
      throw ConfigError(os.str());
    }
    const bool fresh =
        index_.emplace(flat_key(e.i, e.j, n_), static_cast<std::uint32_t>(idx))
            .second;
    if (!fresh) {
      std::ostringstream os;
      os << "SparseWeightedMatrix: duplicate entry (" << e.i << "," << e.j
         << ")";
      throw ConfigError(os.str());
    }
    const double y = e.weight - comp;
    const double t = weight_sum + y;
    comp = (t - weight_sum) - y;
    weight_sum = t;
  }
  if (entries_.empty()) return;
  const double dev = std::abs(weight_sum - 1.0);
  if (dev <= kWeightSumExact) return;
  if (dev <= kWeightSumRenorm) {
    for (WeightedEntry& e : entries_) e.weight /= weight_sum;
    return;
  }
  std::ostringstream os;
  os << "SparseWeightedMatrix: weights sum to " << weight_sum
     << ", too far from 1 to renormalize";
  throw ConfigError(os.str());
}

const WeightedEntry* SparseWeightedMatrix::find(int i, int j) const {
  const auto it = index_.find(flat_key(i, j, n_));
  return it == index_.end() ? nullptr : &entries_[it->second];
}

SamplingTable::SamplingTable(const SparseWeightedMatrix& data) {
  const std::size_t n = data.size();
  if (n == 0) {
    throw ConfigError("SamplingTable: no observed entries to sample");
  }
  // Vose's alias method. Scaled weights below/above 1 are paired so every
  // slot splits between itself and one alias.
  prob_.assign(n, 0.0);
  alias_.assign(n, 0);
  std::vector<double> scaled(n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    scaled[idx] = data.entries()[idx].weight * static_cast<double>(n);
  }
  std::vector<std::uint32_t> small, large;
  small.reserve(n);
  large.reserve(n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    (scaled[idx] < 1.0 ? small : large)
        .push_back(static_cast<std::uint32_t>(idx));
  }
  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    small.pop_back();
    const std::uint32_t l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] -= 1.0 - scaled[s];
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (std::uint32_t idx : large) prob_[idx] = 1.0;
  for (std::uint32_t idx : small) prob_[idx] = 1.0;  // roundoff leftovers
}

std::size_t SamplingTable::draw_index(Rng& rng) const {
  std::uniform_int_distribution<std::size_t> slot(0, prob_.size() - 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const std::size_t idx = slot(rng);
  return coin(rng) < prob_[idx] ? idx : alias_[idx];
}

double SamplingTable::induced_probability(std::size_t idx) const {
  double mass = prob_[idx];
  for (std::size_t other = 0; other < prob_.size(); ++other) {
    if (other != idx && alias_[other] == idx) {
      mass += 1.0 - prob_[other];
    }
  }
  return mass / static_cast<double>(prob_.size());
}

EntrySample sample_entry(const SparseWeightedMatrix& data,
                         const SamplingTable& table, Rng& rng) {
  const WeightedEntry& e = data.entries()[table.draw_index(rng)];
  return EntrySample{e.i, e.j};
}

double entry_value(const ProductPoint& p, int tau, int gamma) {
  require_indices(p, tau, gamma, "entry_value");
  double acc = 0.0;
  for (Eigen::Index l = 0; l < p.k(); ++l) {
    acc += p.u.m(tau, l) * p.x(l) * p.v.m(gamma, l);
  }
  return acc;
}

double cost_unregularized(const ProductPoint& p,
                          const SparseWeightedMatrix& data) {
  require_consistent(p, data, "cost_unregularized");
  double acc = 0.0;
  for (const WeightedEntry& e : data.entries()) {
    const double r = e.value - entry_value(p, e.i, e.j);
    acc += e.weight * r * r;
  }
  return acc;
}

double cost_regularized(const ProductPoint& p,
                        const SparseWeightedMatrix& data, double lambda) {
  return cost_unregularized(p, data) + lambda * p.x.squaredNorm();
}

ProductTangent stochastic_gradient(const ProductPoint& p,
                                   const EntrySample& s,
                                   const SparseWeightedMatrix& data,
                                   double lambda) {
  require_consistent(p, data, "stochastic_gradient");
  require_indices(p, s.tau, s.gamma, "stochastic_gradient");
  const WeightedEntry* e = data.find(s.tau, s.gamma);
  if (e == nullptr) {
    std::ostringstream os;
    os << "stochastic_gradient: (" << s.tau << "," << s.gamma
       << ") is not an observed entry";
    throw ConfigError(os.str());
  }
  const Eigen::VectorXd u_row = p.u.m.row(s.tau).transpose();
  const Eigen::VectorXd v_row = p.v.m.row(s.gamma).transpose();
  const double res = e->value - u_row.cwiseProduct(v_row).dot(p.x);
  // Raw partials are supported on row tau of U and row gamma of V.
  const Eigen::VectorXd gu_row = -2.0 * res * p.x.cwiseProduct(v_row);
  const Eigen::VectorXd gv_row = -2.0 * res * p.x.cwiseProduct(u_row);
  ProductTangent g;
  g.y = project_tangent_row(p.u, s.tau, gu_row);
  g.z = project_tangent_row(p.v, s.gamma, gv_row);
  g.xhat = -2.0 * res * u_row.cwiseProduct(v_row) + 2.0 * lambda * p.x;
  return g;
}

ProductTangent full_gradient(const ProductPoint& p,
                             const SparseWeightedMatrix& data,
                             double lambda) {
  require_consistent(p, data, "full_gradient");
  const Eigen::Index k = p.k();
  Eigen::MatrixXd gu = Eigen::MatrixXd::Zero(p.u.rows(), k);
  Eigen::MatrixXd gv = Eigen::MatrixXd::Zero(p.v.rows(), k);
  Eigen::VectorXd gx = Eigen::VectorXd::Zero(k);
  for (const WeightedEntry& e : data.entries()) {
    const Eigen::VectorXd u_row = p.u.m.row(e.i).transpose();
    const Eigen::VectorXd v_row = p.v.m.row(e.j).transpose();
    const double res = e.value - u_row.cwiseProduct(v_row).dot(p.x);
    const double c = -2.0 * e.weight * res;
    gu.row(e.i) += c * p.x.cwiseProduct(v_row).transpose();
    gv.row(e.j) += c * p.x.cwiseProduct(u_row).transpose();
    gx += c * u_row.cwiseProduct(v_row);
  }
  ProductTangent g;
  g.y = project_tangent(p.u, gu);
  g.z = project_tangent(p.v, gv);
  g.xhat = gx + 2.0 * lambda * p.x;
  return g;
}

}  // namespace adasgd
