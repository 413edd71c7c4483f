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

#include "adasgd/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace adasgd {

void validate(const SyntheticSpec& spec) {
  if (spec.m < 1 || spec.n < 1) {
    throw ParameterError("SyntheticSpec: needs m, n >= 1");
  }
  if (spec.true_rank < 1 || spec.true_rank > std::min(spec.m, spec.n)) {
    throw ParameterError("SyntheticSpec: needs 1 <= true_rank <= min(m, n)");
  }
  if (!(spec.observed_fraction > 0.0) || spec.observed_fraction > 1.0) {
    throw ParameterError("SyntheticSpec: needs 0 < observed_fraction <= 1");
  }
  if (spec.noise_std < 0.0) {
    throw ParameterError("SyntheticSpec: needs noise_std >= 0");
  }
  if (spec.rating_range && spec.rating_range->first > spec.rating_range->second) {
    throw ParameterError("SyntheticSpec: empty rating range");
  }
}

SparseWeightedMatrix generate_synthetic(const SyntheticSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);
  const int r = spec.true_rank;
  const StiefelPoint u = random_stiefel(spec.m, r, rng);
  const StiefelPoint v = random_stiefel(spec.n, r, rng);
  Eigen::VectorXd sigma(r);
  const double scale = 2.0 * std::sqrt(static_cast<double>(spec.m) *
                                       static_cast<double>(spec.n) / r);
  for (int l = 0; l < r; ++l) {
    sigma(l) = scale * (1.0 - 0.5 * l / r);
  }
  Eigen::MatrixXd full = u.m * sigma.asDiagonal() * v.m.transpose();
  if (spec.noise_std > 0.0) {
    std::normal_distribution<double> gauss(0.0, spec.noise_std);
    for (int i = 0; i < spec.m; ++i) {
      for (int j = 0; j < spec.n; ++j) {
        full(i, j) += gauss(rng);
      }
    }
  }

  const std::int64_t total =
      static_cast<std::int64_t>(spec.m) * static_cast<std::int64_t>(spec.n);
  std::int64_t observed = std::llround(spec.observed_fraction *
                                       static_cast<double>(total));
  observed = std::clamp<std::int64_t>(observed, 1, total);
  std::vector<std::int64_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(static_cast<std::size_t>(observed));
  std::sort(order.begin(), order.end());

  const double w = 1.0 / static_cast<double>(observed);
  std::vector<WeightedEntry> entries;
  entries.reserve(order.size());
  for (const std::int64_t flat : order) {
    WeightedEntry e;
    e.i = static_cast<int>(flat / spec.n);
    e.j = static_cast<int>(flat % spec.n);
    e.value = full(e.i, e.j);
    if (spec.rating_range) {
      const double rounded = std::nearbyint(e.value);
      e.value = std::clamp(rounded,
                           static_cast<double>(spec.rating_range->first),
                           static_cast<double>(spec.rating_range->second));
    }
    e.weight = w;
    entries.push_back(e);
  }
  return SparseWeightedMatrix(spec.m, spec.n, std::move(entries));
}

}  // namespace adasgd
