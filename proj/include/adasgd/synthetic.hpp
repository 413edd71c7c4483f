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

#include <optional>
#include <utility>

#include "adasgd/wlra.hpp"

namespace adasgd {

/// Recipe for a synthetic low-rank completion instance: a planted
/// rank-`true_rank` matrix with decreasing positive singular values at the
/// scale of unit-ish entries, observed on a uniform random subset.
struct SyntheticSpec {
  int m = 0;
  int n = 0;
  int true_rank = 0;
  double observed_fraction = 1.0;
  double noise_std = 0.0;
  // When set, entries are rounded and clamped into [first, second] to mimic
  // integer ratings.
  std::optional<std::pair<int, int>> rating_range;
  std::uint64_t seed = 0;
};

void validate(const SyntheticSpec& spec);

/// Plants A = U* diag(sigma) V*^T + noise with random Stiefel factors and
/// sigma_l = 2 sqrt(mn / r) (1 - l / (2r)), observes round(fraction * m * n)
/// entries chosen uniformly, and weights them uniformly.
SparseWeightedMatrix generate_synthetic(const SyntheticSpec& spec);

}  // namespace adasgd
