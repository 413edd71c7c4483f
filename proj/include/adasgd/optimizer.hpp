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
#include <functional>
#include <vector>

#include "adasgd/confinement.hpp"

namespace adasgd {

/// Learning-rate schedule. Adaptive shrinks with the accumulated squared
/// gradient energy; deterministic follows the classical eta0 * K / (K + t)
/// decay (divergent sum, convergent squared sum).
struct Schedule {
  enum class Mode { kAdaptive, kDeterministic };

  Mode mode = Mode::kAdaptive;
  // adaptive: eta_t = alpha / (beta + sum_{s<t} ||grad g_s||^2)^(1/2+epsilon)
  double alpha = 0.0;
  double beta = 0.0;
  double epsilon = 0.0;
  // deterministic: eta_t = eta0 * decay / (decay + t)
  double eta0 = 0.0;
  double decay = 1e4;

  /// The adaptive schedule induced by a validated parameter bundle; its
  /// initial rate is exactly kappa.
  static Schedule adaptive(const ConfinementParams& params);
  static Schedule deterministic(double eta0, double decay);
};

double deterministic_eta(std::int64_t t, double eta0, double decay);
double adaptive_eta(const Schedule& schedule, double grad_sq_accum);

/// The rate the schedule prescribes at iteration t given the accumulated
/// squared gradient norm over steps 0..t-1.
double schedule_eta(const Schedule& schedule, std::int64_t t,
                    double grad_sq_accum);

/// Everything one iterate carries. eta always equals
/// schedule_eta(schedule, t, grad_sq_accum) and never exceeds kappa.
struct OptimizerState {
  std::int64_t t = 0;
  ProductPoint point;
  double grad_sq_accum = 0.0;
  double eta = 0.0;
  Rng rng;

  // Running sum of eta_{t+1}^2 ||grad g_t||^2; bounded by
  // alpha^2 / (2 epsilon beta^(2 epsilon)) in adaptive mode.
  double shifted_series_sum = 0.0;
};

/// Per-iteration metrics. Record t carries the rate eta_t, the squared norm
/// of the gradient that produced x_t (0 at t = 0), and the accumulator the
/// rate was computed from. Cost fields are refreshed on the eval cadence and
/// carried forward in between.
struct MetricsRecord {
  std::int64_t t = 0;
  double eta = 0.0;
  double cost_unreg = 0.0;
  double cost_reg = 0.0;
  double rho_val = 0.0;
  double grad_norm_sq = 0.0;
  double accum = 0.0;
};

using SampleFn = std::function<EntrySample(Rng&)>;
using MetricsSink = std::function<void(const MetricsRecord&)>;

OptimizerState make_state(ProductPoint init, const Schedule& schedule,
                          std::uint64_t seed);

/// A default initial iterate: random Stiefel factors and a flat x0 whose
/// norm matches the data scale, ||x0||^2 = m n sum_e w_e a_e^2. The scale
/// puts the initial product at the magnitude of the observed entries; rho1
/// absorbs it through its max with ||x0||^2.
ProductPoint make_initial_point(const SparseWeightedMatrix& data, int k,
                                Rng& rng);

/// One update of the adaptive/deterministic SGD recursion:
/// sample, gradient, retract by -eta_t * grad, then advance the rate with
/// this step's squared gradient norm appended. Throws InvariantViolation if
/// the new iterate escapes the confinement set or loses orthonormality.
/// The returned record has cost fields unset (NaN); run() fills them.
MetricsRecord step(OptimizerState& state, const SparseWeightedMatrix& data,
                   const ConfinementParams& params, const Schedule& schedule,
                   const SampleFn& draw);

struct RunOptions {
  std::int64_t iterations = 0;
  std::int64_t eval_every = 10;
  std::uint64_t seed = 0;
};

/// Runs `iterations` steps from `init`, emitting the t = 0 baseline record
/// first. Full costs are evaluated at t = 0, every eval_every steps and at
/// the final step; other records carry the last evaluated values. When
/// `fixed_samples` is given the sample sequence is replayed from it instead
/// of drawn from the state's generator (used for variance-matched schedule
/// comparisons). Identical options and inputs give bit-identical records.
std::vector<MetricsRecord> run(const SparseWeightedMatrix& data,
                               const ConfinementParams& params,
                               const Schedule& schedule,
                               const ProductPoint& init,
                               const RunOptions& opts,
                               const MetricsSink* sink = nullptr,
                               const std::vector<EntrySample>* fixed_samples =
                                   nullptr);

}  // namespace adasgd
