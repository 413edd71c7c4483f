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

#include <iosfwd>
#include <string>
#include <vector>

#include "adasgd/optimizer.hpp"

namespace adasgd {

/// Outcome of one numerical check: worst relative error seen, the threshold
/// it was held to, and a descriptor (seed + dims) of the worst instance so a
/// failure can be reproduced.
struct CheckReport {
  std::string name;
  int instances = 0;
  double max_rel_err = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string worst_case;
};

/// Deliberate formula corruptions, used to confirm the oracles can actually
/// detect a wrong implementation.
enum class Mutation {
  kNone,
  kFlipGradientSignX,  // negate the x-slot of the stochastic gradient
  kInflateKappa,       // test the pairing inequality with kappa = 2x its bound
};

/// A small random problem instance shared by the checks and the tests:
/// random dims, random positive normalized weights, values in +-value_scale,
/// a random manifold point.
struct RandomWlra {
  SparseWeightedMatrix data;
  ProductPoint point;
  double lambda = 0.0;
};

RandomWlra random_wlra_instance(Rng& rng, int max_dim, int max_k,
                                double lambda, double value_scale = 3.0);

/// Uniform pick over observed entries (not the sampling measure; checks want
/// coverage, not fidelity).
EntrySample random_observed(const SparseWeightedMatrix& data, Rng& rng);

/// Gaussian ambient noise projected to the tangent space and normalized to
/// unit Riemannian norm.
ProductTangent random_unit_tangent(const ProductPoint& p, Rng& rng);

/// Central finite differences of the per-sample cost along retraction rays
/// against the implemented gradient, h = 1e-5, threshold 1e-6.
CheckReport check_gradient_fd(std::uint64_t seed, int trials,
                              Mutation mutation = Mutation::kNone);

/// Full enumeration of the sampling space: weighted per-sample costs must
/// reproduce the regularized cost, weighted per-sample gradients the full
/// gradient. Threshold 1e-12.
CheckReport check_expectation(std::uint64_t seed, int trials);

/// The closed-form Hessian quadratic form against twice the squared norm of
/// the gradient's x-slot (threshold 1e-12), plus its upper bound
/// 16 (2ka + 2k||x||^2 + lambda^2 ||x||^2).
CheckReport check_hessian_identity(std::uint64_t seed, int trials);

/// Samples the annulus rho0 <= ||x||^2 <= rho1 (random and adversarially
/// constructed points) and asserts the pairing inequality
/// <grad rho, grad g> >= kappa/2 |Hess form|, plus the one-step escape bound
/// rho(R(-s grad g)) <= rho1 for ||x||^2 <= rho0, s in [0, kappa].
CheckReport check_confinement_annulus(const ConfinementParams& params,
                                      std::uint64_t seed, int trials,
                                      Mutation mutation = Mutation::kNone);

/// Retraction axioms: R_p(0) = p to 1e-12 and dR_p(0) = id via
/// Richardson-extrapolated central differences at threshold 1e-6.
CheckReport check_retraction_axioms(std::uint64_t seed, int trials);

struct DiagnosticsConfig {
  std::uint64_t seed = 20260809;
  int gradient_trials = 50;
  int expectation_trials = 20;
  int hessian_trials = 1000;
  int annulus_trials = 1000;
  int retraction_trials = 50;
  Mutation mutation = Mutation::kNone;
};

/// Runs every check with trials > 0. An empty selection yields an empty
/// report list, which counts as a (warned-about) vacuous pass.
std::vector<CheckReport> run_all(const DiagnosticsConfig& config);

bool all_pass(const std::vector<CheckReport>& reports);

/// Fixed-width table, one row per check.
void print_reports(std::ostream& os, const std::vector<CheckReport>& reports);

}  // namespace adasgd
