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

#include "adasgd/wlra.hpp"

namespace adasgd {

/// The scalar bundle that traps the iterates in a compact set and caps the
/// learning rate. Validated as a whole on construction/derivation:
///   - 0 < kappa < lambda / (4k + 2 lambda^2)
///   - rho0 >= (1 + 16 k kappa) a / (4 lambda - 16 k kappa - 8 lambda^2 kappa)
///   - rho0 + a kappa + (16 k a + 8 lambda^2 rho0 + 16 k rho0) kappa^2 <= rho1
///   - alpha / beta^(1/2 + epsilon) == kappa (so eta_0 == kappa)
///   - 0 < epsilon <= 1/2
struct ConfinementParams {
  double lambda = 0.0;   // regularization weight
  int k = 0;             // rank
  double a = 0.0;        // max squared observed entry
  double kappa = 0.0;    // step-size cap
  double rho0 = 0.0;     // inner confinement level
  double rho1 = 0.0;     // outer confinement level (bounds all iterates)
  double alpha = 0.0;    // learning-rate numerator
  double epsilon = 0.0;  // learning-rate exponent offset, in (0, 1/2]
  double beta = 0.0;     // learning-rate denominator offset
};

/// max a_ij^2 over observed entries.
double max_squared_entry(const SparseWeightedMatrix& data);

/// lambda / (4k + 2 lambda^2); admissible kappa lie strictly below this.
double kappa_upper_bound(double lambda, int k);

/// The smallest admissible inner level:
/// (1 + 16 k kappa) a / (4 lambda - 16 k kappa - 8 lambda^2 kappa).
double derive_rho0(double lambda, int k, double kappa, double a);

/// max(||x0||^2, rho0 + a kappa + (16ka + 8 lambda^2 rho0 + 16k rho0) kappa^2).
double derive_rho1(double rho0, double kappa, double lambda, int k, double a,
                   double x0_norm_sq);

/// (alpha / kappa)^(2 / (1 + 2 epsilon)), the unique beta making the initial
/// learning rate alpha / beta^(1/2+epsilon) equal kappa.
double derive_beta(double alpha, double kappa, double epsilon);

/// Full derivation chain. kappa defaults to 0.1x its upper bound when not
/// given. Throws ParameterError naming the violated inequality.
ConfinementParams derive_confinement(double lambda, int k, double a,
                                     std::optional<double> kappa,
                                     double alpha, double epsilon,
                                     double x0_norm_sq);

/// Re-checks every ConfinementParams invariant (for user-overridden bundles).
void validate(const ConfinementParams& p);

/// The confinement function: rho(U, x, V) = ||x||^2.
double rho(const ProductPoint& p);

/// <grad rho, grad g_(tau,gamma)> in closed form:
/// -4 (a - p) p + 4 lambda ||x||^2. Also equals
/// inner(p, (0, 2x, 0), stochastic_gradient(p, s)).
double confinement_pairing(const ProductPoint& p, const EntrySample& s,
                           const SparseWeightedMatrix& data, double lambda);

/// The quadratic form of the Hessian of rho composed with the retraction,
/// evaluated on the stochastic gradient:
/// 8 sum_l (-(a - p) u_l v_l + lambda x_l)^2, which is twice the squared
/// norm of the gradient's x-slot.
double hessian_quadratic_form(const ProductPoint& p, const EntrySample& s,
                              const SparseWeightedMatrix& data,
                              double lambda);

/// rho(p) <= rho1 + absolute floating-point slack.
bool check_confined(const ProductPoint& p, const ConfinementParams& params);

}  // namespace adasgd
