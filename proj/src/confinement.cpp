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

#include "adasgd/confinement.hpp"

#include <cmath>
#include <sstream>

namespace adasgd {

namespace {

// Relative slack for the scalar-bundle inequalities; the derivation hits
// several of them with equality.
constexpr double kDeriveTol = 1e-12;

const WeightedEntry& observed_entry(const SparseWeightedMatrix& data,
                                    const EntrySample& s, const char* what) {
  const WeightedEntry* e = data.find(s.tau, s.gamma);
  if (e == nullptr) {
    std::ostringstream os;
    os << what << ": (" << s.tau << "," << s.gamma
       << ") is not an observed entry";
    throw ConfigError(os.str());
  }
  return *e;
}

}  // namespace

double max_squared_entry(const SparseWeightedMatrix& data) {
  if (data.size() == 0) {
    throw ConfigError("max_squared_entry: no observed entries");
  }
  double best = 0.0;
  for (const WeightedEntry& e : data.entries()) {
    best = std::max(best, e.value * e.value);
  }
  return best;
}

double kappa_upper_bound(double lambda, int k) {
  if (!(lambda > 0.0)) {
    throw ParameterError("kappa_upper_bound: lambda must be positive");
  }
  if (k < 1) {
    throw ParameterError("kappa_upper_bound: k must be >= 1");
  }
  return lambda / (4.0 * k + 2.0 * lambda * lambda);
}

double derive_rho0(double lambda, int k, double kappa, double a) {
  if (!(kappa > 0.0)) {
    throw ParameterError("derive_rho0: kappa must be positive");
  }
  if (a < 0.0) {
    throw ParameterError("derive_rho0: a must be nonnegative");
  }
  const double denom =
      4.0 * lambda - 16.0 * k * kappa - 8.0 * lambda * lambda * kappa;
  if (!(denom > 0.0)) {
    std::ostringstream os;
    os << "derive_rho0: kappa = " << kappa
       << " violates 0 < kappa < lambda/(4k + 2 lambda^2) = "
       << kappa_upper_bound(lambda, k);
    throw ParameterError(os.str());
  }
  return (1.0 + 16.0 * k * kappa) * a / denom;
}

double derive_rho1(double rho0, double kappa, double lambda, int k, double a,
                   double x0_norm_sq) {
  const double one_step = rho0 + a * kappa +
                          (16.0 * k * a + 8.0 * lambda * lambda * rho0 +
                           16.0 * k * rho0) *
                              kappa * kappa;
  return std::max(x0_norm_sq, one_step);
}

double derive_beta(double alpha, double kappa, double epsilon) {
  if (!(alpha > 0.0) || !(kappa > 0.0)) {
    throw ParameterError("derive_beta: alpha and kappa must be positive");
  }
  if (!(epsilon > 0.0) || epsilon > 0.5) {
    throw ParameterError("derive_beta: needs 0 < epsilon <= 1/2");
  }
  return std::pow(alpha / kappa, 2.0 / (1.0 + 2.0 * epsilon));
}

ConfinementParams derive_confinement(double lambda, int k, double a,
                                     std::optional<double> kappa,
                                     double alpha, double epsilon,
                                     double x0_norm_sq) {
  ConfinementParams p;
  p.lambda = lambda;
  p.k = k;
  p.a = a;
  const double bound = kappa_upper_bound(lambda, k);
  p.kappa = kappa.value_or(0.1 * bound);
  if (!(p.kappa > 0.0) || p.kappa >= bound) {
    std::ostringstream os;
    os << "derive_confinement: kappa = " << p.kappa
       << " violates 0 < kappa < lambda/(4k + 2 lambda^2) = " << bound;
    throw ParameterError(os.str());
  }
  p.alpha = alpha;
  p.epsilon = epsilon;
  p.rho0 = derive_rho0(lambda, k, p.kappa, a);
  p.rho1 = derive_rho1(p.rho0, p.kappa, lambda, k, a, x0_norm_sq);
  p.beta = derive_beta(alpha, p.kappa, epsilon);
  validate(p);
  return p;
}

void validate(const ConfinementParams& p) {
  if (!(p.lambda > 0.0)) {
    throw ParameterError("ConfinementParams: lambda must be positive");
  }
  if (p.k < 1) {
    throw ParameterError("ConfinementParams: k must be >= 1");
  }
  if (p.a < 0.0) {
    throw ParameterError("ConfinementParams: a must be nonnegative");
  }
  if (!(p.epsilon > 0.0) || p.epsilon > 0.5) {
    throw ParameterError("ConfinementParams: needs 0 < epsilon <= 1/2");
  }
  const double bound = kappa_upper_bound(p.lambda, p.k);
  if (!(p.kappa > 0.0) || p.kappa >= bound) {
    std::ostringstream os;
    os << "ConfinementParams: kappa = " << p.kappa
       << " violates 0 < kappa < lambda/(4k + 2 lambda^2) = " << bound;
    throw ParameterError(os.str());
  }
  const double rho0_min = derive_rho0(p.lambda, p.k, p.kappa, p.a);
  if (p.rho0 < rho0_min * (1.0 - kDeriveTol)) {
    std::ostringstream os;
    os << "ConfinementParams: rho0 = " << p.rho0
       << " below (1 + 16 k kappa) a / (4 lambda - 16 k kappa"
          " - 8 lambda^2 kappa) = "
       << rho0_min;
    throw ParameterError(os.str());
  }
  const double rho1_min = p.rho0 + p.a * p.kappa +
                          (16.0 * p.k * p.a + 8.0 * p.lambda * p.lambda *
                                                  p.rho0 +
                           16.0 * p.k * p.rho0) *
                              p.kappa * p.kappa;
  if (p.rho1 < rho1_min * (1.0 - kDeriveTol)) {
    std::ostringstream os;
    os << "ConfinementParams: rho1 = " << p.rho1
       << " below rho0 + a kappa + (16ka + 8 lambda^2 rho0 + 16k rho0)"
          " kappa^2 = "
       << rho1_min;
    throw ParameterError(os.str());
  }
  if (!(p.alpha > 0.0) || !(p.beta > 0.0)) {
    throw ParameterError("ConfinementParams: alpha, beta must be positive");
  }
  const double eta0 = p.alpha / std::pow(p.beta, 0.5 + p.epsilon);
  if (rel_err(eta0, p.kappa) > kDeriveTol) {
    std::ostringstream os;
    os << "ConfinementParams: alpha/beta^(1/2+epsilon) = " << eta0
       << " != kappa = " << p.kappa;
    throw ParameterError(os.str());
  }
}

double rho(const ProductPoint& p) { return p.x.squaredNorm(); }

double confinement_pairing(const ProductPoint& p, const EntrySample& s,
                           const SparseWeightedMatrix& data, double lambda) {
  const WeightedEntry& e = observed_entry(data, s, "confinement_pairing");
  const double pval = entry_value(p, s.tau, s.gamma);
  return -4.0 * (e.value - pval) * pval + 4.0 * lambda * rho(p);
}

double hessian_quadratic_form(const ProductPoint& p, const EntrySample& s,
                              const SparseWeightedMatrix& data,
                              double lambda) {
  const WeightedEntry& e = observed_entry(data, s, "hessian_quadratic_form");
  const double res = e.value - entry_value(p, s.tau, s.gamma);
  double acc = 0.0;
  for (Eigen::Index l = 0; l < p.k(); ++l) {
    const double t =
        -res * p.u.m(s.tau, l) * p.v.m(s.gamma, l) + lambda * p.x(l);
    acc += t * t;
  }
  return 8.0 * acc;
}

bool check_confined(const ProductPoint& p, const ConfinementParams& params) {
  return rho(p) <= params.rho1 + kConfinementSlack;
}

}  // namespace adasgd
