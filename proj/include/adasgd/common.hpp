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

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace adasgd {

// All randomness flows through explicitly passed generators; nothing in the
// library owns a hidden global RNG.
using Rng = std::mt19937_64;

// Shape disagreements between matrices/vectors and the dimensions they are
// used with.
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what)
      : std::invalid_argument(what) {}
};

// Scalar parameters outside their admissible range (lambda, kappa, alpha,
// epsilon and friends).
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what)
      : std::invalid_argument(what) {}
};

// Malformed problem setup: empty data, empty sampling table, inconsistent
// configuration files.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// qf() input whose columns are numerically dependent.
class RankDeficiencyError : public std::runtime_error {
 public:
  explicit RankDeficiencyError(const std::string& what)
      : std::runtime_error(what) {}
};

// A caller violated an operation contract (e.g. tangents at mismatched base
// points).
class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& what)
      : std::logic_error(what) {}
};

// A runtime guarantee the theory promises (confinement, orthonormality,
// learning-rate monotonicity) failed to hold. Always a bug or an overridden
// parameter; never silently tolerated.
class InvariantViolation : public std::runtime_error {
 public:
  explicit InvariantViolation(const std::string& what)
      : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Orthonormality / tangency tolerance for Stiefel points and tangents.
inline constexpr double kOrthTol = 1e-10;
// A diagonal entry of R below kRankTolFactor * ||column|| marks the input of
// qf() as rank deficient.
inline constexpr double kRankTolFactor = 1e-12;
// Absolute floating-point slack allowed on the confinement level rho1.
inline constexpr double kConfinementSlack = 1e-9;

// |a - b| relative to max(|a|, |b|, floor). The floor keeps near-zero
// comparisons from blowing up into meaningless huge ratios.
inline double rel_err(double a, double b, double floor = 1e-12) {
  const double scale = std::max({std::abs(a), std::abs(b), floor});
  return std::abs(a - b) / scale;
}

}  // namespace adasgd
