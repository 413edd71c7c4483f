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
#include <string>
#include <vector>

#include "adasgd/synthetic.hpp"

namespace adasgd {

struct ProblemConfig {
  std::optional<std::string> data_path;
  std::optional<SyntheticSpec> generator;
  int k = 0;
};

struct ConfinementConfig {
  double lambda = 0.0;
  std::optional<double> kappa;  // absent: 0.1 x upper bound
  double alpha = 1.0;
  double epsilon = 0.25;
};

struct ScheduleConfig {
  std::string mode = "adaptive";
  std::optional<double> decay;  // K of the deterministic schedule
  std::optional<double> eta0;   // deterministic initial rate; absent: kappa
};

struct RunSection {
  std::int64_t iterations = 1000;
  std::int64_t eval_every = 10;
  std::uint64_t seed = 0;
};

struct OutputSection {
  std::string metrics = "metrics.csv";
  std::optional<std::string> plot;
};

/// One arm of a comparison: a named override of schedule and/or confinement
/// scalars on top of the base config, sharing data, initial iterate and the
/// pre-drawn sample sequence.
struct CompareEntry {
  std::string name;
  std::optional<std::string> panel;
  std::optional<double> lambda;
  std::optional<double> kappa;
  std::optional<double> alpha;
  std::optional<double> epsilon;
  std::optional<std::string> mode;
  std::optional<double> decay;
  std::optional<double> eta0;
};

struct RunConfig {
  ProblemConfig problem;
  ConfinementConfig confinement;
  ScheduleConfig schedule;
  RunSection run;
  OutputSection output;
  std::vector<CompareEntry> compare;
};

/// Command-line flags that override the corresponding config fields.
struct CliOverrides {
  std::optional<std::string> data_path;
  std::optional<int> k;
  std::optional<double> lambda;
  std::optional<double> kappa;
  std::optional<double> alpha;
  std::optional<double> epsilon;
  std::optional<std::string> mode;
  std::optional<double> decay;
  std::optional<double> eta0;
  std::optional<std::int64_t> iterations;
  std::optional<std::int64_t> eval_every;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> metrics;
  std::optional<std::string> plot;
};

RunConfig parse_config_json(const std::string& text, const std::string& where);
RunConfig load_config(const std::string& path);
void apply_overrides(RunConfig& cfg, const CliOverrides& o);

/// Structural validation (field presence/ranges); the confinement scalar
/// inequalities are validated later by the derivation chain.
void validate(const RunConfig& cfg);

/// The metrics path for one comparison arm: stem + "." + name + extension.
std::string compare_metrics_path(const std::string& base,
                                 const std::string& name);

}  // namespace adasgd
