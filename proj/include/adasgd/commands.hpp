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

#include "adasgd/config.hpp"
#include "adasgd/diagnostics.hpp"

namespace adasgd {

// Process exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;     // check failures, internal errors
inline constexpr int kExitParams = 2;      // parameter/config validation
inline constexpr int kExitInvariant = 3;   // runtime invariant violation
inline constexpr int kExitIo = 4;          // file system problems

/// Derives the confinement bundle, echoes it into the metrics header, runs
/// the optimizer, writes the metrics CSV and the optional SVG.
int cmd_run(const RunConfig& cfg, std::ostream& log);

/// Runs every compare entry over the same data, initial iterate and
/// pre-drawn sample sequence; one combined SVG, one metrics file per entry.
/// A failing entry does not abort its siblings.
int cmd_compare(const RunConfig& cfg, std::ostream& log);

struct CheckOptions {
  std::uint64_t seed = 20260809;
  std::optional<int> trials;  // overrides every check's trial count
  Mutation mutation = Mutation::kNone;
  std::optional<std::string> report_path;  // machine-readable JSON
};

/// Runs the diagnostics suite; exit 0 iff everything passes.
int cmd_check(const CheckOptions& opts, std::ostream& log);

/// Generates synthetic data and writes it as a data CSV.
int cmd_generate(const SyntheticSpec& spec, const std::string& out_path,
                 std::ostream& log);

/// Renders metrics files into one SVG.
int cmd_plot(const std::vector<std::string>& metrics_paths,
             const std::string& out_path, std::ostream& log);

}  // namespace adasgd
