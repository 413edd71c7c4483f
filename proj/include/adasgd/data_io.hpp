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

#include <string>

#include "adasgd/wlra.hpp"

namespace adasgd {

/// Reads `i,j,value[,weight]` lines with 1-based indices. An optional first
/// comment `# dims m n` pins the matrix shape; otherwise the maxima of the
/// seen indices define it. Three-column files get uniform weights over the
/// observed entries; four-column files are renormalized to sum to one.
/// Parse problems name the offending line.
SparseWeightedMatrix ingest_csv(const std::string& path);

/// Writes `# dims m n` followed by `i,j,value,weight` rows (1-based, full
/// double precision); ingest_csv(emit_csv(data)) reproduces data exactly.
void emit_csv(const SparseWeightedMatrix& data, const std::string& path);

}  // namespace adasgd
