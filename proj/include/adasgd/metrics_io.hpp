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

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "adasgd/optimizer.hpp"

namespace adasgd {

/// Key/value pairs echoed into the metrics header as '# key=value' comments:
/// the derived parameter bundle plus run identification.
using MetricsMeta = std::map<std::string, std::string>;

MetricsMeta make_metrics_meta(const ConfinementParams& params,
                              const Schedule& schedule,
                              const SparseWeightedMatrix& data,
                              const RunOptions& opts);

/// Streams records into the stable CSV schema
///   t,eta,cost_unreg,cost_reg,rho,grad_norm_sq,accum
/// with full double precision, after '#'-prefixed meta comments. Write
/// failures surface as IoError; whatever was already written stays on disk.
class MetricsWriter {
 public:
  MetricsWriter(const std::string& path, const MetricsMeta& meta);

  void write(const MetricsRecord& rec);
  void close();

  MetricsSink sink() {
    return [this](const MetricsRecord& rec) { write(rec); };
  }

 private:
  std::string path_;
  std::ofstream out_;
};

struct MetricsFile {
  MetricsMeta meta;
  std::vector<MetricsRecord> records;
};

MetricsFile read_metrics(const std::string& path);

}  // namespace adasgd
