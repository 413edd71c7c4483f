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
#include <vector>

#include "adasgd/metrics_io.hpp"

namespace adasgd {

/// One convergence curve: the unregularized cost per iteration.
struct PlotSeries {
  std::string label;
  std::vector<std::int64_t> t;
  std::vector<double> value;
};

/// Curves sharing one pair of axes.
struct PlotPanel {
  std::string title;
  std::vector<PlotSeries> series;
};

/// Writes a dependency-free SVG: cost against log10(t), panels side by side.
/// t = 0 cannot enter the log transform and is pinned half a decade left of
/// t = 1.
void emit_plot(const std::vector<PlotPanel>& panels, const std::string& path);

PlotSeries series_from_metrics(const MetricsFile& file,
                               const std::string& label);

/// One series per metrics file, single panel.
void emit_plot_from_files(const std::vector<std::string>& metrics_paths,
                          const std::string& out_path);

}  // namespace adasgd
