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

#include "adasgd/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace adasgd {

namespace {

constexpr double kPanelW = 460.0;
constexpr double kPanelH = 340.0;
constexpr double kMarginL = 64.0;
constexpr double kMarginR = 16.0;
constexpr double kMarginT = 34.0;
constexpr double kMarginB = 44.0;
// Where t = 0 sits on the log axis, in decades left of t = 1.
constexpr double kZeroPin = 0.5;

const char* kPalette[] = {"#4363d8", "#e6194b", "#3cb44b", "#f58231",
                          "#911eb4", "#9a6324", "#46f0f0", "#808000"};

double log_x(std::int64_t t) {
  return t == 0 ? -kZeroPin : std::log10(static_cast<double>(t));
}

std::string trim_label(const std::string& s) {
  std::string out;
  for (const char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

}  // namespace

PlotSeries series_from_metrics(const MetricsFile& file,
                               const std::string& label) {
  PlotSeries s;
  s.label = label;
  s.t.reserve(file.records.size());
  s.value.reserve(file.records.size());
  for (const MetricsRecord& rec : file.records) {
    s.t.push_back(rec.t);
    s.value.push_back(rec.cost_unreg);
  }
  return s;
}

void emit_plot(const std::vector<PlotPanel>& panels, const std::string& path) {
  if (panels.empty()) {
    throw ConfigError("emit_plot: no panels");
  }
  for (const PlotPanel& panel : panels) {
    if (panel.series.empty()) {
      throw ConfigError("emit_plot: panel '" + panel.title + "' is empty");
    }
    for (const PlotSeries& s : panel.series) {
      if (s.t.empty() || s.t.size() != s.value.size()) {
        throw ConfigError("emit_plot: series '" + s.label +
                          "' empty or ragged");
      }
    }
  }

  std::ofstream out(path);
  if (!out) {
    throw IoError("emit_plot: cannot open " + path + " for writing");
  }
  const double width = kPanelW * static_cast<double>(panels.size());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << kPanelH << "\" viewBox=\"0 0 " << width << " "
      << kPanelH << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (std::size_t pi = 0; pi < panels.size(); ++pi) {
    const PlotPanel& panel = panels[pi];
    const double ox = kPanelW * static_cast<double>(pi);
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const PlotSeries& s : panel.series) {
      for (std::size_t idx = 0; idx < s.t.size(); ++idx) {
        xmin = std::min(xmin, log_x(s.t[idx]));
        xmax = std::max(xmax, log_x(s.t[idx]));
        ymin = std::min(ymin, s.value[idx]);
        ymax = std::max(ymax, s.value[idx]);
      }
    }
    if (ymax <= ymin) ymax = ymin + 1.0;
    if (xmax <= xmin) xmax = xmin + 1.0;
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    const double plot_w = kPanelW - kMarginL - kMarginR;
    const double plot_h = kPanelH - kMarginT - kMarginB;
    const auto sx = [&](double lx) {
      return ox + kMarginL + (lx - xmin) / (xmax - xmin) * plot_w;
    };
    const auto sy = [&](double y) {
      return kMarginT + (ymax - y) / (ymax - ymin) * plot_h;
    };

    // frame + title
    out << "<rect x=\"" << ox + kMarginL << "\" y=\"" << kMarginT
        << "\" width=\"" << plot_w << "\" height=\"" << plot_h
        << "\" fill=\"none\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << ox + kPanelW / 2 << "\" y=\"" << kMarginT - 12
        << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">"
        << trim_label(panel.title) << "</text>\n";

    // x ticks at whole decades, plus the pinned t = 0 mark
    for (int d = 0; d <= static_cast<int>(std::floor(xmax)); ++d) {
      const double gx = sx(static_cast<double>(d));
      out << "<line x1=\"" << gx << "\" y1=\"" << kMarginT << "\" x2=\"" << gx
          << "\" y2=\"" << kMarginT + plot_h
          << "\" stroke=\"#ddd\" stroke-width=\"0.6\"/>\n";
      out << "<text x=\"" << gx << "\" y=\"" << kMarginT + plot_h + 16
          << "\" text-anchor=\"middle\" font-size=\"11\""
             " font-family=\"sans-serif\">1e"
          << d << "</text>\n";
    }
    if (xmin <= -kZeroPin) {
      out << "<text x=\"" << sx(-kZeroPin) << "\" y=\""
          << kMarginT + plot_h + 16
          << "\" text-anchor=\"middle\" font-size=\"11\""
             " font-family=\"sans-serif\">t=0</text>\n";
    }
    out << "<text x=\"" << ox + kMarginL + plot_w / 2 << "\" y=\""
        << kMarginT + plot_h + 34
        << "\" text-anchor=\"middle\" font-size=\"12\""
           " font-family=\"sans-serif\">iteration t (log10)</text>\n";

    // y ticks
    for (int yt = 0; yt <= 4; ++yt) {
      const double y = ymin + (ymax - ymin) * yt / 4.0;
      const double gy = sy(y);
      out << "<line x1=\"" << ox + kMarginL << "\" y1=\"" << gy << "\" x2=\""
          << ox + kMarginL + plot_w << "\" y2=\"" << gy
          << "\" stroke=\"#eee\" stroke-width=\"0.6\"/>\n";
      std::ostringstream label;
      label.precision(4);
      label << y;
      out << "<text x=\"" << ox + kMarginL - 6 << "\" y=\"" << gy + 4
          << "\" text-anchor=\"end\" font-size=\"10\""
             " font-family=\"sans-serif\">"
          << label.str() << "</text>\n";
    }

    // curves
    for (std::size_t si = 0; si < panel.series.size(); ++si) {
      const PlotSeries& s = panel.series[si];
      const char* color = kPalette[si % (sizeof(kPalette) / sizeof(char*))];
      out << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.4\" points=\"";
      for (std::size_t idx = 0; idx < s.t.size(); ++idx) {
        out << sx(log_x(s.t[idx])) << "," << sy(s.value[idx]);
        if (idx + 1 < s.t.size()) out << " ";
      }
      out << "\"/>\n";
      // legend
      const double ly = kMarginT + 14 + 14 * static_cast<double>(si);
      out << "<line x1=\"" << ox + kMarginL + 8 << "\" y1=\"" << ly
          << "\" x2=\"" << ox + kMarginL + 28 << "\" y2=\"" << ly
          << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
      out << "<text x=\"" << ox + kMarginL + 33 << "\" y=\"" << ly + 4
          << "\" font-size=\"11\" font-family=\"sans-serif\">"
          << trim_label(s.label) << "</text>\n";
    }
  }
  out << "</svg>\n";
  if (!out) {
    throw IoError("emit_plot: write to " + path + " failed");
  }
}

void emit_plot_from_files(const std::vector<std::string>& metrics_paths,
                          const std::string& out_path) {
  if (metrics_paths.empty()) {
    throw ConfigError("emit_plot_from_files: no metrics files");
  }
  PlotPanel panel;
  panel.title = "cost (regularization removed)";
  for (const std::string& path : metrics_paths) {
    panel.series.push_back(series_from_metrics(read_metrics(path), path));
  }
  emit_plot({panel}, out_path);
}

}  // namespace adasgd
