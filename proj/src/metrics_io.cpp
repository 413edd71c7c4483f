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

#include "adasgd/metrics_io.hpp"

#include <cstdio>
#include <sstream>

namespace adasgd {

namespace {

constexpr char kHeaderRow[] = "t,eta,cost_unreg,cost_reg,rho,grad_norm_sq,accum";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

MetricsMeta make_metrics_meta(const ConfinementParams& params,
                              const Schedule& schedule,
                              const SparseWeightedMatrix& data,
                              const RunOptions& opts) {
  MetricsMeta meta;
  meta["lambda"] = fmt(params.lambda);
  meta["kappa"] = fmt(params.kappa);
  meta["kappa_bound"] = fmt(kappa_upper_bound(params.lambda, params.k));
  meta["rho0"] = fmt(params.rho0);
  meta["rho1"] = fmt(params.rho1);
  meta["beta"] = fmt(params.beta);
  meta["a"] = fmt(params.a);
  meta["alpha"] = fmt(params.alpha);
  meta["epsilon"] = fmt(params.epsilon);
  meta["k"] = std::to_string(params.k);
  meta["m"] = std::to_string(data.rows());
  meta["n"] = std::to_string(data.cols());
  meta["observed"] = std::to_string(data.size());
  meta["mode"] = schedule.mode == Schedule::Mode::kAdaptive ? "adaptive"
                                                            : "deterministic";
  if (schedule.mode == Schedule::Mode::kDeterministic) {
    meta["eta0"] = fmt(schedule.eta0);
    meta["K"] = fmt(schedule.decay);
  }
  meta["iterations"] = std::to_string(opts.iterations);
  meta["eval_every"] = std::to_string(opts.eval_every);
  meta["seed"] = std::to_string(opts.seed);
  return meta;
}

MetricsWriter::MetricsWriter(const std::string& path, const MetricsMeta& meta)
    : path_(path), out_(path) {
  if (!out_) {
    throw IoError("MetricsWriter: cannot open " + path + " for writing");
  }
  for (const auto& [key, value] : meta) {
    out_ << "# " << key << "=" << value << "\n";
  }
  out_ << kHeaderRow << "\n";
  if (!out_) {
    throw IoError("MetricsWriter: write to " + path + " failed");
  }
}

void MetricsWriter::write(const MetricsRecord& rec) {
  char buf[320];
  std::snprintf(buf, sizeof(buf),
                "%lld,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g",
                static_cast<long long>(rec.t), rec.eta, rec.cost_unreg,
                rec.cost_reg, rec.rho_val, rec.grad_norm_sq, rec.accum);
  out_ << buf << "\n";
  if (!out_) {
    throw IoError("MetricsWriter: write to " + path_ + " failed");
  }
}

void MetricsWriter::close() {
  out_.flush();
  out_.close();
  if (out_.fail()) {
    throw IoError("MetricsWriter: closing " + path_ + " failed");
  }
}

MetricsFile read_metrics(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("read_metrics: cannot open " + path);
  }
  MetricsFile file;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = line.substr(1);
      const std::size_t eq = body.find('=');
      if (eq != std::string::npos) {
        std::string key = body.substr(0, eq);
        // trim the single leading space written by MetricsWriter
        if (!key.empty() && key.front() == ' ') key.erase(key.begin());
        file.meta[key] = body.substr(eq + 1);
      }
      continue;
    }
    if (!saw_header) {
      if (line != kHeaderRow) {
        std::ostringstream os;
        os << "read_metrics: " << path << ": line " << line_no
           << ": unexpected header '" << line << "'";
        throw ConfigError(os.str());
      }
      saw_header = true;
      continue;
    }
    MetricsRecord rec;
    long long t = 0;
    const int got = std::sscanf(line.c_str(), "%lld,%lg,%lg,%lg,%lg,%lg,%lg",
                                &t, &rec.eta, &rec.cost_unreg, &rec.cost_reg,
                                &rec.rho_val, &rec.grad_norm_sq, &rec.accum);
    if (got != 7) {
      std::ostringstream os;
      os << "read_metrics: " << path << ": line " << line_no
         << ": malformed record";
      throw ConfigError(os.str());
    }
    rec.t = t;
    file.records.push_back(rec);
  }
  if (!saw_header || file.records.empty()) {
    throw ConfigError("read_metrics: " + path + " has no records");
  }
  return file;
}

}  // namespace adasgd
