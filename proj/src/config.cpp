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

#include "adasgd/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace adasgd {

namespace {

using nlohmann::json;

[[noreturn]] void config_fail(const std::string& where,
                              const std::string& why) {
  throw ConfigError("config " + where + ": " + why);
}

SyntheticSpec parse_generator(const json& j, const std::string& where) {
  SyntheticSpec spec;
  spec.m = j.at("m").get<int>();
  spec.n = j.at("n").get<int>();
  spec.true_rank = j.at("true_rank").get<int>();
  spec.observed_fraction = j.value("observed_fraction", 1.0);
  spec.noise_std = j.value("noise_std", 0.0);
  spec.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("rating_range")) {
    const json& r = j.at("rating_range");
    if (!r.is_array() || r.size() != 2) {
      config_fail(where, "rating_range must be [lo, hi]");
    }
    spec.rating_range = {r[0].get<int>(), r[1].get<int>()};
  }
  return spec;
}

CompareEntry parse_compare_entry(const json& j, const std::string& where) {
  CompareEntry e;
  e.name = j.at("name").get<std::string>();
  if (j.contains("panel")) e.panel = j.at("panel").get<std::string>();
  if (j.contains("confinement")) {
    const json& c = j.at("confinement");
    if (c.contains("lambda")) e.lambda = c.at("lambda").get<double>();
    if (c.contains("kappa")) e.kappa = c.at("kappa").get<double>();
    if (c.contains("alpha")) e.alpha = c.at("alpha").get<double>();
    if (c.contains("epsilon")) e.epsilon = c.at("epsilon").get<double>();
  }
  if (j.contains("schedule")) {
    const json& s = j.at("schedule");
    if (s.contains("mode")) e.mode = s.at("mode").get<std::string>();
    if (s.contains("K")) e.decay = s.at("K").get<double>();
    if (s.contains("eta0")) e.eta0 = s.at("eta0").get<double>();
  }
  if (e.name.empty()) config_fail(where, "compare entry with empty name");
  return e;
}

}  // namespace

RunConfig parse_config_json(const std::string& text,
                            const std::string& where) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    config_fail(where, e.what());
  }
  RunConfig cfg;
  try {
    const json& problem = j.at("problem");
    if (problem.contains("data")) {
      cfg.problem.data_path = problem.at("data").get<std::string>();
    }
    if (problem.contains("generator")) {
      cfg.problem.generator = parse_generator(problem.at("generator"), where);
    }
    cfg.problem.k = problem.at("k").get<int>();

    const json& conf = j.at("confinement");
    cfg.confinement.lambda = conf.at("lambda").get<double>();
    if (conf.contains("kappa")) {
      cfg.confinement.kappa = conf.at("kappa").get<double>();
    }
    cfg.confinement.alpha = conf.value("alpha", 1.0);
    cfg.confinement.epsilon = conf.value("epsilon", 0.25);

    if (j.contains("schedule")) {
      const json& sch = j.at("schedule");
      cfg.schedule.mode = sch.value("mode", std::string("adaptive"));
      if (sch.contains("K")) cfg.schedule.decay = sch.at("K").get<double>();
      if (sch.contains("eta0")) {
        cfg.schedule.eta0 = sch.at("eta0").get<double>();
      }
    }

    if (j.contains("run")) {
      const json& run = j.at("run");
      cfg.run.iterations = run.value("iterations", std::int64_t{1000});
      cfg.run.eval_every = run.value("eval_every", std::int64_t{10});
      cfg.run.seed = run.value("seed", std::uint64_t{0});
    }

    if (j.contains("output")) {
      const json& output = j.at("output");
      cfg.output.metrics = output.value("metrics", std::string("metrics.csv"));
      if (output.contains("plot")) {
        cfg.output.plot = output.at("plot").get<std::string>();
      }
    }

    if (j.contains("compare")) {
      for (const json& entry : j.at("compare")) {
        cfg.compare.push_back(parse_compare_entry(entry, where));
      }
    }
  } catch (const json::exception& e) {
    config_fail(where, e.what());
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("load_config: cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_json(buf.str(), path);
}

void apply_overrides(RunConfig& cfg, const CliOverrides& o) {
  if (o.data_path) {
    cfg.problem.data_path = o.data_path;
    cfg.problem.generator.reset();
  }
  if (o.k) cfg.problem.k = *o.k;
  if (o.lambda) cfg.confinement.lambda = *o.lambda;
  if (o.kappa) cfg.confinement.kappa = o.kappa;
  if (o.alpha) cfg.confinement.alpha = *o.alpha;
  if (o.epsilon) cfg.confinement.epsilon = *o.epsilon;
  if (o.mode) cfg.schedule.mode = *o.mode;
  if (o.decay) cfg.schedule.decay = o.decay;
  if (o.eta0) cfg.schedule.eta0 = o.eta0;
  if (o.iterations) cfg.run.iterations = *o.iterations;
  if (o.eval_every) cfg.run.eval_every = *o.eval_every;
  if (o.seed) cfg.run.seed = *o.seed;
  if (o.metrics) cfg.output.metrics = *o.metrics;
  if (o.plot) cfg.output.plot = o.plot;
  validate(cfg);
}

void validate(const RunConfig& cfg) {
  const bool has_data = cfg.problem.data_path.has_value();
  const bool has_gen = cfg.problem.generator.has_value();
  if (has_data == has_gen) {
    throw ConfigError(
        "config: problem needs exactly one of 'data' or 'generator'");
  }
  if (has_gen) validate(*cfg.problem.generator);
  if (cfg.problem.k < 1) {
    throw ConfigError("config: problem.k must be >= 1");
  }
  if (cfg.schedule.mode != "adaptive" && cfg.schedule.mode != "deterministic") {
    throw ConfigError("config: schedule.mode must be 'adaptive' or "
                      "'deterministic', got '" + cfg.schedule.mode + "'");
  }
  if (cfg.run.iterations < 1) {
    throw ConfigError("config: run.iterations must be >= 1");
  }
  if (cfg.run.eval_every < 1) {
    throw ConfigError("config: run.eval_every must be >= 1");
  }
  if (cfg.output.metrics.empty()) {
    throw ConfigError("config: output.metrics must not be empty");
  }
  for (const CompareEntry& e : cfg.compare) {
    if (e.mode && *e.mode != "adaptive" && *e.mode != "deterministic") {
      throw ConfigError("config: compare entry '" + e.name +
                        "': bad schedule mode '" + *e.mode + "'");
    }
  }
}

std::string compare_metrics_path(const std::string& base,
                                 const std::string& name) {
  std::string safe;
  for (const char c : name) {
    safe += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
             c == '_')
                ? c
                : '_';
  }
  const std::size_t dot = base.rfind('.');
  const std::size_t slash = base.rfind('/');
  if (dot == std::string::npos ||
      (slash != std::string::npos && dot < slash)) {
    return base + "." + safe;
  }
  return base.substr(0, dot) + "." + safe + base.substr(dot);
}

}  // namespace adasgd
