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

#include "adasgd/commands.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <ostream>

#include <json.hpp>

#include "adasgd/data_io.hpp"
#include "adasgd/metrics_io.hpp"
#include "adasgd/plot.hpp"

namespace adasgd {

namespace {

int guard(std::ostream& log, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParameterError& e) {
    log << "parameter error: " << e.what() << "\n";
    return kExitParams;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitParams;
  } catch (const DimensionError& e) {
    log << "dimension error: " << e.what() << "\n";
    return kExitParams;
  } catch (const InvariantViolation& e) {
    log << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const ContractViolation& e) {
    log << "contract violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const IoError& e) {
    log << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

SparseWeightedMatrix load_problem_data(const RunConfig& cfg) {
  if (cfg.problem.data_path) {
    return ingest_csv(*cfg.problem.data_path);
  }
  return generate_synthetic(*cfg.problem.generator);
}

struct PreparedRun {
  ConfinementParams params;
  Schedule schedule;
};

PreparedRun prepare(const SparseWeightedMatrix& data,
                    const ConfinementConfig& conf,
                    const ScheduleConfig& sched, int k,
                    double x0_norm_sq) {
  PreparedRun out;
  const double a = max_squared_entry(data);
  out.params = derive_confinement(conf.lambda, k, a, conf.kappa, conf.alpha,
                                  conf.epsilon, x0_norm_sq);
  if (sched.mode == "adaptive") {
    out.schedule = Schedule::adaptive(out.params);
  } else {
    const double eta0 = sched.eta0.value_or(out.params.kappa);
    out.schedule = Schedule::deterministic(eta0, sched.decay.value_or(1e4));
  }
  return out;
}

void log_params(std::ostream& log, const ConfinementParams& p) {
  log << "  lambda=" << p.lambda << " kappa=" << p.kappa
      << " bound=" << kappa_upper_bound(p.lambda, p.k) << " rho0=" << p.rho0
      << " rho1=" << p.rho1 << " beta=" << p.beta << " a=" << p.a << "\n";
}

ScheduleConfig merged_schedule(const ScheduleConfig& base,
                               const CompareEntry& e) {
  ScheduleConfig out = base;
  if (e.mode) out.mode = *e.mode;
  if (e.decay) out.decay = e.decay;
  if (e.eta0) out.eta0 = e.eta0;
  return out;
}

ConfinementConfig merged_confinement(const ConfinementConfig& base,
                                     const CompareEntry& e) {
  ConfinementConfig out = base;
  if (e.lambda) out.lambda = *e.lambda;
  if (e.kappa) out.kappa = e.kappa;
  if (e.alpha) out.alpha = *e.alpha;
  if (e.epsilon) out.epsilon = *e.epsilon;
  return out;
}

}  // namespace

int cmd_run(const RunConfig& cfg, std::ostream& log) {
  return guard(log, [&]() {
    const SparseWeightedMatrix data = load_problem_data(cfg);
    Rng rng(cfg.run.seed);
    const ProductPoint init =
        make_initial_point(data, cfg.problem.k, rng);
    const PreparedRun pr =
        prepare(data, cfg.confinement, cfg.schedule, cfg.problem.k,
                init.x.squaredNorm());
    log << "run: " << data.rows() << "x" << data.cols() << ", "
        << data.size() << " observed entries, k=" << cfg.problem.k << "\n";
    log_params(log, pr.params);

    // Pre-draw the sample sequence so run and compare share one code path.
    const SamplingTable table(data);
    std::vector<EntrySample> samples;
    samples.reserve(static_cast<std::size_t>(cfg.run.iterations));
    for (std::int64_t i = 0; i < cfg.run.iterations; ++i) {
      samples.push_back(sample_entry(data, table, rng));
    }

    const RunOptions opts{cfg.run.iterations, cfg.run.eval_every,
                          cfg.run.seed};
    MetricsWriter writer(cfg.output.metrics,
                         make_metrics_meta(pr.params, pr.schedule, data,
                                           opts));
    const MetricsSink sink = writer.sink();
    const std::vector<MetricsRecord> records =
        run(data, pr.params, pr.schedule, init, opts, &sink, &samples);
    writer.close();
    log << "run: wrote " << records.size() << " records to "
        << cfg.output.metrics << " (final cost "
        << records.back().cost_unreg << ")\n";

    if (cfg.output.plot) {
      emit_plot_from_files({cfg.output.metrics}, *cfg.output.plot);
      log << "run: wrote plot " << *cfg.output.plot << "\n";
    }
    return kExitOk;
  });
}

int cmd_compare(const RunConfig& cfg, std::ostream& log) {
  return guard(log, [&]() {
    if (cfg.compare.empty()) {
      throw ConfigError("compare: config has no 'compare' entries");
    }
    const SparseWeightedMatrix data = load_problem_data(cfg);
    Rng rng(cfg.run.seed);
    const ProductPoint init =
        make_initial_point(data, cfg.problem.k, rng);

    // One sample sequence drawn up front and replayed by every arm, so the
    // schedules see identical stochasticity.
    const SamplingTable table(data);
    std::vector<EntrySample> samples;
    samples.reserve(static_cast<std::size_t>(cfg.run.iterations));
    for (std::int64_t i = 0; i < cfg.run.iterations; ++i) {
      samples.push_back(sample_entry(data, table, rng));
    }

    int worst = kExitOk;
    std::map<std::string, PlotPanel> panels;
    std::vector<std::string> panel_order;
    for (const CompareEntry& entry : cfg.compare) {
      const int code = guard(log, [&]() {
        const PreparedRun pr = prepare(
            data, merged_confinement(cfg.confinement, entry),
            merged_schedule(cfg.schedule, entry), cfg.problem.k,
            init.x.squaredNorm());
        log << "compare[" << entry.name << "]:\n";
        log_params(log, pr.params);
        const RunOptions opts{cfg.run.iterations, cfg.run.eval_every,
                              cfg.run.seed};
        const std::string path =
            compare_metrics_path(cfg.output.metrics, entry.name);
        MetricsWriter writer(
            path, make_metrics_meta(pr.params, pr.schedule, data, opts));
        const MetricsSink sink = writer.sink();
        const std::vector<MetricsRecord> records =
            run(data, pr.params, pr.schedule, init, opts, &sink, &samples);
        writer.close();
        log << "compare[" << entry.name << "]: wrote " << path
            << " (final cost " << records.back().cost_unreg << ")\n";

        const std::string panel_name =
            entry.panel.value_or(std::string("comparison"));
        if (!panels.count(panel_name)) {
          panels[panel_name] = PlotPanel{panel_name, {}};
          panel_order.push_back(panel_name);
        }
        panels[panel_name].series.push_back(
            series_from_metrics(read_metrics(path), entry.name));
        return kExitOk;
      });
      worst = std::max(worst, code);
    }

    if (cfg.output.plot && !panels.empty()) {
      std::vector<PlotPanel> ordered;
      for (const std::string& name : panel_order) {
        ordered.push_back(panels[name]);
      }
      emit_plot(ordered, *cfg.output.plot);
      log << "compare: wrote plot " << *cfg.output.plot << "\n";
    }
    return worst;
  });
}

int cmd_check(const CheckOptions& opts, std::ostream& log) {
  return guard(log, [&]() {
    DiagnosticsConfig cfg;
    cfg.seed = opts.seed;
    cfg.mutation = opts.mutation;
    if (opts.trials) {
      cfg.gradient_trials = *opts.trials;
      cfg.expectation_trials = *opts.trials;
      cfg.hessian_trials = *opts.trials;
      cfg.annulus_trials = *opts.trials;
      cfg.retraction_trials = *opts.trials;
    }
    const std::vector<CheckReport> reports = run_all(cfg);
    print_reports(log, reports);
    if (opts.report_path) {
      nlohmann::json j = nlohmann::json::array();
      for (const CheckReport& r : reports) {
        j.push_back({{"name", r.name},
                     {"instances", r.instances},
                     {"max_rel_err", r.max_rel_err},
                     {"threshold", r.threshold},
                     {"pass", r.pass},
                     {"worst_case", r.worst_case}});
      }
      std::ofstream out(*opts.report_path);
      if (!out) {
        throw IoError("cmd_check: cannot open " + *opts.report_path);
      }
      out << j.dump(2) << "\n";
    }
    return all_pass(reports) ? kExitOk : kExitFailure;
  });
}

int cmd_generate(const SyntheticSpec& spec, const std::string& out_path,
                 std::ostream& log) {
  return guard(log, [&]() {
    const SparseWeightedMatrix data = generate_synthetic(spec);
    emit_csv(data, out_path);
    log << "generate: wrote " << data.size() << " entries of a "
        << data.rows() << "x" << data.cols() << " matrix to " << out_path
        << "\n";
    return kExitOk;
  });
}

int cmd_plot(const std::vector<std::string>& metrics_paths,
             const std::string& out_path, std::ostream& log) {
  return guard(log, [&]() {
    emit_plot_from_files(metrics_paths, out_path);
    log << "plot: wrote " << out_path << "\n";
    return kExitOk;
  });
}

}  // namespace adasgd
