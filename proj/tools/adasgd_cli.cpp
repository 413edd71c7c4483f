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

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "adasgd/commands.hpp"

namespace {

using adasgd::CliOverrides;
using adasgd::RunConfig;

// CLI11 stores into concrete objects; wrap the optional-override plumbing.
struct OverrideFlags {
  CliOverrides o;

  void attach(CLI::App* app) {
    app->add_option_function<std::string>(
        "--data", [this](const std::string& v) { o.data_path = v; },
        "data CSV path (replaces the config's problem source)");
    app->add_option_function<int>(
        "--k", [this](int v) { o.k = v; }, "factorization rank");
    app->add_option_function<double>(
        "--lambda", [this](double v) { o.lambda = v; },
        "regularization weight");
    app->add_option_function<double>(
        "--kappa", [this](double v) { o.kappa = v; }, "step-size cap");
    app->add_option_function<double>(
        "--alpha", [this](double v) { o.alpha = v; },
        "learning-rate numerator");
    app->add_option_function<double>(
        "--epsilon", [this](double v) { o.epsilon = v; },
        "learning-rate exponent offset");
    app->add_option_function<std::string>(
        "--mode", [this](const std::string& v) { o.mode = v; },
        "schedule mode: adaptive | deterministic");
    app->add_option_function<double>(
        "--K", [this](double v) { o.decay = v; },
        "deterministic decay constant");
    app->add_option_function<double>(
        "--eta0", [this](double v) { o.eta0 = v; },
        "deterministic initial rate (default kappa)");
    app->add_option_function<std::int64_t>(
        "--iterations", [this](std::int64_t v) { o.iterations = v; },
        "number of SGD steps");
    app->add_option_function<std::int64_t>(
        "--eval-every", [this](std::int64_t v) { o.eval_every = v; },
        "full-cost evaluation cadence");
    app->add_option_function<std::uint64_t>(
        "--seed", [this](std::uint64_t v) { o.seed = v; }, "run seed");
    app->add_option_function<std::string>(
        "--metrics", [this](const std::string& v) { o.metrics = v; },
        "metrics CSV output path");
    app->add_option_function<std::string>(
        "--plot", [this](const std::string& v) { o.plot = v; },
        "SVG plot output path");
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "adaptive-rate stochastic gradient descent on the Stiefel product "
      "manifold for weighted low-rank matrix approximation"};
  app.require_subcommand(1);

  std::string config_path;
  OverrideFlags run_flags, compare_flags;

  CLI::App* run_cmd = app.add_subcommand("run", "one optimization run");
  run_cmd->add_option("--config", config_path, "JSON run config")->required();
  run_flags.attach(run_cmd);

  CLI::App* compare_cmd = app.add_subcommand(
      "compare", "variance-matched schedule comparison with overlay plot");
  compare_cmd->add_option("--config", config_path, "JSON run config")
      ->required();
  compare_flags.attach(compare_cmd);

  CLI::App* check_cmd =
      app.add_subcommand("check", "numerical diagnostics suite");
  std::uint64_t check_seed = 20260809;
  int check_trials = -1;
  std::string mutate = "none";
  std::string report_path;
  check_cmd->add_option("--seed", check_seed, "diagnostics seed");
  check_cmd->add_option("--trials", check_trials,
                        "trial count for every check (0 skips all)");
  check_cmd->add_option("--mutate", mutate,
                        "corrupt a formula to demonstrate oracle "
                        "sensitivity: none | gradient | kappa");
  check_cmd->add_option("--report", report_path,
                        "machine-readable JSON report path");

  CLI::App* gen_cmd =
      app.add_subcommand("generate", "write a synthetic data CSV");
  adasgd::SyntheticSpec spec;
  std::string gen_out;
  std::vector<int> rating_range;
  gen_cmd->add_option("--m", spec.m, "rows")->required();
  gen_cmd->add_option("--n", spec.n, "columns")->required();
  gen_cmd->add_option("--true-rank", spec.true_rank, "planted rank")
      ->required();
  gen_cmd->add_option("--observed-fraction", spec.observed_fraction,
                      "fraction of entries observed");
  gen_cmd->add_option("--noise-std", spec.noise_std, "additive noise level");
  gen_cmd->add_option("--seed", spec.seed, "generator seed");
  gen_cmd->add_option("--rating-range", rating_range,
                      "clamp to integer ratings: lo hi")
      ->expected(2);
  gen_cmd->add_option("--out", gen_out, "output CSV path")->required();

  CLI::App* plot_cmd = app.add_subcommand("plot", "render metrics as SVG");
  std::vector<std::string> plot_inputs;
  std::string plot_out;
  plot_cmd->add_option("files", plot_inputs, "metrics CSV files")
      ->required()
      ->expected(-1);
  plot_cmd->add_option("--out", plot_out, "SVG output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      RunConfig cfg = adasgd::load_config(config_path);
      adasgd::apply_overrides(cfg, run_flags.o);
      return adasgd::cmd_run(cfg, std::cerr);
    }
    if (compare_cmd->parsed()) {
      RunConfig cfg = adasgd::load_config(config_path);
      adasgd::apply_overrides(cfg, compare_flags.o);
      return adasgd::cmd_compare(cfg, std::cerr);
    }
    if (check_cmd->parsed()) {
      adasgd::CheckOptions opts;
      opts.seed = check_seed;
      if (check_trials >= 0) opts.trials = check_trials;
      if (mutate == "gradient") {
        opts.mutation = adasgd::Mutation::kFlipGradientSignX;
      } else if (mutate == "kappa") {
        opts.mutation = adasgd::Mutation::kInflateKappa;
      } else if (mutate != "none") {
        std::cerr << "unknown --mutate value '" << mutate << "'\n";
        return adasgd::kExitParams;
      }
      if (!report_path.empty()) opts.report_path = report_path;
      return adasgd::cmd_check(opts, std::cout);
    }
    if (gen_cmd->parsed()) {
      if (!rating_range.empty()) {
        spec.rating_range = {rating_range[0], rating_range[1]};
      }
      return adasgd::cmd_generate(spec, gen_out, std::cerr);
    }
    if (plot_cmd->parsed()) {
      return adasgd::cmd_plot(plot_inputs, plot_out, std::cerr);
    }
  } catch (const adasgd::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return adasgd::kExitIo;
  } catch (const adasgd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return adasgd::kExitParams;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return adasgd::kExitFailure;
  }
  return adasgd::kExitFailure;
}
