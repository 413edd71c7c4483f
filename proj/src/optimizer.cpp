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

#include "adasgd/optimizer.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace adasgd {

namespace {

constexpr double kEtaSlack = 1e-12;      // relative, for monotonicity checks
constexpr double kSeriesSlack = 1e-9;    // relative, for the series bound

std::string describe(const ConfinementParams& p) {
  std::ostringstream os;
  os << "lambda=" << p.lambda << " k=" << p.k << " a=" << p.a
     << " kappa=" << p.kappa << " rho0=" << p.rho0 << " rho1=" << p.rho1
     << " alpha=" << p.alpha << " epsilon=" << p.epsilon << " beta=" << p.beta;
  return os.str();
}

void check_iterate(const ProductPoint& point, const ConfinementParams& params,
                   std::int64_t t) {
  if (!check_confined(point, params)) {
    std::ostringstream os;
    os << "confinement violated at t=" << t << ": rho=" << rho(point)
       << " > rho1=" << params.rho1 << " (" << describe(params) << ")";
    throw InvariantViolation(os.str());
  }
  const double du = orthonormality_defect(point.u.m);
  const double dv = orthonormality_defect(point.v.m);
  if (du > kOrthTol || dv > kOrthTol) {
    std::ostringstream os;
    os << "orthonormality lost at t=" << t << ": U defect " << du
       << ", V defect " << dv;
    throw InvariantViolation(os.str());
  }
}

}  // namespace

Schedule Schedule::adaptive(const ConfinementParams& params) {
  Schedule s;
  s.mode = Mode::kAdaptive;
  s.alpha = params.alpha;
  s.beta = params.beta;
  s.epsilon = params.epsilon;
  return s;
}

Schedule Schedule::deterministic(double eta0, double decay) {
  if (!(eta0 > 0.0) || !(decay > 0.0)) {
    throw ParameterError("Schedule::deterministic: needs eta0, decay > 0");
  }
  Schedule s;
  s.mode = Mode::kDeterministic;
  s.eta0 = eta0;
  s.decay = decay;
  return s;
}

double deterministic_eta(std::int64_t t, double eta0, double decay) {
  return eta0 * decay / (decay + static_cast<double>(t));
}

double adaptive_eta(const Schedule& schedule, double grad_sq_accum) {
  return schedule.alpha /
         std::pow(schedule.beta + grad_sq_accum, 0.5 + schedule.epsilon);
}

double schedule_eta(const Schedule& schedule, std::int64_t t,
                    double grad_sq_accum) {
  return schedule.mode == Schedule::Mode::kAdaptive
             ? adaptive_eta(schedule, grad_sq_accum)
             : deterministic_eta(t, schedule.eta0, schedule.decay);
}

OptimizerState make_state(ProductPoint init, const Schedule& schedule,
                          std::uint64_t seed) {
  OptimizerState st;
  st.point = std::move(init);
  st.rng.seed(seed);
  st.eta = schedule_eta(schedule, 0, 0.0);
  return st;
}

ProductPoint make_initial_point(const SparseWeightedMatrix& data, int k,
                                Rng& rng) {
  ProductPoint p;
  p.u = random_stiefel(data.rows(), k, rng);
  p.v = random_stiefel(data.cols(), k, rng);
  double mean_sq = 0.0;
  for (const WeightedEntry& e : data.entries()) {
    mean_sq += e.weight * e.value * e.value;
  }
  const double scale = std::sqrt(static_cast<double>(data.rows()) *
                                 static_cast<double>(data.cols()) * mean_sq /
                                 static_cast<double>(k));
  p.x = Eigen::VectorXd::Constant(k, scale);
  return p;
}

MetricsRecord step(OptimizerState& state, const SparseWeightedMatrix& data,
                   const ConfinementParams& params, const Schedule& schedule,
                   const SampleFn& draw) {
  check_iterate(state.point, params, state.t);

  const EntrySample s = draw(state.rng);
  ProductTangent g =
      stochastic_gradient(state.point, s, data, params.lambda);
  const double grad_sq = norm_sq(state.point, g);

  const double eta = state.eta;
  if (eta > params.kappa * (1.0 + kEtaSlack)) {
    std::ostringstream os;
    os << "learning rate " << eta << " exceeds kappa = " << params.kappa;
    throw InvariantViolation(os.str());
  }

  g.y.m *= -eta;
  g.xhat *= -eta;
  g.z.m *= -eta;
  state.point = retract(state.point, g);
  state.grad_sq_accum += grad_sq;
  state.t += 1;

  const double next_eta =
      schedule_eta(schedule, state.t, state.grad_sq_accum);
  if (next_eta > state.eta * (1.0 + kEtaSlack)) {
    std::ostringstream os;
    os << "learning rate increased from " << state.eta << " to " << next_eta
       << " at t=" << state.t;
    throw InvariantViolation(os.str());
  }
  state.eta = next_eta;

  if (schedule.mode == Schedule::Mode::kAdaptive) {
    // sum_t eta_{t+1}^2 ||grad g_t||^2 stays below
    // alpha^2 / (2 epsilon beta^(2 epsilon)).
    state.shifted_series_sum += next_eta * next_eta * grad_sq;
    const double cap =
        schedule.alpha * schedule.alpha /
        (2.0 * schedule.epsilon *
         std::pow(schedule.beta, 2.0 * schedule.epsilon));
    if (state.shifted_series_sum > cap * (1.0 + kSeriesSlack)) {
      std::ostringstream os;
      os << "adaptive series bound violated at t=" << state.t << ": "
         << state.shifted_series_sum << " > " << cap;
      throw InvariantViolation(os.str());
    }
  }

  check_iterate(state.point, params, state.t);

  MetricsRecord rec;
  rec.t = state.t;
  rec.eta = state.eta;
  rec.cost_unreg = std::numeric_limits<double>::quiet_NaN();
  rec.cost_reg = std::numeric_limits<double>::quiet_NaN();
  rec.rho_val = rho(state.point);
  rec.grad_norm_sq = grad_sq;
  rec.accum = state.grad_sq_accum;
  return rec;
}

std::vector<MetricsRecord> run(const SparseWeightedMatrix& data,
                               const ConfinementParams& params,
                               const Schedule& schedule,
                               const ProductPoint& init,
                               const RunOptions& opts,
                               const MetricsSink* sink,
                               const std::vector<EntrySample>* fixed_samples) {
  if (opts.iterations < 1) {
    throw ParameterError("run: iterations must be >= 1");
  }
  if (opts.eval_every < 1) {
    throw ParameterError("run: eval_every must be >= 1");
  }
  const double eta0 = schedule_eta(schedule, 0, 0.0);
  if (eta0 > params.kappa * (1.0 + kEtaSlack)) {
    std::ostringstream os;
    os << "run: initial learning rate " << eta0 << " exceeds kappa = "
       << params.kappa;
    throw ParameterError(os.str());
  }
  if (fixed_samples != nullptr &&
      static_cast<std::int64_t>(fixed_samples->size()) < opts.iterations) {
    throw ParameterError("run: fixed sample sequence shorter than the run");
  }

  const SamplingTable table(data);
  OptimizerState state = make_state(init, schedule, opts.seed);

  std::int64_t replay_pos = 0;
  const SampleFn draw = [&](Rng& rng) -> EntrySample {
    if (fixed_samples != nullptr) {
      return (*fixed_samples)[static_cast<std::size_t>(replay_pos++)];
    }
    return sample_entry(data, table, rng);
  };

  std::vector<MetricsRecord> records;
  records.reserve(static_cast<std::size_t>(opts.iterations) + 1);

  const auto emit = [&](const MetricsRecord& rec) {
    records.push_back(rec);
    if (sink != nullptr) (*sink)(rec);
  };

  MetricsRecord baseline;
  baseline.t = 0;
  baseline.eta = state.eta;
  baseline.cost_unreg = cost_unregularized(state.point, data);
  baseline.cost_reg =
      baseline.cost_unreg + params.lambda * state.point.x.squaredNorm();
  baseline.rho_val = rho(state.point);
  baseline.grad_norm_sq = 0.0;
  baseline.accum = 0.0;
  emit(baseline);

  double last_cost_unreg = baseline.cost_unreg;
  double last_cost_reg = baseline.cost_reg;
  for (std::int64_t i = 0; i < opts.iterations; ++i) {
    MetricsRecord rec = step(state, data, params, schedule, draw);
    if (rec.t % opts.eval_every == 0 || rec.t == opts.iterations) {
      last_cost_unreg = cost_unregularized(state.point, data);
      last_cost_reg =
          last_cost_unreg + params.lambda * state.point.x.squaredNorm();
    }
    rec.cost_unreg = last_cost_unreg;
    rec.cost_reg = last_cost_reg;
    emit(rec);
  }
  return records;
}

}  // namespace adasgd
