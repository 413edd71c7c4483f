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

#include "adasgd/diagnostics.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace adasgd {

namespace {

// Guarded relative error: relative above the floor, absolute below it. Keeps
// near-zero comparisons meaningful while staying strict on O(1) quantities.
double guarded_rel(double got, double want, double floor) {
  return std::abs(got - want) /
         std::max({std::abs(got), std::abs(want), floor});
}

std::string instance_tag(std::uint64_t seed, int trial,
                         const RandomWlra& inst) {
  std::ostringstream os;
  os << "seed=" << seed << " trial=" << trial << " m=" << inst.data.rows()
     << " n=" << inst.data.cols() << " k=" << inst.point.k()
     << " lambda=" << inst.lambda;
  return os.str();
}

void track_worst(CheckReport& report, double err, const std::string& tag) {
  if (err > report.max_rel_err) {
    report.max_rel_err = err;
    report.worst_case = tag;
  }
}

// Per-sample cost g(U, x, V) = (a - p_e)^2 + lambda ||x||^2.
double sample_cost(const ProductPoint& p, const EntrySample& s,
                   const SparseWeightedMatrix& data, double lambda) {
  const WeightedEntry* e = data.find(s.tau, s.gamma);
  const double r = e->value - entry_value(p, s.tau, s.gamma);
  return r * r + lambda * p.x.squaredNorm();
}

ProductTangent scaled(const ProductTangent& v, double c) {
  ProductTangent out;
  out.y.m = c * v.y.m;
  out.xhat = c * v.xhat;
  out.z.m = c * v.z.m;
  return out;
}

}  // namespace

RandomWlra random_wlra_instance(Rng& rng, int max_dim, int max_k,
                                double lambda, double value_scale) {
  std::uniform_int_distribution<int> dim(2, max_dim);
  const int m = dim(rng);
  const int n = dim(rng);
  std::uniform_int_distribution<int> rank(1, std::min({max_k, m, n}));
  const int k = rank(rng);

  // Observe a random nonempty subset; weights are exponential draws
  // normalized to a probability vector, so non-uniform measures get
  // exercised too.
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  std::vector<WeightedEntry> entries;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      if (unit(rng) < 0.7) {
        WeightedEntry e;
        e.i = i;
        e.j = j;
        e.value = value_scale * (2.0 * unit(rng) - 1.0);
        e.weight = expo(rng) + 1e-3;
        entries.push_back(e);
      }
    }
  }
  if (entries.empty()) {
    WeightedEntry e;
    e.i = 0;
    e.j = 0;
    e.value = value_scale;
    e.weight = 1.0;
    entries.push_back(e);
  }
  double total = 0.0;
  for (const WeightedEntry& e : entries) total += e.weight;
  for (WeightedEntry& e : entries) e.weight /= total;

  ProductPoint p;
  p.u = random_stiefel(m, k, rng);
  p.v = random_stiefel(n, k, rng);
  std::normal_distribution<double> gauss(0.0, 2.0);
  p.x = Eigen::VectorXd::NullaryExpr(k, [&](Eigen::Index) {
    return gauss(rng);
  });
  return RandomWlra{SparseWeightedMatrix(m, n, std::move(entries)),
                    std::move(p), lambda};
}

EntrySample random_observed(const SparseWeightedMatrix& data, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);
  const WeightedEntry& e = data.entries()[pick(rng)];
  return EntrySample{e.i, e.j};
}

ProductTangent random_unit_tangent(const ProductPoint& p, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto noise = [&](Eigen::Index rows, Eigen::Index cols) {
    return Eigen::MatrixXd::NullaryExpr(rows, cols, [&](Eigen::Index,
                                                        Eigen::Index) {
      return gauss(rng);
    });
  };
  ProductTangent v;
  v.y = project_tangent(p.u, noise(p.u.rows(), p.u.cols()));
  v.z = project_tangent(p.v, noise(p.v.rows(), p.v.cols()));
  v.xhat = Eigen::VectorXd::NullaryExpr(p.k(), [&](Eigen::Index) {
    return gauss(rng);
  });
  const double len = std::sqrt(norm_sq(p, v));
  if (len > 0.0) return scaled(v, 1.0 / len);
  return v;
}

CheckReport check_gradient_fd(std::uint64_t seed, int trials,
                              Mutation mutation) {
  CheckReport report;
  report.name = mutation == Mutation::kFlipGradientSignX
                    ? "gradient_fd[mutated]"
                    : "gradient_fd";
  report.threshold = 1e-6;
  report.instances = trials;
  Rng rng(seed);
  const double h = 1e-5;
  for (int trial = 0; trial < trials; ++trial) {
    const double lambda = (trial % 2 == 0) ? 0.0 : 1e-2;
    RandomWlra inst = random_wlra_instance(rng, 8, 3, lambda);
    const EntrySample s = random_observed(inst.data, rng);
    const ProductTangent v = random_unit_tangent(inst.point, rng);

    ProductTangent g =
        stochastic_gradient(inst.point, s, inst.data, inst.lambda);
    if (mutation == Mutation::kFlipGradientSignX) {
      g.xhat = -g.xhat;
    }
    const double analytic = inner(inst.point, g, v);
    const double fd =
        (sample_cost(retract(inst.point, scaled(v, h)), s, inst.data,
                     inst.lambda) -
         sample_cost(retract(inst.point, scaled(v, -h)), s, inst.data,
                     inst.lambda)) /
        (2.0 * h);
    track_worst(report, guarded_rel(fd, analytic, 1e-2),
                instance_tag(seed, trial, inst));
  }
  report.pass = report.max_rel_err <= report.threshold;
  return report;
}

CheckReport check_expectation(std::uint64_t seed, int trials) {
  CheckReport report;
  report.name = "expectation_identity";
  report.threshold = 1e-12;
  report.instances = trials;
  Rng rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    const double lambda = (trial % 2 == 0) ? 0.0 : 1e-2;
    RandomWlra inst = random_wlra_instance(rng, 8, 3, lambda);

    double cost_sum = 0.0;
    ProductTangent grad_sum = ProductTangent::zero(inst.point);
    for (const WeightedEntry& e : inst.data.entries()) {
      const EntrySample s{e.i, e.j};
      cost_sum += e.weight * sample_cost(inst.point, s, inst.data, lambda);
      const ProductTangent g =
          stochastic_gradient(inst.point, s, inst.data, lambda);
      grad_sum.y.m += e.weight * g.y.m;
      grad_sum.xhat += e.weight * g.xhat;
      grad_sum.z.m += e.weight * g.z.m;
    }
    const double cost = cost_regularized(inst.point, inst.data, lambda);
    const std::string tag = instance_tag(seed, trial, inst);
    track_worst(report, guarded_rel(cost_sum, cost, 1e-6), tag);

    const ProductTangent full = full_gradient(inst.point, inst.data, lambda);
    ProductTangent diff;
    diff.y.m = grad_sum.y.m - full.y.m;
    diff.xhat = grad_sum.xhat - full.xhat;
    diff.z.m = grad_sum.z.m - full.z.m;
    const double scale = std::sqrt(
        std::max({norm_sq(inst.point, grad_sum), norm_sq(inst.point, full),
                  1e-12}));
    track_worst(report,
                std::sqrt(norm_sq(inst.point, diff)) / scale, tag);
  }
  report.pass = report.max_rel_err <= report.threshold;
  return report;
}

CheckReport check_hessian_identity(std::uint64_t seed, int trials) {
  CheckReport report;
  report.name = "hessian_identity";
  report.threshold = 1e-12;
  report.instances = trials;
  Rng rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    const double lambda = (trial % 3 == 0) ? 0.0 : 5e-2;
    RandomWlra inst = random_wlra_instance(rng, 8, 3, lambda);
    const EntrySample s = random_observed(inst.data, rng);
    const std::string tag = instance_tag(seed, trial, inst);

    const double hess =
        hessian_quadratic_form(inst.point, s, inst.data, lambda);
    const ProductTangent g =
        stochastic_gradient(inst.point, s, inst.data, lambda);
    const double via_gradient = 2.0 * g.xhat.squaredNorm();
    track_worst(report, guarded_rel(hess, via_gradient, 1e-9), tag);

    const double a = max_squared_entry(inst.data);
    const double xsq = inst.point.x.squaredNorm();
    const double bound =
        16.0 * (2.0 * inst.point.k() * a + 2.0 * inst.point.k() * xsq +
                lambda * lambda * xsq);
    if (hess > bound * (1.0 + 1e-12)) {
      track_worst(report, guarded_rel(hess, bound, 1e-9), tag + " [bound]");
    }
  }
  report.pass = report.max_rel_err <= report.threshold;
  return report;
}

namespace {

// Data whose max squared entry is exactly params.a, for exercising the
// confinement inequalities at their worst case.
SparseWeightedMatrix annulus_data(const ConfinementParams& params, int m,
                                  int n, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double amax = std::sqrt(params.a);
  std::vector<WeightedEntry> entries;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      WeightedEntry e;
      e.i = i;
      e.j = j;
      // First entry pinned at the extreme value; the rest uniform in range.
      e.value = (i == 0 && j == 0)
                    ? amax
                    : amax * (2.0 * unit(rng) - 1.0);
      e.weight = 1.0;
      entries.push_back(e);
    }
  }
  for (WeightedEntry& e : entries) e.weight /= static_cast<double>(m * n);
  return SparseWeightedMatrix(m, n, std::move(entries));
}

// Point with ||x||^2 = rho_target whose sampled entry value is a/2 --
// the configuration that minimizes the pairing while keeping the Hessian
// form large. Requires k >= 2.
ProductPoint stress_point(const ConfinementParams& params, int m, int n,
                          int tau, int gamma, double rho_target,
                          double entry_value_at_sample) {
  const int k = params.k;
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(m, k);
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, k);
  // Column 1 concentrated on the sampled row/column; the rest on other rows.
  u(tau, 0) = 1.0;
  v(gamma, 0) = 1.0;
  for (int l = 1; l < k; ++l) {
    u((tau + l) % m, l) = 1.0;
    v((gamma + l) % n, l) = 1.0;
  }
  ProductPoint p;
  p.u = StiefelPoint::unchecked(std::move(u));
  p.v = StiefelPoint::unchecked(std::move(v));
  p.x = Eigen::VectorXd::Zero(k);
  p.x(0) = entry_value_at_sample / 2.0;  // p_(tau,gamma) = a_e / 2
  const double rest = rho_target - p.x(0) * p.x(0);
  if (rest > 0.0) p.x(1) = std::sqrt(rest);
  return p;
}

}  // namespace

CheckReport check_confinement_annulus(const ConfinementParams& params,
                                      std::uint64_t seed, int trials,
                                      Mutation mutation) {
  CheckReport report;
  report.name = mutation == Mutation::kInflateKappa
                    ? "confinement_annulus[mutated]"
                    : "confinement_annulus";
  report.threshold = 0.0;
  report.instances = trials;
  Rng rng(seed);

  const int m = 6;
  const int n = 5;
  const SparseWeightedMatrix data = annulus_data(params, m, n, rng);
  const double kappa_used =
      mutation == Mutation::kInflateKappa
          ? 2.0 * kappa_upper_bound(params.lambda, params.k)
          : params.kappa;

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> row(0, m - 1);
  std::uniform_int_distribution<int> col(0, n - 1);

  for (int trial = 0; trial < trials; ++trial) {
    ProductPoint p;
    EntrySample s{};
    if (params.k >= 2 && trial % 2 == 0) {
      s = EntrySample{0, 0};  // the extreme-valued entry
      const double rho_target =
          params.rho0 +
          (std::min(params.rho1, 1.2 * params.rho0) - params.rho0) *
              unit(rng);
      p = stress_point(params, m, n, s.tau, s.gamma, rho_target,
                       std::sqrt(params.a));
    } else {
      s = EntrySample{row(rng), col(rng)};
      p.u = random_stiefel(m, params.k, rng);
      p.v = random_stiefel(n, params.k, rng);
      const double rho_target =
          params.rho0 + (params.rho1 - params.rho0) * unit(rng);
      Eigen::VectorXd dir = random_unit_tangent(
                                ProductPoint{p.u,
                                             Eigen::VectorXd::Zero(params.k),
                                             p.v},
                                rng)
                                .xhat;
      if (dir.norm() == 0.0) dir = Eigen::VectorXd::Unit(params.k, 0);
      p.x = std::sqrt(rho_target) * dir / dir.norm();
    }

    const double pairing =
        confinement_pairing(p, s, data, params.lambda);
    const double hess =
        hessian_quadratic_form(p, s, data, params.lambda);
    const double rhs = 0.5 * kappa_used * std::abs(hess);
    if (pairing < rhs) {
      std::ostringstream os;
      os << "seed=" << seed << " trial=" << trial << " pairing=" << pairing
         << " rhs=" << rhs << " rho=" << rho(p);
      track_worst(report, guarded_rel(pairing, rhs, 1e-12), os.str());
    }

    // One-step escape bound from inside the inner level set.
    EntrySample s2{row(rng), col(rng)};
    ProductPoint q;
    q.u = random_stiefel(m, params.k, rng);
    q.v = random_stiefel(n, params.k, rng);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd dir = Eigen::VectorXd::NullaryExpr(
        params.k, [&](Eigen::Index) { return gauss(rng); });
    if (dir.norm() == 0.0) dir = Eigen::VectorXd::Unit(params.k, 0);
    q.x = std::sqrt(params.rho0 * unit(rng)) * dir / dir.norm();
    const ProductTangent g =
        stochastic_gradient(q, s2, data, params.lambda);
    for (int step_idx = 0; step_idx <= 5; ++step_idx) {
      const double step_size = params.kappa * step_idx / 5.0;
      const double reached = rho(retract(q, scaled(g, -step_size)));
      if (reached > params.rho1 * (1.0 + 1e-12) + kConfinementSlack) {
        std::ostringstream os;
        os << "seed=" << seed << " trial=" << trial << " s=" << step_size
           << " escaped to rho=" << reached;
        track_worst(report, guarded_rel(reached, params.rho1, 1e-12),
                    os.str());
      }
    }
  }
  report.pass = report.max_rel_err <= report.threshold;
  return report;
}

CheckReport check_retraction_axioms(std::uint64_t seed, int trials) {
  CheckReport report;
  report.name = "retraction_axioms";
  report.threshold = 1e-6;
  report.instances = trials;
  Rng rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    RandomWlra inst = random_wlra_instance(rng, 8, 3, 0.0);
    const ProductPoint& p = inst.point;
    const std::string tag = instance_tag(seed, trial, inst);

    // R_p(0) = p.
    const ProductPoint at_zero = retract(p, ProductTangent::zero(p));
    const double zero_defect =
        std::max({(at_zero.u.m - p.u.m).cwiseAbs().maxCoeff(),
                  (at_zero.x - p.x).cwiseAbs().maxCoeff(),
                  (at_zero.v.m - p.v.m).cwiseAbs().maxCoeff()});
    if (zero_defect > 1e-12) {
      track_worst(report, zero_defect, tag + " [zero]");
    }

    // dR_p(0) = id, via Richardson-extrapolated central differences.
    const ProductTangent v = random_unit_tangent(p, rng);
    const double h = 1e-3;
    const auto central = [&](double step) {
      const ProductPoint plus = retract(p, scaled(v, step));
      const ProductPoint minus = retract(p, scaled(v, -step));
      ProductTangent d;
      d.y.m = (plus.u.m - minus.u.m) / (2.0 * step);
      d.xhat = (plus.x - minus.x) / (2.0 * step);
      d.z.m = (plus.v.m - minus.v.m) / (2.0 * step);
      return d;
    };
    const ProductTangent d1 = central(h);
    const ProductTangent d2 = central(h / 2.0);
    ProductTangent extrap;
    extrap.y.m = (4.0 * d2.y.m - d1.y.m) / 3.0;
    extrap.xhat = (4.0 * d2.xhat - d1.xhat) / 3.0;
    extrap.z.m = (4.0 * d2.z.m - d1.z.m) / 3.0;
    ProductTangent diff;
    diff.y.m = extrap.y.m - v.y.m;
    diff.xhat = extrap.xhat - v.xhat;
    diff.z.m = extrap.z.m - v.z.m;
    track_worst(report, std::sqrt(norm_sq(p, diff)), tag + " [differential]");
  }
  report.pass = report.max_rel_err <= report.threshold;
  return report;
}

std::vector<CheckReport> run_all(const DiagnosticsConfig& config) {
  std::vector<CheckReport> reports;
  if (config.gradient_trials > 0) {
    reports.push_back(check_gradient_fd(config.seed, config.gradient_trials,
                                        config.mutation));
  }
  if (config.expectation_trials > 0) {
    reports.push_back(
        check_expectation(config.seed + 1, config.expectation_trials));
  }
  if (config.hessian_trials > 0) {
    reports.push_back(
        check_hessian_identity(config.seed + 2, config.hessian_trials));
  }
  if (config.annulus_trials > 0) {
    // A deliberately small kappa leaves slack the mutated arm must break.
    const ConfinementParams tight = derive_confinement(
        /*lambda=*/0.05, /*k=*/2, /*a=*/1.0,
        1e-4 * kappa_upper_bound(0.05, 2), /*alpha=*/1.0, /*epsilon=*/0.25,
        /*x0_norm_sq=*/0.0);
    reports.push_back(check_confinement_annulus(
        tight, config.seed + 3, config.annulus_trials, config.mutation));
    const ConfinementParams loose = derive_confinement(
        /*lambda=*/0.5, /*k=*/3, /*a=*/4.0, std::nullopt, /*alpha=*/1.0,
        /*epsilon=*/0.5, /*x0_norm_sq=*/1.0);
    reports.push_back(check_confinement_annulus(loose, config.seed + 4,
                                                config.annulus_trials));
  }
  if (config.retraction_trials > 0) {
    reports.push_back(
        check_retraction_axioms(config.seed + 5, config.retraction_trials));
  }
  return reports;
}

bool all_pass(const std::vector<CheckReport>& reports) {
  for (const CheckReport& r : reports) {
    if (!r.pass) return false;
  }
  return true;
}

void print_reports(std::ostream& os, const std::vector<CheckReport>& reports) {
  if (reports.empty()) {
    os << "warning: no checks executed (vacuous pass)\n";
    return;
  }
  os << std::left << std::setw(32) << "check" << std::right << std::setw(10)
     << "instances" << std::setw(14) << "max rel err" << std::setw(12)
     << "threshold" << "  result\n";
  for (const CheckReport& r : reports) {
    os << std::left << std::setw(32) << r.name << std::right << std::setw(10)
       << r.instances << std::setw(14) << std::scientific
       << std::setprecision(3) << r.max_rel_err << std::setw(12)
       << r.threshold << "  " << (r.pass ? "pass" : "FAIL");
    if (!r.pass) {
      os << "  worst: " << r.worst_case;
    }
    os << "\n";
  }
  os.unsetf(std::ios::scientific);
}

}  // namespace adasgd
