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

#include <gtest/gtest.h>

#include <sstream>

namespace adasgd {
namespace {

TEST(GradientFd, PassesAndIsDeterministic) {
  const CheckReport a = check_gradient_fd(123, 50);
  EXPECT_TRUE(a.pass);
  EXPECT_EQ(a.instances, 50);
  EXPECT_LE(a.max_rel_err, 1e-6);
  const CheckReport b = check_gradient_fd(123, 50);
  EXPECT_EQ(a.max_rel_err, b.max_rel_err);
  EXPECT_EQ(a.worst_case, b.worst_case);
}

TEST(GradientFd, ZeroInstancePassesTrivially) {
  // lambda = 0 and residual zero: both sides of the comparison vanish. The
  // scalar manifold makes the tangent spaces {0}, so the only contribution
  // is the x-slot with zero residual.
  ProductPoint p;
  p.u = StiefelPoint(Eigen::MatrixXd::Ones(1, 1));
  p.v = StiefelPoint(Eigen::MatrixXd::Ones(1, 1));
  p.x = Eigen::VectorXd::Constant(1, 0.5);
  std::vector<WeightedEntry> entries = {{0, 0, 0.5, 1.0}};
  const SparseWeightedMatrix data(1, 1, std::move(entries));
  const ProductTangent g =
      stochastic_gradient(p, EntrySample{0, 0}, data, 0.0);
  EXPECT_DOUBLE_EQ(norm_sq(p, g), 0.0);
}

TEST(GradientFd, SignFlipMutationFailsWithRelErrNearTwo) {
  const CheckReport report =
      check_gradient_fd(123, 50, Mutation::kFlipGradientSignX);
  EXPECT_FALSE(report.pass);
  EXPECT_GT(report.max_rel_err, 1.5);
  EXPECT_LT(report.max_rel_err, 2.5);
}

TEST(GradientFd, ScalarSignFlipIsExactlyTwo) {
  // On V_1(R^1) x R x V_1(R^1) the whole gradient lives in the x-slot, so
  // flipping it doubles the disagreement relative to the true derivative.
  ProductPoint p;
  p.u = StiefelPoint(Eigen::MatrixXd::Ones(1, 1));
  p.v = StiefelPoint(Eigen::MatrixXd::Ones(1, 1));
  p.x = Eigen::VectorXd::Constant(1, 0.5);
  std::vector<WeightedEntry> entries = {{0, 0, 2.0, 1.0}};
  const SparseWeightedMatrix data(1, 1, std::move(entries));
  ProductTangent g = stochastic_gradient(p, EntrySample{0, 0}, data, 0.0);
  ProductTangent v = ProductTangent::zero(p);
  v.xhat(0) = 1.0;
  const double truth = inner(p, g, v);
  g.xhat = -g.xhat;
  const double flipped = inner(p, g, v);
  EXPECT_NEAR(std::abs(flipped - truth) / std::abs(truth), 2.0, 1e-12);
}

TEST(Expectation, PassesOnRandomInstances) {
  const CheckReport report = check_expectation(7, 20);
  EXPECT_TRUE(report.pass);
  EXPECT_LE(report.max_rel_err, 1e-12);
}

TEST(Expectation, PermutedWeightsChangeTheExpectation) {
  Rng rng(8);
  const RandomWlra inst = random_wlra_instance(rng, 6, 2, 0.0);
  // Recompute the weighted cost with weights rotated one slot; unless the
  // instance is degenerate the value must move.
  const auto& entries = inst.data.entries();
  double base = 0.0, rotated = 0.0;
  for (std::size_t idx = 0; idx < entries.size(); ++idx) {
    const WeightedEntry& e = entries[idx];
    const WeightedEntry& w = entries[(idx + 1) % entries.size()];
    const double r = e.value - entry_value(inst.point, e.i, e.j);
    base += e.weight * r * r;
    rotated += w.weight * r * r;
  }
  EXPECT_GT(std::abs(base - rotated), 1e-12);
}

TEST(HessianIdentity, PassesOnRandomInstances) {
  const CheckReport report = check_hessian_identity(9, 1000);
  EXPECT_TRUE(report.pass);
}

TEST(ConfinementAnnulusCheck, MutatedKappaFindsViolations) {
  const ConfinementParams tight = derive_confinement(
      0.05, 2, 1.0, 1e-4 * kappa_upper_bound(0.05, 2), 1.0, 0.25, 0.0);
  const CheckReport good = check_confinement_annulus(tight, 10, 1000);
  EXPECT_TRUE(good.pass);
  const CheckReport bad =
      check_confinement_annulus(tight, 10, 1000, Mutation::kInflateKappa);
  EXPECT_FALSE(bad.pass);
  EXPECT_FALSE(bad.worst_case.empty());
}

TEST(RetractionAxioms, Passes) {
  const CheckReport report = check_retraction_axioms(11, 50);
  EXPECT_TRUE(report.pass);
  EXPECT_LE(report.max_rel_err, 1e-6);
}

TEST(RunAll, DefaultConfigAllPass) {
  DiagnosticsConfig cfg;
  cfg.gradient_trials = 25;
  cfg.expectation_trials = 10;
  cfg.hessian_trials = 200;
  cfg.annulus_trials = 200;
  cfg.retraction_trials = 20;
  const auto reports = run_all(cfg);
  EXPECT_EQ(reports.size(), 6u);  // annulus runs two parameter bundles
  EXPECT_TRUE(all_pass(reports));
}

TEST(RunAll, EmptySelectionIsVacuousPassWithWarning) {
  DiagnosticsConfig cfg;
  cfg.gradient_trials = 0;
  cfg.expectation_trials = 0;
  cfg.hessian_trials = 0;
  cfg.annulus_trials = 0;
  cfg.retraction_trials = 0;
  const auto reports = run_all(cfg);
  EXPECT_TRUE(reports.empty());
  EXPECT_TRUE(all_pass(reports));
  std::ostringstream os;
  print_reports(os, reports);
  EXPECT_NE(os.str().find("warning"), std::string::npos);
}

TEST(RunAll, FailureReproductionIsStable) {
  DiagnosticsConfig cfg;
  cfg.mutation = Mutation::kFlipGradientSignX;
  cfg.expectation_trials = 0;
  cfg.hessian_trials = 0;
  cfg.annulus_trials = 0;
  cfg.retraction_trials = 0;
  const auto a = run_all(cfg);
  const auto b = run_all(cfg);
  ASSERT_EQ(a.size(), 1u);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_FALSE(a[0].pass);
  EXPECT_EQ(a[0].worst_case, b[0].worst_case);
  EXPECT_EQ(a[0].max_rel_err, b[0].max_rel_err);
}

TEST(PrintReports, TableHasOneRowPerCheck) {
  DiagnosticsConfig cfg;
  cfg.gradient_trials = 5;
  cfg.expectation_trials = 5;
  cfg.hessian_trials = 5;
  cfg.annulus_trials = 5;
  cfg.retraction_trials = 5;
  const auto reports = run_all(cfg);
  std::ostringstream os;
  print_reports(os, reports);
  const std::string text = os.str();
  std::size_t rows = 0;
  for (std::size_t pos = text.find('\n'); pos != std::string::npos;
       pos = text.find('\n', pos + 1)) {
    ++rows;
  }
  EXPECT_EQ(rows, reports.size() + 1);  // header + one per check
  EXPECT_NE(text.find("pass"), std::string::npos);
}

}  // namespace
}  // namespace adasgd
