/*
 * Copyright 2026 The sdrmap Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "sdrmap/errors.hpp"
#include "sdrmap/theory.hpp"
#include "test_models.hpp"

namespace sdrmap {
namespace {

using testing::random_mrf;
using testing::remark_mrf;

std::vector<Edge> complete(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.push_back({i, j});
  return e;
}

LiftedSolution vertex(const PairwiseMRF& mrf, const Assignment& a) {
  Eigen::VectorXd v(1 + mrf.layout().total());
  v << 1.0, to_indicator(mrf, a).x;
  return LiftedSolution::factored(v);
}

SolveOutput solve_dense(const PairwiseMRF& mrf) {
  SolverConfig c = SolverConfig::defaults(SolverKind::kSdpad);
  c.eps = 1e-7;
  c.k_max = 5000;
  return solve(SdrProblem::build(mrf), SolverKind::kSdpad, c);
}

TEST(AlgebraicConnectivity, KnownGraphs) {
  EXPECT_NEAR(algebraic_connectivity(5, complete(5)), 5.0, 1e-10);
  std::vector<Edge> path, cycle;
  for (int i = 0; i + 1 < 7; ++i) path.push_back({i, i + 1});
  cycle = path;
  cycle.push_back({0, 6});
  EXPECT_NEAR(algebraic_connectivity(7, path), 2 * (1 - std::cos(std::numbers::pi / 7)), 1e-10);
  EXPECT_NEAR(algebraic_connectivity(7, cycle), 2 * (1 - std::cos(2 * std::numbers::pi / 7)),
              1e-10);
  EXPECT_NEAR(algebraic_connectivity(4, {{0, 1}, {2, 3}}), 0.0, 1e-12);
  EXPECT_EQ(algebraic_connectivity(1, {}), 0.0);
}

TEST(RotationBound, Values) {
  EXPECT_NEAR(rotation_bound(3, 0.0), 0.75, 1e-15);
  EXPECT_NEAR(rotation_bound(2, 0.0), 0.8, 1e-15);
  EXPECT_NEAR(rotation_bound(1e9, 0.0), 2.0 / 3.0, 1e-9);
  EXPECT_EQ(rotation_bound(4, 1.0), 0.0);
  EXPECT_LT(rotation_bound(4, 0.1), rotation_bound(4, 0.05));
  EXPECT_THROW(rotation_bound(1, 0.0), ConfigError);
  EXPECT_THROW(rotation_bound(4, 1.5), ConfigError);
}

TEST(RotationCondition, Margin) {
  RotationSpec s;
  s.n = 50;
  s.m = 4;
  s.p_obs = 0.8;
  s.p_false = 0.3;
  const RecoveryCertificate c = rotation_condition(s, 0.05);
  EXPECT_NEAR(c.margin, rotation_bound(4, 0.05) - 0.3, 1e-15);
  EXPECT_EQ(c.scenario, RecoveryScenario::kRotation);
  s.p_false = 0.7;
  EXPECT_FALSE(rotation_condition(s).satisfied);
}

TEST(SamplingCondition, Threshold) {
  // 0.5 * 1 / 2 = 0.25 against log(200) / 100 ~ 0.053
  EXPECT_TRUE(sampling_ok(100, 2, 1.0, 0.5));
  EXPECT_FALSE(sampling_ok(100, 2, 1.0, 0.01));
  EXPECT_FALSE(sampling_ok(100, 2, 1.0, 0.5, 10.0));
}

TEST(LabelingCondition, NoiselessCompleteGraph) {
  LabelingSpec s;
  s.n = 6;
  s.m = 3;
  const RecoveryCertificate c = labeling_condition(gen_labeling(s));
  EXPECT_TRUE(c.satisfied);
  EXPECT_NEAR(c.details.at("lambda2"), 6.0, 1e-10);
  EXPECT_DOUBLE_EQ(c.details.at("d_inf"), 1.0);
  EXPECT_NEAR(c.margin, 4.0, 1e-10);
}

TEST(LabelingCondition, FalseEdgesRaiseDeviation) {
  LabelingSpec s;
  s.n = 8;
  s.m = 3;
  s.pairwise_error_rate = 0.5;
  s.seed = 3;
  const PlantedInstance inst = gen_labeling(s);
  ASSERT_FALSE(inst.false_edges.empty());
  const RecoveryCertificate c = labeling_condition(inst);
  EXPECT_NEAR(c.details.at("lambda2"), algebraic_connectivity(8, inst.true_edges), 1e-12);
  EXPECT_GE(c.details.at("d_inf"), 1.0);
}

TEST(Marginalization, HoldsAtVerticesAndOptima) {
  const PairwiseMRF mrf = random_mrf(5, 3, 0.7, 19);
  EXPECT_TRUE(check_marginalization(SdrProblem::build(mrf),
                                    vertex(mrf, Assignment{{0, 1, 0, 1, 0}}), 1e-12)
                  .passed);
  RotationSpec spec;
  spec.n = 8;
  spec.m = 3;
  spec.p_obs = 0.8;
  spec.p_false = 0.2;
  spec.seed = 6;
  const PlantedInstance inst = gen_rotation_sync(spec);
  const SdrProblem p = SdrProblem::build(inst.mrf);
  const SolveOutput out = solve_dense(inst.mrf);
  const MarginalizationReport r = check_marginalization(p, out.solution, 1e-4);
  EXPECT_TRUE(r.passed) << r.max_marginal_residual << " " << r.max_null_residual;
}

TEST(Marginalization, DetectsViolation) {
  const PairwiseMRF mrf = remark_mrf();
  Eigen::MatrixXd x = vertex(mrf, Assignment{{0, 1}}).to_dense();
  x(1, 4) = x(4, 1) = 0.5;
  const MarginalizationReport r =
      check_marginalization(SdrProblem::build(mrf), LiftedSolution::dense(x), 1e-6);
  EXPECT_FALSE(r.passed);
  EXPECT_NEAR(r.max_marginal_residual, 0.5, 1e-12);
}

TEST(Sdr2, VertexMapsToSigns) {
  const PairwiseMRF mrf = random_mrf(4, 3, 0.8, 2);
  const Sdr2Solution s = to_sdr2(mrf, vertex(mrf, Assignment{{1, 0, 1, 0}}));
  EXPECT_EQ(s.y.cwiseAbs(), Eigen::VectorXd::Ones(s.y.size()));
  EXPECT_LT((s.Y - s.y * s.y.transpose()).norm(), 1e-12);
  EXPECT_TRUE(check_sdr2_feasibility(mrf, s, 1e-9).passed);
}

TEST(Sdr2, RoundTripAndObjectiveRelation) {
  const PairwiseMRF mrf = random_mrf(5, 3, 0.6, 27);
  const SolveOutput out = solve_dense(mrf);
  const Sdr2Solution s = to_sdr2(mrf, out.solution);
  EXPECT_LT((from_sdr2(s) - out.solution.to_dense()).norm(), 1e-12);
  double w1 = 0.0, half_w11 = 0.0;
  for (int i = 0; i < mrf.num_vars(); ++i) w1 += mrf.unary(i).sum();
  for (std::size_t e = 0; e < mrf.num_edges(); ++e) half_w11 += 0.5 * mrf.pairwise(e).sum();
  const double sdr = SdrProblem::build(mrf).objective(out.solution);
  EXPECT_NEAR(sdr2_objective(mrf, s), 2 * sdr - s.corner * (w1 + half_w11), 1e-9);
  const Sdr2Feasibility f = check_sdr2_feasibility(mrf, s, 1e-4);
  EXPECT_TRUE(f.passed) << f.max_residual;
}

TEST(Sdr2, ObjectiveRelationOnVertices) {
  const PairwiseMRF mrf = remark_mrf();
  for (const Assignment& a : {Assignment{{0, 0}}, Assignment{{0, 1}}, Assignment{{1, 1}}}) {
    const Sdr2Solution s = to_sdr2(mrf, vertex(mrf, a));
    // sum w = -1, half the pairwise total = 2
    EXPECT_NEAR(sdr2_objective(mrf, s), 2 * energy(mrf, a) + 1 - 2, 1e-12);
  }
}

TEST(RecoveryExperiment, NoiselessLabelingAlwaysRecovers) {
  LabelingSpec s;
  s.n = 6;
  s.m = 3;
  s.seed = 4;
  RecoveryExperimentConfig cfg;
  cfg.solver = SolverKind::kSdpad;
  cfg.solver_config = SolverConfig::defaults(SolverKind::kSdpad);
  cfg.threads = 1;
  const RecoveryExperimentResult r = recovery_experiment(s, 3, cfg);
  EXPECT_EQ(r.successes, 3);
  EXPECT_DOUBLE_EQ(r.success_rate, 1.0);
  EXPECT_EQ(r.per_trial, std::vector<bool>(3, true));
  for (int t = 0; t < 3; ++t) EXPECT_EQ(r.planted_energy[t], r.rounded_energy[t]);
}

TEST(RecoveryExperiment, IndependentOfThreadCount) {
  RotationSpec s;
  s.n = 8;
  s.m = 3;
  s.p_obs = 0.7;
  s.p_false = 0.4;
  s.seed = 8;
  RecoveryExperimentConfig cfg;
  cfg.threads = 1;
  const RecoveryExperimentResult one = recovery_experiment(s, 4, cfg);
  cfg.threads = 3;
  const RecoveryExperimentResult three = recovery_experiment(s, 4, cfg);
  EXPECT_EQ(one.per_trial, three.per_trial);
  EXPECT_EQ(one.rounded_energy, three.rounded_energy);
}

}  // namespace
}  // namespace sdrmap
