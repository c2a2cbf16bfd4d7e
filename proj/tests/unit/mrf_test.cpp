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

#include "sdrmap/errors.hpp"
#include "sdrmap/generators.hpp"
#include "sdrmap/mrf.hpp"
#include "test_models.hpp"

namespace sdrmap {
namespace {

using testing::oracle_energy;
using testing::oracle_max_energy;
using testing::random_mrf;
using testing::remark_mrf;

TEST(Energy, RemarkInstance) {
  const PairwiseMRF mrf = remark_mrf();
  EXPECT_DOUBLE_EQ(energy(mrf, Assignment{{0, 1}}), 4.0);
  EXPECT_DOUBLE_EQ(energy(mrf, Assignment{{0, 0}}), -1.0);
  EXPECT_DOUBLE_EQ(energy(mrf, Assignment{{1, 0}}), -1.0);
  EXPECT_DOUBLE_EQ(energy(mrf, Assignment{{1, 1}}), 0.0);
}

TEST(Energy, ZeroPotentials) {
  const PairwiseMRF mrf = MrfBuilder({3, 2, 4}).add_edge(0, 1).add_edge(1, 2).build();
  EXPECT_EQ(energy(mrf, Assignment{{2, 1, 3}}), 0.0);
}

TEST(Energy, SingleUnary) {
  Eigen::VectorXd w(2);
  w << 5, 1;
  const PairwiseMRF mrf({2}, {w}, {}, {});
  EXPECT_EQ(energy(mrf, Assignment{{0}}), 5.0);
}

TEST(Energy, RejectsBadAssignments) {
  const PairwiseMRF mrf = remark_mrf();
  EXPECT_THROW(energy(mrf, Assignment{{0}}), InvalidAssignment);
  EXPECT_THROW(energy(mrf, Assignment{{0, 2}}), InvalidAssignment);
  EXPECT_THROW(energy(mrf, Assignment{{-1, 0}}), InvalidAssignment);
}

TEST(Energy, MatchesOracleOnRandomModels) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const PairwiseMRF mrf = random_mrf(6, 4, 0.5, 100 + trial);
    std::vector<int> a;
    for (int i = 0; i < mrf.num_vars(); ++i)
      a.push_back(std::uniform_int_distribution<int>(0, mrf.num_states(i) - 1)(rng));
    EXPECT_NEAR(energy(mrf, Assignment{a}), oracle_energy(mrf, a), 1e-12);
  }
}

TEST(Energy, InvariantUnderVariableRelabeling) {
  const PairwiseMRF mrf = random_mrf(5, 3, 0.7, 11);
  const std::vector<int> perm = {3, 0, 4, 1, 2};  // new index of old variable
  std::vector<int> states(5);
  std::vector<Eigen::VectorXd> unary(5);
  for (int i = 0; i < 5; ++i) {
    states[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = mrf.num_states(i);
    unary[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = mrf.unary(i);
  }
  std::vector<Edge> edges;
  std::vector<Eigen::MatrixXd> tables;
  for (std::size_t e = 0; e < mrf.num_edges(); ++e) {
    edges.push_back({perm[static_cast<std::size_t>(mrf.edges()[e].i)],
                     perm[static_cast<std::size_t>(mrf.edges()[e].j)]});
    tables.push_back(mrf.pairwise(e));
  }
  const PairwiseMRF relabeled(states, unary, edges, tables);
  std::vector<int> a(5), b(5);
  for (int i = 0; i < 5; ++i) {
    a[static_cast<std::size_t>(i)] = (i + 1) % mrf.num_states(i);
    b[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = a[static_cast<std::size_t>(i)];
  }
  EXPECT_NEAR(energy(mrf, Assignment{a}), energy(relabeled, Assignment{b}), 1e-12);
}

TEST(PairwiseMRF, ReversedEdgeIsTransposed) {
  Eigen::MatrixXd w(2, 3);
  w << 1, 2, 3, 4, 5, 6;
  const PairwiseMRF mrf({3, 2}, {Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(2)}, {{1, 0}},
                        {w});
  ASSERT_EQ(mrf.edges().front(), (Edge{0, 1}));
  EXPECT_EQ(mrf.pairwise(0), w.transpose());
  EXPECT_EQ(energy(mrf, Assignment{{2, 1}}), 6.0);
}

TEST(PairwiseMRF, RejectsInvalidModels) {
  const Eigen::VectorXd u2 = Eigen::VectorXd::Zero(2);
  const Eigen::MatrixXd w22 = Eigen::MatrixXd::Zero(2, 2);
  EXPECT_THROW(PairwiseMRF({2, 0}, {u2, Eigen::VectorXd()}, {}, {}), InvalidModel);
  EXPECT_THROW(PairwiseMRF({2, 2}, {u2, u2}, {{0, 0}}, {w22}), InvalidModel);
  EXPECT_THROW(PairwiseMRF({2, 2}, {u2, u2}, {{0, 2}}, {w22}), InvalidModel);
  EXPECT_THROW(PairwiseMRF({2, 2}, {u2, u2}, {{0, 1}, {1, 0}}, {w22, w22}), InvalidModel);
  EXPECT_THROW(PairwiseMRF({2, 3}, {u2, u2}, {}, {}), InvalidModel);
  EXPECT_THROW(PairwiseMRF({2, 3}, {u2, Eigen::VectorXd::Zero(3)}, {{0, 1}}, {w22}),
               InvalidModel);
  Eigen::VectorXd bad = u2;
  bad(1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(PairwiseMRF({2}, {bad}, {}, {}), InvalidModel);
}

TEST(MrfBuilder, AccumulatesRepeatedTerms) {
  Eigen::VectorXd w(2);
  w << 1, 2;
  Eigen::MatrixXd p(2, 3);
  p << 1, 0, 0, 0, 0, 1;
  const PairwiseMRF mrf = MrfBuilder({2, 3})
                              .add_unary(0, w)
                              .add_unary(0, w)
                              .add_pairwise(0, 1, p)
                              .add_pairwise(1, 0, p.transpose())
                              .build();
  EXPECT_EQ(mrf.unary(0), 2 * w);
  ASSERT_EQ(mrf.num_edges(), 1u);
  EXPECT_EQ(mrf.pairwise(0), 2 * p);
}

TEST(PairwiseMRF, NegatedFlipsEnergy) {
  const PairwiseMRF mrf = random_mrf(4, 3, 0.8, 3);
  const Assignment a{{1, 0, 1, 0}};
  EXPECT_DOUBLE_EQ(energy(mrf.negated(), a), -energy(mrf, a));
}

TEST(PairwiseMRF, FindEdgeBothOrientations) {
  const PairwiseMRF mrf = MrfBuilder({2, 2, 2}).add_edge(0, 2).add_edge(1, 2).build();
  EXPECT_EQ(mrf.find_edge(2, 0), mrf.find_edge(0, 2));
  EXPECT_FALSE(mrf.find_edge(0, 1).has_value());
  EXPECT_EQ(mrf.incident(2).size(), 2u);
}

TEST(Indicator, Definition) {
  const PairwiseMRF mrf = remark_mrf();
  Eigen::VectorXd expected(4);
  expected << 1, 0, 0, 1;
  EXPECT_EQ(to_indicator(mrf, Assignment{{0, 1}}).x, expected);
}

TEST(Indicator, RoundTrip) {
  const PairwiseMRF mrf = random_mrf(7, 4, 0.3, 21);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    Assignment a;
    for (int i = 0; i < mrf.num_vars(); ++i)
      a.states.push_back(std::uniform_int_distribution<int>(0, mrf.num_states(i) - 1)(rng));
    EXPECT_EQ(from_indicator(mrf, to_indicator(mrf, a)), a);
  }
}

TEST(Indicator, AmbiguousBlockRejected) {
  const PairwiseMRF mrf({2}, {Eigen::VectorXd::Zero(2)}, {}, {});
  IndicatorVector x{Eigen::Vector2d(0.5, 0.5)};
  EXPECT_THROW(from_indicator(mrf, x), ConversionError);
}

TEST(Indicator, QuadraticFormEqualsEnergy) {
  const PairwiseMRF mrf = random_mrf(6, 3, 0.6, 8);
  const Assignment a{{0, 1, 1, 0, 1, 0}};
  EXPECT_NEAR(indicator_objective(mrf, to_indicator(mrf, a).x), energy(mrf, a), 1e-12);
}

TEST(BlockwiseArgmax, TiesGoToLowestState) {
  const PairwiseMRF mrf = MrfBuilder({3, 2}).build();
  Eigen::VectorXd x(5);
  x << 0.2, 0.4, 0.4, 0.5, 0.5;
  EXPECT_EQ(blockwise_argmax(mrf, x), (Assignment{{1, 0}}));
}

TEST(BruteForce, RemarkInstance) {
  const MapResult r = brute_force_map(remark_mrf());
  EXPECT_EQ(r.assignment, (Assignment{{0, 1}}));
  EXPECT_EQ(r.energy, 4.0);
}

TEST(BruteForce, AllTiedPicksLexicographicallySmallest) {
  const PairwiseMRF mrf = MrfBuilder({2, 2, 2}).add_edge(0, 1).build();
  const MapResult r = brute_force_map(mrf);
  EXPECT_EQ(r.assignment, (Assignment{{0, 0, 0}}));
  EXPECT_EQ(r.energy, 0.0);
}

TEST(BruteForce, MatchesOracleAndIsThreadIndependent) {
  for (int trial = 0; trial < 10; ++trial) {
    const PairwiseMRF mrf = random_mrf(7, 3, 0.5, 300 + trial);
    const MapResult one = brute_force_map(mrf, kDefaultOracleCap, 1);
    const MapResult four = brute_force_map(mrf, kDefaultOracleCap, 4);
    EXPECT_EQ(one.assignment, four.assignment);
    EXPECT_EQ(one.energy, four.energy);
    EXPECT_NEAR(one.energy, oracle_max_energy(mrf), 1e-12);
  }
}

TEST(BruteForce, NoiselessRotationRecoversPlantedAssignment) {
  RotationSpec spec;
  spec.n = 5;
  spec.m = 3;
  spec.p_obs = 1.0;
  spec.p_false = 0.0;
  spec.seed = 4;
  const PlantedInstance inst = gen_rotation_sync(spec);
  EXPECT_EQ(brute_force_map(inst.mrf).assignment, inst.ground_truth);
}

TEST(BruteForce, CapEnforced) {
  const PairwiseMRF mrf = MrfBuilder(std::vector<int>(30, 2)).build();
  EXPECT_THROW(brute_force_map(mrf), OracleTooLarge);
  EXPECT_THROW(brute_force_map(remark_mrf(), 3), OracleTooLarge);
}

}  // namespace
}  // namespace sdrmap
