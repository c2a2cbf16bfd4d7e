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

#include <random>

#include "sdrmap/errors.hpp"
#include "sdrmap/lanczos.hpp"

namespace sdrmap {
namespace {

Eigen::MatrixXd random_symmetric(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j <= i; ++j) m(i, j) = m(j, i) = g(rng);
  return m;
}

TEST(Lanczos, DiagonalTopTwo) {
  const Eigen::MatrixXd d = Eigen::Vector3d(5, 3, 1).asDiagonal();
  const EigResult r = lanczos_top(from_dense(d), 2);
  ASSERT_EQ(r.values.size(), 2);
  EXPECT_NEAR(r.values(0), 5.0, 1e-9);
  EXPECT_NEAR(r.values(1), 3.0, 1e-9);
  EXPECT_NEAR(std::abs(r.vectors(0, 0)), 1.0, 1e-9);
  EXPECT_NEAR(std::abs(r.vectors(1, 1)), 1.0, 1e-9);
}

TEST(Lanczos, IdentityHasOrthonormalVectors) {
  const EigResult r = lanczos_top(from_dense(Eigen::MatrixXd::Identity(10, 10)), 3);
  EXPECT_LT((r.values.array() - 1.0).abs().maxCoeff(), 1e-10);
  EXPECT_LT((r.vectors.transpose() * r.vectors - Eigen::MatrixXd::Identity(3, 3)).norm(), 1e-10);
}

TEST(Lanczos, MatchesDenseEigensolver) {
  const Eigen::MatrixXd a = random_symmetric(200, 42);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  const int r = 6;
  const EigResult res = lanczos_top(from_dense(a), r, {.tol = 1e-10, .seed = 1});
  EXPECT_TRUE(res.converged);
  for (int k = 0; k < r; ++k) {
    EXPECT_NEAR(res.values(k), es.eigenvalues()(199 - k), 1e-7);
    const Eigen::VectorXd v = res.vectors.col(k);
    EXPECT_LT((a * v - res.values(k) * v).norm(), 1e-6);
  }
  EXPECT_LT((res.vectors.transpose() * res.vectors - Eigen::MatrixXd::Identity(r, r)).norm(),
            1e-9);
  for (int k = 1; k < r; ++k) EXPECT_GE(res.values(k - 1), res.values(k));
}

TEST(Lanczos, DeterministicForFixedSeed) {
  const Eigen::MatrixXd a = random_symmetric(80, 3);
  const EigResult x = lanczos_top(from_dense(a), 4, {.seed = 9});
  const EigResult y = lanczos_top(from_dense(a), 4, {.seed = 9});
  EXPECT_EQ(x.values, y.values);
  EXPECT_EQ(x.vectors, y.vectors);
}

TEST(Lanczos, WarmStartReducesWork) {
  const Eigen::MatrixXd a = random_symmetric(300, 11);
  const EigResult cold = lanczos_top(from_dense(a), 4, {.tol = 1e-9});
  const Eigen::MatrixXd b = a + 1e-6 * random_symmetric(300, 12);
  const EigResult warm = lanczos_top(from_dense(b), 4,
                                     {.tol = 1e-9, .initial_subspace = &cold.basis});
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(warm.values(k), es.eigenvalues()(299 - k), 1e-6);
  EXPECT_LT(warm.matvecs, cold.matvecs);
}

TEST(Lanczos, AllButOneEigenpair) {
  const Eigen::MatrixXd a = random_symmetric(6, 4);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  const EigResult r = lanczos_top(from_dense(a), 5);
  for (int k = 0; k < 5; ++k) EXPECT_NEAR(r.values(k), es.eigenvalues()(5 - k), 1e-9);
}

TEST(Lanczos, RejectsBadRank) {
  const ImplicitSymMatrix m = from_dense(Eigen::MatrixXd::Identity(4, 4));
  EXPECT_THROW(lanczos_top(m, 0), DimensionMismatch);
  EXPECT_THROW(lanczos_top(m, 4), DimensionMismatch);
}

TEST(Lanczos, LowRankMinusSparseOperator) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  Eigen::MatrixXd y(7, 2);
  for (Index i = 0; i < y.size(); ++i) y.data()[i] = g(rng);
  const Eigen::MatrixXd s = random_symmetric(7, 5);
  const SparseMatrix sp = s.sparseView();
  const ImplicitSymMatrix op = low_rank_minus_sparse(y, sp, 0.25);
  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(7, -1, 1), out(7);
  op.apply(v, out);
  EXPECT_LT((out - (y * y.transpose() - 0.25 * s) * v).norm(), 1e-12);
}

TEST(PsdTruncate, ClampsNegativeEigenvalues) {
  const Eigen::MatrixXd d = Eigen::Vector4d(4, 1, -2, -5).asDiagonal();
  const PsdFactor f = psd_truncate(from_dense(d), 3);
  EXPECT_EQ(f.positive, 2);
  EXPECT_FALSE(f.all_nonpositive);
  const Eigen::MatrixXd expected = Eigen::Vector4d(4, 1, 0, 0).asDiagonal();
  EXPECT_LT((f.factor * f.factor.transpose() - expected).norm(), 1e-9);
  EXPECT_NEAR(f.values(2), -2.0, 1e-9);
}

TEST(PsdTruncate, AllNonpositive) {
  const Eigen::MatrixXd d = -Eigen::MatrixXd::Identity(5, 5);
  const PsdFactor f = psd_truncate(from_dense(d), 2);
  EXPECT_TRUE(f.all_nonpositive);
  EXPECT_EQ(f.positive, 0);
  EXPECT_EQ(f.factor.norm(), 0.0);
}

TEST(PsdTruncate, FromEigenMatchesDenseProjection) {
  const Eigen::MatrixXd a = random_symmetric(12, 8);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  const PsdFactor f = psd_from_eigen(es.eigenvalues().reverse(), es.eigenvectors().rowwise().reverse());
  const Eigen::MatrixXd proj = es.eigenvectors() *
                               es.eigenvalues().cwiseMax(0.0).asDiagonal() *
                               es.eigenvectors().transpose();
  EXPECT_LT((f.factor * f.factor.transpose() - proj).norm(), 1e-10);
}

}  // namespace
}  // namespace sdrmap
