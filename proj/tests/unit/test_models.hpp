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

// Small models and an independent enumeration oracle shared by the tests.

#ifndef SDRMAP_TESTS_TEST_MODELS_HPP_
#define SDRMAP_TESTS_TEST_MODELS_HPP_

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "sdrmap/mrf.hpp"

namespace sdrmap::testing {

// Two binary variables: w1 = (2, 0), w2 = (-3, 0), W12 = [[0, 2], [2, 0]].
inline PairwiseMRF remark_mrf() {
  Eigen::VectorXd w1(2), w2(2);
  w1 << 2, 0;
  w2 << -3, 0;
  Eigen::MatrixXd w(2, 2);
  w << 0, 2, 2, 0;
  return PairwiseMRF({2, 2}, {w1, w2}, {{0, 1}}, {w});
}

inline PairwiseMRF random_mrf(int n, int max_m, double density, std::uint64_t seed,
                              bool uniform_m = false) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> states(2, max_m);
  std::normal_distribution<double> gauss;
  std::bernoulli_distribution keep(density);
  std::vector<int> m(static_cast<std::size_t>(n));
  for (int& s : m) s = uniform_m ? max_m : states(rng);
  std::vector<Eigen::VectorXd> unary;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd w(m[static_cast<std::size_t>(i)]);
    for (Eigen::Index a = 0; a < w.size(); ++a) w(a) = gauss(rng);
    unary.push_back(w);
  }
  std::vector<Edge> edges;
  std::vector<Eigen::MatrixXd> tables;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (!keep(rng)) continue;
      Eigen::MatrixXd w(m[static_cast<std::size_t>(i)], m[static_cast<std::size_t>(j)]);
      for (Eigen::Index a = 0; a < w.rows(); ++a)
        for (Eigen::Index b = 0; b < w.cols(); ++b) w(a, b) = gauss(rng);
      edges.push_back({i, j});
      tables.push_back(w);
    }
  return PairwiseMRF(m, unary, edges, tables);
}

// Energy straight from the stored tables, summed in a different order than
// the library (edges first).
inline double oracle_energy(const PairwiseMRF& mrf, const std::vector<int>& a) {
  double e = 0.0;
  for (std::size_t k = mrf.num_edges(); k-- > 0;) {
    const Edge& ed = mrf.edges()[k];
    e += mrf.pairwise(k)(a[static_cast<std::size_t>(ed.i)], a[static_cast<std::size_t>(ed.j)]);
  }
  for (int i = mrf.num_vars(); i-- > 0;) e += mrf.unary(i)(a[static_cast<std::size_t>(i)]);
  return e;
}

// Maximum energy by odometer enumeration (last variable fastest).
inline double oracle_max_energy(const PairwiseMRF& mrf) {
  std::vector<int> a(static_cast<std::size_t>(mrf.num_vars()), 0);
  double best = -std::numeric_limits<double>::infinity();
  for (;;) {
    best = std::max(best, oracle_energy(mrf, a));
    int i = mrf.num_vars() - 1;
    while (i >= 0 && ++a[static_cast<std::size_t>(i)] == mrf.num_states(i)) {
      a[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return best;
}

}  // namespace sdrmap::testing

#endif  // SDRMAP_TESTS_TEST_MODELS_HPP_
