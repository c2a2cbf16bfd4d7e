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

#include "sdrmap/generators.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "sdrmap/errors.hpp"

namespace sdrmap {

std::string to_string(GraphFamily family) {
  switch (family) {
    case GraphFamily::kComplete: return "complete";
    case GraphFamily::kGrid: return "grid";
    case GraphFamily::kErdosRenyi: return "erdos-renyi";
    case GraphFamily::kEdgeList: return "edge-list";
  }
  return "unknown";
}

GraphFamily parse_graph_family(const std::string& name) {
  if (name == "complete") return GraphFamily::kComplete;
  if (name == "grid") return GraphFamily::kGrid;
  if (name == "erdos-renyi" || name == "er") return GraphFamily::kErdosRenyi;
  if (name == "edge-list") return GraphFamily::kEdgeList;
  throw ConfigError("unknown graph family '" + name + "'");
}

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::kLabeling: return "labeling";
    case Scenario::kRotation: return "rotation";
    case Scenario::kRandom: return "random";
  }
  return "unknown";
}

std::vector<Edge> grid_graph(int rows, int cols) {
  std::vector<Edge> edges;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const int v = r * cols + c;
      if (c + 1 < cols) edges.push_back({v, v + 1});
      if (r + 1 < rows) edges.push_back({v, v + cols});
    }
  std::sort(edges.begin(), edges.end());
  return edges;
}

std::vector<Edge> make_graph(int n, const GraphSpec& spec, std::uint64_t seed) {
  std::vector<Edge> edges;
  switch (spec.family) {
    case GraphFamily::kComplete:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.push_back({i, j});
      break;
    case GraphFamily::kGrid:
      if (spec.rows * spec.cols != n) throw ConfigError("grid shape does not match n");
      edges = grid_graph(spec.rows, spec.cols);
      break;
    case GraphFamily::kErdosRenyi: {
      if (spec.p < 0.0 || spec.p > 1.0) throw ConfigError("edge probability must lie in [0,1]");
      std::mt19937_64 rng(seed);
      std::bernoulli_distribution keep(spec.p);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (keep(rng)) edges.push_back({i, j});
      break;
    }
    case GraphFamily::kEdgeList:
      for (Edge e : spec.edges) {
        if (e.i == e.j || e.i < 0 || e.j < 0 || e.i >= n || e.j >= n)
          throw ConfigError("edge list entry is not a valid simple edge");
        if (e.i > e.j) std::swap(e.i, e.j);
        edges.push_back(e);
      }
      std::sort(edges.begin(), edges.end());
      if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw ConfigError("edge list has duplicates");
      break;
  }
  return edges;
}

void LabelingSpec::validate() const {
  if (n < 1 || m < 2) throw ConfigError("labeling needs n >= 1 and m >= 2");
  if (unary_error_rate < 0.0 || unary_error_rate > 1.0 || pairwise_error_rate < 0.0 ||
      pairwise_error_rate > 1.0)
    throw ConfigError("error rates must lie in [0,1]");
}

void RotationSpec::validate() const {
  if (n < 1 || m < 2) throw ConfigError("rotation model needs n >= 1 and m >= 2");
  if (p_obs < 0.0 || p_obs > 1.0 || p_false < 0.0 || p_false > 1.0)
    throw ConfigError("probabilities must lie in [0,1]");
}

PlantedInstance gen_labeling(const LabelingSpec& spec) {
  spec.validate();
  const int n = spec.n, m = spec.m;
  std::mt19937_64 rng(spec.seed);
  const std::vector<Edge> graph = make_graph(n, spec.graph, rng());
  std::bernoulli_distribution unary_err(spec.unary_error_rate);
  std::bernoulli_distribution pair_err(spec.pairwise_error_rate);
  std::uniform_int_distribution<int> wrong_state(1, m - 1);
  std::uniform_int_distribution<int> wrong_pair(1, m * m - 1);

  PlantedInstance inst;
  inst.scenario = Scenario::kLabeling;
  inst.ground_truth.states.assign(static_cast<std::size_t>(n), 0);
  std::vector<Eigen::VectorXd> unary;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
    w(unary_err(rng) ? wrong_state(rng) : 0) = 1.0;
    unary.push_back(std::move(w));
  }
  std::vector<Eigen::MatrixXd> tables;
  for (const Edge& e : graph) {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m, m);
    if (pair_err(rng)) {
      const int flat = wrong_pair(rng);  // any entry except (0,0)
      w(flat / m, flat % m) = 1.0;
      inst.false_edges.push_back(e);
    } else {
      w(0, 0) = 1.0;
      inst.true_edges.push_back(e);
    }
    tables.push_back(std::move(w));
  }
  inst.mrf = PairwiseMRF(std::vector<int>(static_cast<std::size_t>(n), m), std::move(unary),
                         graph, std::move(tables));
  return inst;
}

Eigen::MatrixXd cyclic_shift(int m, int k) {
  if (m < 1) throw ConfigError("cyclic_shift needs m >= 1");
  if (k < 0 || k >= m) throw ConfigError("shift " + std::to_string(k) + " out of range [0," +
                                         std::to_string(m) + ")");
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(m, m);
  for (int s = 0; s < m; ++s) q(s, (s + k) % m) = 1.0;
  return q;
}

PlantedInstance gen_rotation_sync(const RotationSpec& spec) {
  spec.validate();
  const int n = spec.n, m = spec.m;
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<int> orientation(0, m - 1);
  std::uniform_int_distribution<int> wrong_offset(1, m - 1);
  std::bernoulli_distribution observed(spec.p_obs);
  std::bernoulli_distribution corrupted(spec.p_false);

  PlantedInstance inst;
  inst.scenario = Scenario::kRotation;
  std::vector<int> g(static_cast<std::size_t>(n), 0);
  for (int i = 1; i < n; ++i) g[static_cast<std::size_t>(i)] = orientation(rng);
  inst.ground_truth.states = g;

  std::vector<Edge> edges;
  std::vector<Eigen::MatrixXd> tables;
  std::vector<Eigen::VectorXd> unary(static_cast<std::size_t>(n), Eigen::VectorXd::Zero(m));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (!observed(rng)) continue;
      const int truth = ((g[static_cast<std::size_t>(j)] - g[static_cast<std::size_t>(i)]) % m + m) % m;
      int k = truth;
      if (corrupted(rng)) {
        k = (truth + wrong_offset(rng)) % m;
        inst.false_edges.push_back({i, j});
      } else {
        inst.true_edges.push_back({i, j});
      }
      edges.push_back({i, j});
      tables.push_back(cyclic_shift(m, k));
      if (i == 0) unary[static_cast<std::size_t>(j)](g[static_cast<std::size_t>(j)]) = 1.0;
    }
  inst.gauge_degenerate = std::none_of(edges.begin(), edges.end(),
                                       [](const Edge& e) { return e.i == 0; });
  inst.mrf = PairwiseMRF(std::vector<int>(static_cast<std::size_t>(n), m), std::move(unary),
                         std::move(edges), std::move(tables));
  return inst;
}

PairwiseMRF gen_random_mrf(int n, int m, double density, double scale, std::uint64_t seed) {
  if (n < 1 || m < 1) throw ConfigError("random model needs n >= 1 and m >= 1");
  if (!(density > 0.0 && density <= 1.0)) throw ConfigError("density must lie in (0,1]");
  if (scale < 0.0) throw ConfigError("potential scale must be non-negative");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::bernoulli_distribution keep(density);
  std::vector<Eigen::VectorXd> unary;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd w(m);
    for (int a = 0; a < m; ++a) w(a) = scale * gauss(rng);
    unary.push_back(std::move(w));
  }
  std::vector<Edge> edges;
  std::vector<Eigen::MatrixXd> tables;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (density < 1.0 && !keep(rng)) continue;
      Eigen::MatrixXd w(m, m);
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) w(a, b) = scale * gauss(rng);
      edges.push_back({i, j});
      tables.push_back(std::move(w));
    }
  return PairwiseMRF(std::vector<int>(static_cast<std::size_t>(n), m), std::move(unary),
                     std::move(edges), std::move(tables));
}

bool equal_up_to_shift(const Assignment& a, const Assignment& b, int m) {
  if (a.size() != b.size()) return false;
  if (a.size() == 0) return true;
  const int shift = ((a[0] - b[0]) % m + m) % m;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (((a[i] - b[i]) % m + m) % m != shift) return false;
  return true;
}

}  // namespace sdrmap
