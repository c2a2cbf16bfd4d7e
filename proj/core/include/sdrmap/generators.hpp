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

#ifndef SDRMAP_GENERATORS_HPP_
#define SDRMAP_GENERATORS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sdrmap/mrf.hpp"

namespace sdrmap {

enum class GraphFamily { kComplete, kGrid, kErdosRenyi, kEdgeList };

struct GraphSpec {
  GraphFamily family = GraphFamily::kComplete;
  double p = 1.0;  // Erdos-Renyi edge probability
  int rows = 0;    // grid shape; rows * cols must equal n
  int cols = 0;
  std::vector<Edge> edges;
};

std::string to_string(GraphFamily family);
GraphFamily parse_graph_family(const std::string& name);

/// Simple graph on n vertices with sorted i < j edges.
std::vector<Edge> make_graph(int n, const GraphSpec& spec, std::uint64_t seed);
std::vector<Edge> grid_graph(int rows, int cols);

struct LabelingSpec {
  int n = 10;
  int m = 3;
  GraphSpec graph;
  double unary_error_rate = 0.0;
  double pairwise_error_rate = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct RotationSpec {
  int n = 10;
  int m = 4;
  double p_obs = 0.5;
  double p_false = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

enum class Scenario { kLabeling, kRotation, kRandom };

std::string to_string(Scenario s);

/// Generated MRF with its planted answer and the split of the edges into
/// correct and corrupted measurements.
struct PlantedInstance {
  Scenario scenario = Scenario::kRandom;
  PairwiseMRF mrf;
  Assignment ground_truth;
  std::vector<Edge> true_edges;
  std::vector<Edge> false_edges;
  /// Rotation model only: shape 0 has no neighbours, so the unaries do not
  /// pin the global shift.
  bool gauge_degenerate = false;
};

/// Hard one-hot potentials around the all-first-state ground truth.
PlantedInstance gen_labeling(const LabelingSpec& spec);

/// Permutation matrix with Q(s, (s + k) mod m) = 1.
Eigen::MatrixXd cyclic_shift(int m, int k);

/// Discrete 1D rotation synchronization: shape 0 is the reference, edges are
/// observed with probability p_obs and replaced by a uniformly random wrong
/// shift with probability p_false. Neighbours of shape 0 get a one-hot unary
/// at their planted orientation.
PlantedInstance gen_rotation_sync(const RotationSpec& spec);

/// Gaussian potentials (standard deviation `scale`) on an Erdos-Renyi graph.
PairwiseMRF gen_random_mrf(int n, int m, double density, double scale,
                           std::uint64_t seed);

/// True when a and b agree up to a global cyclic shift of all states.
bool equal_up_to_shift(const Assignment& a, const Assignment& b, int m);

}  // namespace sdrmap

#endif  // SDRMAP_GENERATORS_HPP_
