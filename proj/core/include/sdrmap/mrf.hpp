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

#ifndef SDRMAP_MRF_HPP_
#define SDRMAP_MRF_HPP_

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace sdrmap {

using Index = Eigen::Index;

/// Undirected edge, always stored with i < j.
struct Edge {
  int i = 0;
  int j = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Joint state of all variables. States are 0-based: entry i lies in
/// [0, num_states(i)).
struct Assignment {
  std::vector<int> states;

  std::size_t size() const { return states.size(); }
  int operator[](std::size_t i) const { return states[i]; }
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Stacked one-hot blocks, one block of length m_i per variable.
struct IndicatorVector {
  Eigen::VectorXd x;
};

/// Offsets of the per-variable blocks inside the stacked indicator vector.
/// The lifted matrix uses index 0 for the border, so block i of the lifted
/// matrix starts at 1 + offset(i).
class BlockLayout {
 public:
  BlockLayout() = default;
  explicit BlockLayout(const std::vector<int>& states);

  int num_vars() const { return static_cast<int>(sizes_.size()); }
  Index offset(int i) const { return offsets_[static_cast<std::size_t>(i)]; }
  Index lifted(int i, int a) const { return 1 + offset(i) + a; }
  int size(int i) const { return sizes_[static_cast<std::size_t>(i)]; }
  Index total() const { return total_; }

 private:
  std::vector<int> sizes_;
  std::vector<Index> offsets_;
  Index total_ = 0;
};

/// Pairwise Markov random field. The energy
///
///   f(a) = sum_i w_i(a_i) + sum_{(i,j) in E} W_ij(a_i, a_j)
///
/// is MAXIMIZED by MAP inference. Minimization inputs should be converted with
/// negated() at the boundary. Immutable after construction.
class PairwiseMRF {
 public:
  PairwiseMRF() = default;

  /// Validates and takes ownership. `edges` need not be sorted; an edge given
  /// as (j, i) with j > i has its matrix transposed. Duplicates are rejected.
  PairwiseMRF(std::vector<int> states, std::vector<Eigen::VectorXd> unary,
              std::vector<Edge> edges, std::vector<Eigen::MatrixXd> pairwise);

  int num_vars() const { return static_cast<int>(states_.size()); }
  int num_states(int i) const { return states_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& states() const { return states_; }
  const BlockLayout& layout() const { return layout_; }

  const Eigen::VectorXd& unary(int i) const {
    return unary_[static_cast<std::size_t>(i)];
  }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t num_edges() const { return edges_.size(); }
  /// Pairwise table of edges()[e], shaped num_states(i) x num_states(j).
  const Eigen::MatrixXd& pairwise(std::size_t e) const { return pairwise_[e]; }

  /// Index into edges() of the edge {i, j}, in either orientation.
  std::optional<std::size_t> find_edge(int i, int j) const;

  /// Incident edges of variable i as indices into edges().
  const std::vector<std::size_t>& incident(int i) const {
    return incident_[static_cast<std::size_t>(i)];
  }

  /// Product of state counts, saturating at UINT64_MAX.
  std::uint64_t state_space_size() const;

  PairwiseMRF negated() const;

 private:
  std::vector<int> states_;
  BlockLayout layout_;
  std::vector<Eigen::VectorXd> unary_;
  std::vector<Edge> edges_;
  std::vector<Eigen::MatrixXd> pairwise_;
  std::vector<std::vector<std::size_t>> incident_;
};

/// Accumulating builder; repeated terms on the same variable or edge add up.
class MrfBuilder {
 public:
  explicit MrfBuilder(std::vector<int> states);

  MrfBuilder& add_unary(int i, const Eigen::VectorXd& w);
  /// Adds W to edge {i, j}. If i > j the table is transposed first.
  MrfBuilder& add_pairwise(int i, int j, const Eigen::MatrixXd& w);
  /// Declares an edge with an all-zero table if it does not exist yet.
  MrfBuilder& add_edge(int i, int j);

  PairwiseMRF build() const;

 private:
  std::vector<int> states_;
  std::vector<Eigen::VectorXd> unary_;
  std::vector<std::pair<Edge, Eigen::MatrixXd>> terms_;
};

void validate(const PairwiseMRF& mrf, const Assignment& a);

/// Energy with a fixed summation order: unaries by variable, then edges in
/// sorted order.
double energy(const PairwiseMRF& mrf, const Assignment& a);

IndicatorVector to_indicator(const PairwiseMRF& mrf, const Assignment& a);

/// Inverse of to_indicator. Every block must be one-hot within `tol`.
Assignment from_indicator(const PairwiseMRF& mrf, const IndicatorVector& x,
                          double tol = 1e-9);

/// Per-block argmax of a relaxed indicator; ties go to the lowest state.
Assignment blockwise_argmax(const PairwiseMRF& mrf, const Eigen::VectorXd& x);

/// <w, x> + sum_E x_i^T W_ij x_j for an arbitrary (possibly relaxed) x.
double indicator_objective(const PairwiseMRF& mrf, const Eigen::VectorXd& x);

struct MapResult {
  Assignment assignment;
  double energy = 0.0;
};

inline constexpr std::uint64_t kDefaultOracleCap = 10'000'000;

/// Exhaustive MAP. Ties are broken toward the lexicographically smallest
/// assignment (variable 0 most significant). Throws OracleTooLarge when the
/// state space exceeds `cap`.
MapResult brute_force_map(const PairwiseMRF& mrf,
                          std::uint64_t cap = kDefaultOracleCap,
                          int threads = 0);

}  // namespace sdrmap

#endif  // SDRMAP_MRF_HPP_
