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

#ifndef SDRMAP_ROUNDING_HPP_
#define SDRMAP_ROUNDING_HPP_

#include <functional>
#include <vector>

#include "sdrmap/admm.hpp"
#include "sdrmap/mrf.hpp"

namespace sdrmap {

struct RoundingConfig {
  double t_max = 0.99;
  int max_rounds = 10;

  void validate() const;
};

/// Solver used for reduced problems.
using ReducedSolver =
    std::function<SolveOutput(const SdrProblem&, const SolverConfig&)>;

ReducedSolver make_solver(SolverKind kind);

/// MRF restricted to the free variables, with the fixed ones absorbed.
struct ConditionedMrf {
  PairwiseMRF mrf;
  std::vector<int> free_vars;  // reduced index -> original index
  double constant = 0.0;       // energy contributed by the fixed part
};

/// Conditions on `fixed` (entry -1 means free): pairwise rows of fixed
/// neighbours are added to the free variables' unaries and fixed variables are
/// dropped. energy(original, a) == energy(reduced, a restricted) + constant.
ConditionedMrf condition(const PairwiseMRF& mrf, const std::vector<int>& fixed);

struct RoundingResult {
  Assignment assignment;
  int rounds = 0;    // reduced problems solved
  int fallback = 0;  // variables decoded by per-block argmax after max_rounds
  /// The per-block argmax of the input solution had higher energy than the
  /// iterative result and was returned instead.
  bool used_argmax = false;
};

/// Iterative rounding. Each pass fixes every state with x_{i,a} > t_max and
/// always the globally largest entry, conditions the MRF on the fixed
/// variables and re-solves the smaller relaxation with k_max halved. After
/// max_rounds re-solves the remaining variables take their per-block argmax.
/// The result is never worse than the per-block argmax of `sol` itself.
RoundingResult round_solution(const PairwiseMRF& mrf, const LiftedSolution& sol,
                              const RoundingConfig& config,
                              const ReducedSolver& solver,
                              const SolverConfig& solver_config);

}  // namespace sdrmap

#endif  // SDRMAP_ROUNDING_HPP_
