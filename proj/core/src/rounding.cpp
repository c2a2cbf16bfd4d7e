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

#include "sdrmap/rounding.hpp"

#include <algorithm>

#include "sdrmap/errors.hpp"

namespace sdrmap {

void RoundingConfig::validate() const {
  if (!(t_max > 0.5 && t_max < 1.0)) throw ConfigError("t_max must lie in (0.5, 1)");
  if (max_rounds < 0) throw ConfigError("max_rounds must be non-negative");
}

ReducedSolver make_solver(SolverKind kind) {
  return [kind](const SdrProblem& p, const SolverConfig& c) { return solve(p, kind, c); };
}

ConditionedMrf condition(const PairwiseMRF& mrf, const std::vector<int>& fixed) {
  const int n = mrf.num_vars();
  if (static_cast<int>(fixed.size()) != n)
    throw DimensionMismatch("fixed-state vector has wrong length");
  ConditionedMrf out;
  std::vector<int> reduced_index(static_cast<std::size_t>(n), -1);
  std::vector<int> states;
  for (int i = 0; i < n; ++i) {
    const int s = fixed[static_cast<std::size_t>(i)];
    if (s >= mrf.num_states(i)) throw InvalidAssignment("fixed state out of range");
    if (s < 0) {
      reduced_index[static_cast<std::size_t>(i)] = static_cast<int>(out.free_vars.size());
      out.free_vars.push_back(i);
      states.push_back(mrf.num_states(i));
    } else {
      out.constant += mrf.unary(i)(s);
    }
  }
  std::vector<Eigen::VectorXd> unary;
  for (int i : out.free_vars) unary.push_back(mrf.unary(i));
  std::vector<Edge> edges;
  std::vector<Eigen::MatrixXd> tables;
  for (std::size_t e = 0; e < mrf.num_edges(); ++e) {
    const Edge ed = mrf.edges()[e];
    const auto& w = mrf.pairwise(e);
    const int si = fixed[static_cast<std::size_t>(ed.i)];
    const int sj = fixed[static_cast<std::size_t>(ed.j)];
    if (si >= 0 && sj >= 0) {
      out.constant += w(si, sj);
    } else if (si >= 0) {
      unary[static_cast<std::size_t>(reduced_index[static_cast<std::size_t>(ed.j)])] +=
          w.row(si).transpose();
    } else if (sj >= 0) {
      unary[static_cast<std::size_t>(reduced_index[static_cast<std::size_t>(ed.i)])] += w.col(sj);
    } else {
      edges.push_back({reduced_index[static_cast<std::size_t>(ed.i)],
                       reduced_index[static_cast<std::size_t>(ed.j)]});
      tables.push_back(w);
    }
  }
  out.mrf = PairwiseMRF(std::move(states), std::move(unary), std::move(edges), std::move(tables));
  return out;
}

RoundingResult round_solution(const PairwiseMRF& mrf, const LiftedSolution& sol,
                              const RoundingConfig& config, const ReducedSolver& solver,
                              const SolverConfig& solver_config) {
  config.validate();
  if (sol.dim() != 1 + mrf.layout().total()) throw DimensionMismatch("solution does not match model");
  const int n = mrf.num_vars();
  std::vector<int> fixed(static_cast<std::size_t>(n), -1);

  SolverConfig reduced_config = solver_config;
  reduced_config.k_max = std::max(1, solver_config.k_max / 2);

  RoundingResult result;
  ConditionedMrf current{mrf, {}, 0.0};
  for (int i = 0; i < n; ++i) current.free_vars.push_back(i);
  Eigen::VectorXd x = sol.border();

  for (;;) {
    const BlockLayout& lay = current.mrf.layout();
    // Fix confident blocks and always the global maximum entry.
    int best_var = -1, best_state = 0;
    double best = 0.0;
    for (int i = 0; i < current.mrf.num_vars(); ++i) {
      int arg = 0;
      for (int a = 1; a < lay.size(i); ++a)
        if (x(lay.offset(i) + a) > x(lay.offset(i) + arg)) arg = a;
      const double v = x(lay.offset(i) + arg);
      if (best_var < 0 || v > best) {
        best = v;
        best_var = i;
        best_state = arg;
      }
      if (v > config.t_max)
        fixed[static_cast<std::size_t>(current.free_vars[static_cast<std::size_t>(i)])] = arg;
    }
    if (best_var >= 0)
      fixed[static_cast<std::size_t>(current.free_vars[static_cast<std::size_t>(best_var)])] =
          best_state;

    ConditionedMrf next = condition(mrf, fixed);
    if (next.free_vars.empty()) break;

    if (result.rounds >= config.max_rounds) {
      // Remaining variables keep the argmax of the latest relaxed solution.
      std::vector<int> position(static_cast<std::size_t>(n), -1);
      for (std::size_t r = 0; r < current.free_vars.size(); ++r)
        position[static_cast<std::size_t>(current.free_vars[r])] = static_cast<int>(r);
      for (int v : next.free_vars) {
        const int r = position[static_cast<std::size_t>(v)];
        int arg = 0;
        for (int a = 1; a < lay.size(r); ++a)
          if (x(lay.offset(r) + a) > x(lay.offset(r) + arg)) arg = a;
        fixed[static_cast<std::size_t>(v)] = arg;
        ++result.fallback;
      }
      break;
    }

    current = std::move(next);
    const SdrProblem reduced = SdrProblem::build(current.mrf);
    const SolveOutput out = solver(reduced, reduced_config);
    x = out.solution.border();
    ++result.rounds;
  }
  result.assignment.states = std::move(fixed);
  // Never return something worse than decoding the first relaxation directly.
  Assignment naive = blockwise_argmax(mrf, sol.border());
  if (energy(mrf, naive) > energy(mrf, result.assignment)) {
    result.assignment = std::move(naive);
    result.used_argmax = true;
  }
  return result;
}

}  // namespace sdrmap
