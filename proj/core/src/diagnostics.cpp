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

#include "sdrmap/diagnostics.hpp"

#include <cmath>

#include "sdrmap/errors.hpp"

namespace sdrmap {

Diagnostics diagnostics(const SdrProblem& problem, const LiftedSolution& sol,
                        const DualCertificate& duals) {
  if (duals.y.size() != problem.num_eq())
    throw DiagnosticsUnavailable("equality duals are missing");
  if (duals.z.size() != problem.num_nonneg())
    throw DiagnosticsUnavailable("nonnegativity duals are missing");
  if (sol.dim() != problem.dim()) throw DimensionMismatch("lifted dim mismatch");

  Diagnostics d;
  d.primal_objective = problem.objective(sol);
  d.dual_objective = problem.rhs().dot(duals.y);
  d.gap = std::abs(d.dual_objective - d.primal_objective) /
          (1.0 + std::abs(d.dual_objective) + std::abs(d.primal_objective));

  const Eigen::VectorXd ax = problem.apply_A(sol);
  const Eigen::VectorXd px = problem.apply_P(sol);
  const double negative_part = px.cwiseMin(0.0).norm();
  d.primal_inf = ((ax - problem.rhs()).norm() + negative_part) / (1.0 + problem.rhs().norm());

  // Cmin + A^*(y) - P^*(z) - S, with Cmin = -C.
  double dual_residual = 0.0;
  if (duals.slack) {
    const SparseMatrix g = problem.combine(-1.0, duals.y, duals.z);
    Eigen::MatrixXd r = -*duals.slack;
    if (r.rows() != problem.dim()) throw DiagnosticsUnavailable("slack has wrong shape");
    r += Eigen::MatrixXd(g);
    dual_residual = r.norm();
  } else if (duals.previous) {
    dual_residual = duals.mu * frobenius_distance(*duals.previous, sol);
  } else {
    if (problem.dim() > 4000)
      throw DiagnosticsUnavailable("no slack available and the problem is too large to form one");
    const Eigen::MatrixXd g = Eigen::MatrixXd(problem.combine(-1.0, duals.y, duals.z));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    dual_residual = es.eigenvalues().cwiseMin(0.0).norm();
  }
  d.dual_inf = dual_residual / (1.0 + problem.cost_frobenius_norm());
  d.inf = std::max(d.primal_inf, d.dual_inf);
  return d;
}

}  // namespace sdrmap
