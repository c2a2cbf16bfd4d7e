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

#ifndef SDRMAP_ADMM_HPP_
#define SDRMAP_ADMM_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sdrmap/lifted.hpp"
#include "sdrmap/sdr_model.hpp"

namespace sdrmap {

enum class SolverKind { kSdpad, kSdpadLr };

std::string to_string(SolverKind kind);
SolverKind parse_solver_kind(const std::string& name);

/// How the two feasibility measures are combined in the stopping test.
enum class StopRule {
  kBoth,    // max(dual, primal) <= eps
  kEither,  // min(dual, primal) <= eps
};

struct ProgressInfo {
  int iteration = 0;
  double objective = 0.0;
  double primal_infeasibility = 0.0;
  double mu = 0.0;
  int rank = 0;
};

struct SolverConfig {
  int k_max = 1000;
  double eps = 1e-4;
  double mu_min = 1e-3;
  double rho = 1.005;
  double mu_max = 1e8;
  double delta = 1e-2;
  int r_init = 4;
  int r_max = 32;
  /// Iterations between rank-sufficiency checks in the low-rank solver.
  int restart_period = 1000;
  StopRule stop_rule = StopRule::kBoth;
  /// Extra requirement on the relative duality gap; <= 0 disables it.
  double gap_tol = 0.0;
  double eig_tol = 1e-9;
  /// Lanczos restart cycles per low-rank step; the best Ritz pairs are used
  /// when the limit is hit, so early iterations stay cheap. 0 selects the
  /// eigensolver default.
  int eig_max_restarts = 4;
  std::uint64_t seed = 0;
  int k_log = 0;
  std::function<void(const ProgressInfo&)> progress;

  /// Paper defaults for each solver (k_max 1000 vs 5000).
  static SolverConfig defaults(SolverKind kind);
  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

struct IterationRecord {
  int iteration = 0;
  double objective = 0.0;
  double dual_objective = 0.0;
  double primal_infeasibility = 0.0;  // ||A(X) - b||
  double dual_infeasibility = 0.0;    // mu ||X^k - X^{k-1}||_F
  double mu = 0.0;
  int rank = 0;
};

struct RestartEvent {
  int iteration = 0;
  int old_rank = 0;
  int new_rank = 0;
  friend bool operator==(const RestartEvent&, const RestartEvent&) = default;
};

struct SolveReport {
  double objective = 0.0;  // <C, Xbar>, energy scale
  double dual_objective = 0.0;
  double gap = 0.0;
  double inf = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  int final_rank = 0;
  /// Smallest retained over largest retained eigenvalue of Xbar (low-rank
  /// solver); lambda_2/lambda_1 for the dense solver.
  double eigval_ratio = 0.0;
  /// lambda_2 / lambda_1 of Xbar; small means numerically rank one.
  double rank1_ratio = 0.0;
  bool converged = false;
  bool rank_insufficient = false;
  /// Low-rank solver: iterations whose eigensolve hit its restart limit and
  /// used the best Ritz pairs available.
  int inexact_eigensolves = 0;
  std::vector<RestartEvent> restarts;
  std::vector<IterationRecord> trace;
};

/// Dual variables at termination plus what is needed to rebuild the slack S.
struct DualCertificate {
  Eigen::VectorXd y;
  Eigen::VectorXd z;
  double mu = 0.0;
  /// Dense solver: S = mu * (negative part of the last projected matrix).
  std::optional<Eigen::MatrixXd> slack;
  /// Low-rank solver: previous iterate, so that C+A^*y-P^*z-S can be formed
  /// as mu (X^{k-1} - X^k).
  std::optional<LiftedSolution> previous;
};

struct SolveOutput {
  LiftedSolution solution;
  SolveReport report;
  DualCertificate duals;
};

/// Alternating-direction solver with a dense Xbar and a full
/// eigendecomposition per iteration.
SolveOutput sdpad_solve(const SdrProblem& problem, const SolverConfig& config);

/// Low-rank variant: Xbar = Y Y^T, projection by top-r Lanczos with rank
/// doubling when the retained spectrum is not small enough.
SolveOutput sdpad_lr_solve(const SdrProblem& problem, const SolverConfig& config);

SolveOutput solve(const SdrProblem& problem, SolverKind kind,
                  const SolverConfig& config);

struct DualUpdate {
  Eigen::VectorXd y;
  Eigen::VectorXd z;
};

/// y' = y + mu (AA^*)^{-1}(A(Xtemp) - b),  z' = (z - mu P(Xtemp))_+,
/// given A(Xtemp) and P(Xtemp).
DualUpdate dual_closed_forms(const SdrProblem& problem,
                             const Eigen::VectorXd& a_temp,
                             const Eigen::VectorXd& p_temp,
                             const Eigen::VectorXd& y, const Eigen::VectorXd& z,
                             double mu);

/// One primal step from X^{k-1}: the dense form projects onto the PSD cone,
/// the low-rank form keeps the top-r part. Exposed for consistency tests.
Eigen::MatrixXd primal_step_dense(const SdrProblem& problem,
                                  const Eigen::MatrixXd& previous,
                                  const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& z, double mu);
LiftedSolution primal_step_lowrank(const SdrProblem& problem,
                                   const LiftedSolution& previous,
                                   const Eigen::VectorXd& y,
                                   const Eigen::VectorXd& z, double mu, int r,
                                   std::uint64_t seed = 0);

}  // namespace sdrmap

#endif  // SDRMAP_ADMM_HPP_
