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

#ifndef SDRMAP_THEORY_HPP_
#define SDRMAP_THEORY_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <variant>

#include <Eigen/Dense>

#include "sdrmap/admm.hpp"
#include "sdrmap/generators.hpp"
#include "sdrmap/rounding.hpp"

namespace sdrmap {

// ---------------------------------------------------------------------------
// Marginalization implied by the PSD constraint.

struct MarginalizationReport {
  /// max over edges of ||X_ij 1 - x_i||_inf and ||X_ij^T 1 - x_j||_inf
  double max_marginal_residual = 0.0;
  /// max over variables of ||Xbar u_i||_2 with u_i = e_0 - sum_{a} e_{i,a}
  double max_null_residual = 0.0;
  bool passed = false;
};

MarginalizationReport check_marginalization(const SdrProblem& problem,
                                            const LiftedSolution& sol,
                                            double tol);

// ---------------------------------------------------------------------------
// The +-1 reparameterization y = 2x - 1.

/// The map is the congruence Xbar -> T Xbar T^T with T = [1 0; -1 2I], so it
/// keeps the corner t = Xbar(0,0) (1 on the feasible set) and is exactly
/// invertible and PSD-preserving.
struct Sdr2Solution {
  double corner = 1.0;
  Eigen::VectorXd y;     // 2x - t 1
  Eigen::MatrixXd Y;     // 4X - 2(x 1^T + 1 x^T) + t 1 1^T
  Eigen::VectorXd wbar;  // w_i + (sum_j W_ij 1 + sum_j W_ji^T 1) / 2, stacked
};

Sdr2Solution to_sdr2(const PairwiseMRF& mrf, const LiftedSolution& sol);

/// Inverse map back to the lifted 0/1 form.
Eigen::MatrixXd from_sdr2(const Sdr2Solution& s2);

/// <wbar, y> + 1/2 sum_E <W_ij, Y_ij>.
double sdr2_objective(const PairwiseMRF& mrf, const Sdr2Solution& s2);

struct Sdr2Feasibility {
  double psd_violation = 0.0;       // max(0, -lambda_min([t y^T; y Y]))
  double simplex_residual = 0.0;    // max |1^T y_i - (2 - m_i)|
  double nonneg_violation = 0.0;    // max(0, -min(Y_ij + 1 y_j^T + y_i 1^T + 1 1^T))
  double diagonal_residual = 0.0;   // max |(11^T + y_i1^T + 1y_i^T + Y_ii)/2 - Diag(1+y_i)|
  double unit_diag_residual = 0.0;  // max |diag(Y_ii) - 1|
  double max_residual = 0.0;
  bool passed = false;
};

Sdr2Feasibility check_sdr2_feasibility(const PairwiseMRF& mrf,
                                       const Sdr2Solution& s2, double tol);

// ---------------------------------------------------------------------------
// Exact-recovery conditions.

enum class RecoveryScenario { kLabeling, kRotation };

struct RecoveryCertificate {
  RecoveryScenario scenario = RecoveryScenario::kLabeling;
  bool satisfied = false;
  double margin = 0.0;  // lhs - rhs
  std::map<std::string, double> details;
};

/// Second-smallest Laplacian eigenvalue of the graph on n vertices.
double algebraic_connectivity(int n, const std::vector<Edge>& edges);

/// lambda_2(G_true) > 2 ||d||_inf with d_i = -w_i + sum_{(i,j) in G_false} W_ij 1.
RecoveryCertificate labeling_condition(const PlantedInstance& instance);

/// (1 - delta)/(1 + delta) * 2 / (3 - 1/m).
double rotation_bound(double m, double delta);

/// p_false * p_obs / m > c log(m n) / n. The constant c is not known; the
/// default 1 is a heuristic.
bool sampling_ok(int n, int m, double p_obs, double p_false, double c = 1.0);

/// Both rotation-model conditions, with the bound condition as the margin.
RecoveryCertificate rotation_condition(const RotationSpec& spec,
                                       double delta = 0.05, double c = 1.0);

using GeneratorSpec = std::variant<LabelingSpec, RotationSpec>;

struct RecoveryExperimentConfig {
  SolverKind solver = SolverKind::kSdpadLr;
  SolverConfig solver_config = SolverConfig::defaults(SolverKind::kSdpadLr);
  RoundingConfig rounding;
  int threads = 0;  // 0: thread_count()
};

struct RecoveryExperimentResult {
  double success_rate = 0.0;
  int successes = 0;
  int trials = 0;
  int solver_failures = 0;
  std::vector<bool> per_trial;
  /// Energies of the planted and the rounded assignment per trial (NaN when
  /// the solver failed). rounded > planted proves the planted answer is not
  /// the MAP of that instance.
  std::vector<double> planted_energy;
  std::vector<double> rounded_energy;
};

/// Generates `trials` instances with seeds derived from the spec's seed,
/// solves and rounds each, and counts exact matches with the planted truth
/// (up to a global shift for gauge-degenerate rotation instances). Solver
/// errors count as failures.
RecoveryExperimentResult recovery_experiment(const GeneratorSpec& spec, int trials,
                                             const RecoveryExperimentConfig& config);

}  // namespace sdrmap

#endif  // SDRMAP_THEORY_HPP_
