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

#ifndef SDRMAP_LANCZOS_HPP_
#define SDRMAP_LANCZOS_HPP_

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

#include "sdrmap/sdr_model.hpp"

namespace sdrmap {

/// A symmetric matrix known only through its action u -> M u.
struct ImplicitSymMatrix {
  Index dim = 0;
  std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)> apply;
};

ImplicitSymMatrix from_dense(const Eigen::MatrixXd& m);

/// M = Y Y^T - scale * S, with S sharing the pattern of the relaxation. A
/// product costs O(N r + nnz(S)). Y and S are referenced, not copied.
ImplicitSymMatrix low_rank_minus_sparse(const Eigen::MatrixXd& y,
                                        const SparseMatrix& s, double scale);

struct LanczosOptions {
  double tol = 1e-9;
  /// Restart cycles; 0 selects max(8r, 60).
  int max_iter = 0;
  /// Krylov subspace size; 0 selects min(N, max(2r + 10, 30)).
  int krylov_dim = 0;
  std::uint64_t seed = 0;
  /// Optional starting block (N x k). Its span seeds the Krylov space, which
  /// makes repeated solves on slowly varying matrices much cheaper.
  const Eigen::MatrixXd* initial_subspace = nullptr;
  /// Only pairs with a positive Ritz value must converge. Enough for a PSD
  /// projection, where the rest is discarded.
  bool positive_only = false;
  /// Return the current Ritz pairs (converged = false) instead of throwing
  /// when max_iter is reached.
  bool best_effort = false;
};

struct EigResult {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // N x r, orthonormal columns
  double max_residual = 0.0;
  int restarts = 0;
  int matvecs = 0;
  bool converged = true;
  /// Leading Ritz vectors of the final space (at least r columns). A good
  /// initial_subspace for the next solve on a nearby matrix.
  Eigen::MatrixXd basis;
};

/// The r algebraically largest eigenpairs, by thick-restart Lanczos with full
/// reorthogonalization. Converged when ||M v - lambda v|| <= tol*max(1,|theta|max)
/// for every returned pair, where |theta|max is the largest Ritz value in
/// magnitude (an estimate of ||M||). Throws ConvergenceError after max_iter
/// restarts unless best_effort is set.
EigResult lanczos_top(const ImplicitSymMatrix& m, int r,
                      const LanczosOptions& options = {});

struct PsdFactor {
  Eigen::MatrixXd factor;   // N x r; columns for clamped eigenvalues are zero
  Eigen::VectorXd values;   // the top r eigenvalues, unclamped, descending
  Eigen::MatrixXd vectors;  // matching eigenvectors
  int positive = 0;         // eigenvalues kept after clamping
  bool all_nonpositive = false;
};

/// Y = U max(Sigma, 0)^{1/2} over the top r eigenpairs of M. Eigenvalues
/// within 1e-12*max(1, |lambda_1|) of zero count as zero.
PsdFactor psd_truncate(const ImplicitSymMatrix& m, int r,
                       const LanczosOptions& options = {});

/// Same rule applied to an already computed eigendecomposition.
PsdFactor psd_from_eigen(const Eigen::VectorXd& values,
                         const Eigen::MatrixXd& vectors);

}  // namespace sdrmap

#endif  // SDRMAP_LANCZOS_HPP_
