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

#ifndef SDRMAP_SDR_MODEL_HPP_
#define SDRMAP_SDR_MODEL_HPP_

#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "sdrmap/lifted.hpp"
#include "sdrmap/mrf.hpp"

namespace sdrmap {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct SdrOptions {
  /// Keep the edge-block nonnegativity X_ij >= 0. Turning it off gives the
  /// looser relaxation used to show those constraints matter.
  bool edge_nonnegativity = true;
};

/// Kind of an equality row, in the fixed order they are emitted.
enum class ConstraintKind {
  kCorner,        // Xbar(0,0) = 1
  kSimplex,       // 1^T x_i = 1
  kDiagonalTie,   // X_ii(a,a) = x_i(a)
  kOffDiagonal,   // X_ii(a,b) = 0, a < b
};

/// The relaxation in operator form
///
///   maximize <C, Xbar>  s.t.  A(Xbar) = b,  P(Xbar) >= 0,  Xbar PSD.
///
/// Every matrix built here (C, A^*(y), P^*(z)) lives on one fixed symmetric
/// sparsity pattern: the border row/column, the diagonal blocks and the
/// off-diagonal blocks of the edges. The equality rows only touch the border
/// and diagonal blocks; P only touches edge blocks.
class SdrProblem {
 public:
  /// One coefficient of a linear functional on symmetric matrices, stored for
  /// both triangles so the Frobenius adjoint is exact.
  struct Term {
    Index row;
    Index col;
    Index slot;  // position in the pattern's value array
    double coeff;
  };
  struct NonnegEntry {
    Index row;  // row < col
    Index col;
    Index upper_slot;
    Index lower_slot;
  };

  static SdrProblem build(const PairwiseMRF& mrf, const SdrOptions& options = {});

  Index dim() const { return dim_; }
  Index num_eq() const { return static_cast<Index>(constraints_.size()); }
  Index num_nonneg() const { return static_cast<Index>(nonneg_.size()); }
  const BlockLayout& layout() const { return layout_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Eigen::VectorXd& rhs() const { return rhs_; }
  ConstraintKind kind(Index k) const { return kinds_[static_cast<std::size_t>(k)]; }
  const std::vector<Term>& constraint(Index k) const {
    return constraints_[static_cast<std::size_t>(k)];
  }
  const std::vector<NonnegEntry>& nonneg_set() const { return nonneg_; }

  /// Energy-form cost: <C, xhat xhat^T> equals the MRF energy.
  const SparseMatrix& cost() const { return cost_; }
  double cost_frobenius_norm() const { return cost_.norm(); }

  Eigen::VectorXd apply_A(const Eigen::MatrixXd& xbar) const;
  Eigen::VectorXd apply_A(const LiftedSolution& sol) const;
  SparseMatrix apply_Astar(const Eigen::VectorXd& y) const;

  Eigen::VectorXd apply_P(const Eigen::MatrixXd& xbar) const;
  Eigen::VectorXd apply_P(const LiftedSolution& sol) const;
  SparseMatrix apply_Pstar(const Eigen::VectorXd& z) const;
  /// Clamps the nonneg_set entries (both triangles) at zero.
  Eigen::MatrixXd project_nonneg(const Eigen::MatrixXd& xbar) const;

  /// alpha*C + A^*(y) - P^*(z) on the shared pattern. Empty y or z are
  /// treated as zero.
  SparseMatrix combine(double cost_weight, const Eigen::VectorXd& y,
                       const Eigen::VectorXd& z) const;

  /// Explicit A A^* (sparse, num_eq x num_eq).
  const SparseMatrix& gram() const { return gram_; }
  /// Applies (A A^*)^{-1} using the factorization computed at build time.
  Eigen::VectorXd solve_gram(const Eigen::VectorXd& v) const;

  double objective(const LiftedSolution& sol) const;

 private:
  SdrProblem() = default;
  void check_dim(Index rows, Index cols) const;

  Index dim_ = 0;
  BlockLayout layout_;
  std::vector<Edge> edges_;
  SparseMatrix pattern_;  // values unused, structure shared by everything
  SparseMatrix cost_;
  std::vector<std::vector<Term>> constraints_;
  std::vector<ConstraintKind> kinds_;
  Eigen::VectorXd rhs_;
  std::vector<NonnegEntry> nonneg_;
  SparseMatrix gram_;
  std::shared_ptr<const Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>> gram_factor_;
};

}  // namespace sdrmap

#endif  // SDRMAP_SDR_MODEL_HPP_
