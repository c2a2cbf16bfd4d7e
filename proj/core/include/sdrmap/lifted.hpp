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

#ifndef SDRMAP_LIFTED_HPP_
#define SDRMAP_LIFTED_HPP_

#include <variant>

#include <Eigen/Dense>

namespace sdrmap {

/// The lifted matrix [1 x^T; x X], held either densely or as a factor Y with
/// Xbar = Y Y^T.
class LiftedSolution {
 public:
  struct Dense {
    Eigen::MatrixXd matrix;
  };
  struct Factored {
    Eigen::MatrixXd factor;
  };

  LiftedSolution() : repr_(Dense{}) {}
  static LiftedSolution dense(Eigen::MatrixXd xbar);
  static LiftedSolution factored(Eigen::MatrixXd y);

  bool is_factored() const { return std::holds_alternative<Factored>(repr_); }
  Eigen::Index dim() const;
  /// Columns of the factor, or the dimension for the dense form.
  Eigen::Index rank_bound() const;

  const Eigen::MatrixXd& dense_matrix() const;
  const Eigen::MatrixXd& factor() const;

  Eigen::MatrixXd to_dense() const;
  double entry(Eigen::Index i, Eigen::Index j) const;
  /// Border vector x = Xbar(1:, 0).
  Eigen::VectorXd border() const;
  Eigen::VectorXd apply(const Eigen::VectorXd& u) const;
  double frobenius_norm() const;

 private:
  explicit LiftedSolution(std::variant<Dense, Factored> r) : repr_(std::move(r)) {}
  std::variant<Dense, Factored> repr_;
};

/// ||A - B||_F for two lifted matrices without densifying factored ones.
double frobenius_distance(const LiftedSolution& a, const LiftedSolution& b);

}  // namespace sdrmap

#endif  // SDRMAP_LIFTED_HPP_
