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

#include "sdrmap/lifted.hpp"

#include <cmath>

#include "sdrmap/errors.hpp"

namespace sdrmap {

LiftedSolution LiftedSolution::dense(Eigen::MatrixXd xbar) {
  if (xbar.rows() != xbar.cols()) throw DimensionMismatch("lifted matrix must be square");
  return LiftedSolution(Dense{std::move(xbar)});
}

LiftedSolution LiftedSolution::factored(Eigen::MatrixXd y) {
  return LiftedSolution(Factored{std::move(y)});
}

Eigen::Index LiftedSolution::dim() const {
  if (is_factored()) return std::get<Factored>(repr_).factor.rows();
  return std::get<Dense>(repr_).matrix.rows();
}

Eigen::Index LiftedSolution::rank_bound() const {
  if (is_factored()) return std::get<Factored>(repr_).factor.cols();
  return dim();
}

const Eigen::MatrixXd& LiftedSolution::dense_matrix() const {
  if (is_factored()) throw Error("solution is factored");
  return std::get<Dense>(repr_).matrix;
}

const Eigen::MatrixXd& LiftedSolution::factor() const {
  if (!is_factored()) throw Error("solution is dense");
  return std::get<Factored>(repr_).factor;
}

Eigen::MatrixXd LiftedSolution::to_dense() const {
  if (is_factored()) {
    const auto& y = factor();
    return y * y.transpose();
  }
  return dense_matrix();
}

double LiftedSolution::entry(Eigen::Index i, Eigen::Index j) const {
  if (is_factored()) return factor().row(i).dot(factor().row(j));
  return dense_matrix()(i, j);
}

Eigen::VectorXd LiftedSolution::border() const {
  const Eigen::Index n = dim();
  if (n == 0) return {};
  if (is_factored()) {
    const auto& y = factor();
    return y.bottomRows(n - 1) * y.row(0).transpose();
  }
  return dense_matrix().col(0).tail(n - 1);
}

Eigen::VectorXd LiftedSolution::apply(const Eigen::VectorXd& u) const {
  if (u.size() != dim()) throw DimensionMismatch("vector length does not match lifted dim");
  if (is_factored()) return factor() * (factor().transpose() * u);
  return dense_matrix() * u;
}

double LiftedSolution::frobenius_norm() const {
  if (is_factored()) return (factor().transpose() * factor()).norm();
  return dense_matrix().norm();
}

double frobenius_distance(const LiftedSolution& a, const LiftedSolution& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("lifted dims differ");
  if (a.is_factored() && b.is_factored()) {
    // ||YaYa^T - YbYb^T||^2 = ||Ya^TYa||^2 + ||Yb^TYb||^2 - 2||Ya^TYb||^2
    const double aa = (a.factor().transpose() * a.factor()).squaredNorm();
    const double bb = (b.factor().transpose() * b.factor()).squaredNorm();
    const double ab = (a.factor().transpose() * b.factor()).squaredNorm();
    return std::sqrt(std::max(0.0, aa + bb - 2.0 * ab));
  }
  return (a.to_dense() - b.to_dense()).norm();
}

}  // namespace sdrmap
