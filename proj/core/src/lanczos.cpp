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

#include "sdrmap/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "sdrmap/errors.hpp"

namespace sdrmap {

ImplicitSymMatrix from_dense(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("matrix must be square");
  return {m.rows(), [&m](const Eigen::VectorXd& u, Eigen::VectorXd& out) { out.noalias() = m * u; }};
}

ImplicitSymMatrix low_rank_minus_sparse(const Eigen::MatrixXd& y, const SparseMatrix& s,
                                        double scale) {
  if (s.rows() != y.rows() || s.cols() != y.rows())
    throw DimensionMismatch("factor and sparse part disagree in dimension");
  return {y.rows(), [&y, &s, scale](const Eigen::VectorXd& u, Eigen::VectorXd& out) {
            out.noalias() = s * u;
            out *= -scale;
            if (y.cols() > 0) {
              const Eigen::VectorXd t = y.transpose() * u;
              out.noalias() += y * t;
            }
          }};
}

namespace {

// Removes the components along the first `cols` columns of V (two passes).
// Returns the norm of what is left.
double orthogonalize(const Eigen::MatrixXd& v, Index cols, Eigen::VectorXd& x) {
  if (cols > 0) {
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXd c = v.leftCols(cols).transpose() * x;
      x.noalias() -= v.leftCols(cols) * c;
    }
  }
  return x.norm();
}

}  // namespace

EigResult lanczos_top(const ImplicitSymMatrix& m, int r, const LanczosOptions& options) {
  const Index n = m.dim;
  if (r < 1 || r >= n)
    throw DimensionMismatch("lanczos_top needs 1 <= r < N (r=" + std::to_string(r) +
                            ", N=" + std::to_string(n) + ")");
  Index krylov = options.krylov_dim > 0 ? options.krylov_dim : std::max(2 * r + 10, 30);
  krylov = std::clamp<Index>(krylov, std::min<Index>(r + 1, n), n);
  const int max_iter = options.max_iter > 0 ? options.max_iter : std::max(8 * r, 60);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd V(n, krylov), W(n, krylov);
  Index j = 0;       // basis size
  Index expand = 0;  // next basis column whose image extends the space
  EigResult result;

  // Random unit vector orthogonal to the current basis; empty once the basis
  // spans the whole space.
  auto fresh_direction = [&]() -> Eigen::VectorXd {
    for (int attempt = 0; attempt < 8; ++attempt) {
      Eigen::VectorXd x(n);
      for (Index i = 0; i < n; ++i) x(i) = gauss(rng);
      const double before = x.norm();
      const double after = orthogonalize(V, j, x);
      if (after > 1e-8 * before) return x / after;
    }
    return {};
  };
  // Orthogonalizes x against the basis and appends it unless it is
  // numerically inside the span already.
  auto try_append = [&](Eigen::VectorXd x) {
    const double before = x.norm();
    if (before == 0.0) return false;
    const double after = orthogonalize(V, j, x);
    if (!(after > 1e-10 * before)) return false;
    V.col(j) = x / after;
    Eigen::VectorXd w(n);
    m.apply(V.col(j), w);
    W.col(j) = w;
    ++j;
    ++result.matvecs;
    return true;
  };

  if (options.initial_subspace != nullptr) {
    const auto& init = *options.initial_subspace;
    if (init.rows() != n) throw DimensionMismatch("initial subspace has wrong row count");
    for (Index c = 0; c < init.cols() && j < krylov - 1; ++c) try_append(init.col(c));
  }

  double best_residual = std::numeric_limits<double>::infinity();
  for (int restart = 0;; ++restart) {
    // Block Krylov expansion: columns are expanded in order, so a block
    // start vector or a block of restart residuals is handled like a single
    // Lanczos vector.
    while (j < krylov) {
      if (expand < j) {
        try_append(W.col(expand++));
        continue;
      }
      Eigen::VectorXd x = fresh_direction();
      if (x.size() == 0) break;
      try_append(std::move(x));
    }

    Eigen::MatrixXd h = V.leftCols(j).transpose() * W.leftCols(j);
    h = 0.5 * (h + h.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const Eigen::VectorXd theta = es.eigenvalues().reverse();
    const Eigen::MatrixXd q = es.eigenvectors().rowwise().reverse();

    const Index want = std::min<Index>(r, j);
    Eigen::MatrixXd ritz = V.leftCols(j) * q.leftCols(want);
    const Eigen::MatrixXd resid =
        W.leftCols(j) * q.leftCols(want) - ritz * theta.head(want).asDiagonal();
    const double norm_est = std::max({1.0, std::abs(theta(0)), std::abs(theta(j - 1))});
    double worst = 0.0;
    std::vector<Index> open;
    for (Index i = 0; i < want; ++i) {
      if (options.positive_only && theta(i) <= 0.0) break;
      const double res = resid.col(i).norm();
      worst = std::max(worst, res);
      if (res > options.tol * norm_est) open.push_back(i);
    }
    best_residual = std::min(best_residual, worst);
    const bool exhausted = (j == n);

    const bool give_up = restart >= max_iter && options.best_effort;
    if ((open.empty() || exhausted || give_up) && want == r) {
      result.values = theta.head(r);
      result.vectors = std::move(ritz);
      result.max_residual = worst;
      result.restarts = restart;
      result.converged = open.empty() || exhausted;
      result.basis = V.leftCols(j) * q.leftCols(std::min<Index>(j, r + (krylov - r) / 2));
      return result;
    }
    if (restart >= max_iter)
      throw ConvergenceError("Lanczos did not converge after " + std::to_string(restart) +
                                 " restarts (best residual " + std::to_string(best_residual) +
                                 ")",
                             best_residual);

    // Thick restart: keep the leading Ritz vectors and continue from the
    // residuals of the ones that have not converged.
    const Index room = std::max<Index>(1, krylov - static_cast<Index>(open.size()) - 1);
    const Index keep = std::max<Index>(
        want, std::min<Index>({j - 1, r + std::max<Index>(1, (krylov - r) / 2), room}));
    const Eigen::MatrixXd vk = V.leftCols(j) * q.leftCols(keep);
    const Eigen::MatrixXd wk = W.leftCols(j) * q.leftCols(keep);
    V.leftCols(keep) = vk;
    W.leftCols(keep) = wk;
    j = keep;
    expand = keep;
    for (Index i : open) {
      if (j >= krylov) break;
      try_append(resid.col(i));
    }
  }
}

PsdFactor psd_from_eigen(const Eigen::VectorXd& values, const Eigen::MatrixXd& vectors) {
  PsdFactor out;
  out.values = values;
  out.vectors = vectors;
  out.factor = Eigen::MatrixXd::Zero(vectors.rows(), vectors.cols());
  const double top = values.size() > 0 ? std::abs(values.maxCoeff()) : 0.0;
  const double zero = 1e-12 * std::max(1.0, top);
  for (Index c = 0; c < values.size(); ++c) {
    if (values(c) > zero) {
      out.factor.col(c) = vectors.col(c) * std::sqrt(values(c));
      ++out.positive;
    }
  }
  out.all_nonpositive = (out.positive == 0);
  return out;
}

PsdFactor psd_truncate(const ImplicitSymMatrix& m, int r, const LanczosOptions& options) {
  const EigResult eig = lanczos_top(m, r, options);
  return psd_from_eigen(eig.values, eig.vectors);
}

}  // namespace sdrmap
