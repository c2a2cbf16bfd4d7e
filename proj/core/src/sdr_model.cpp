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

#include "sdrmap/sdr_model.hpp"

#include <algorithm>
#include <string>

#include "sdrmap/errors.hpp"

namespace sdrmap {

namespace {

using Triplet = Eigen::Triplet<double>;

Index find_slot(const SparseMatrix& m, Index row, Index col) {
  const auto* outer = m.outerIndexPtr();
  const auto* inner = m.innerIndexPtr();
  const auto* begin = inner + outer[row];
  const auto* end = inner + outer[row + 1];
  const auto* it = std::lower_bound(begin, end, static_cast<int>(col));
  if (it == end || *it != col)
    throw Error("entry (" + std::to_string(row) + "," + std::to_string(col) +
                ") is outside the relaxation pattern");
  return static_cast<Index>(it - inner);
}

}  // namespace

SdrProblem SdrProblem::build(const PairwiseMRF& mrf, const SdrOptions& options) {
  SdrProblem p;
  p.layout_ = mrf.layout();
  p.edges_ = mrf.edges();
  const BlockLayout& lay = p.layout_;
  const int n = mrf.num_vars();
  p.dim_ = 1 + lay.total();

  // Shared symmetric pattern.
  std::vector<Triplet> pattern;
  pattern.emplace_back(0, 0, 0.0);
  for (Index q = 1; q < p.dim_; ++q) {
    pattern.emplace_back(0, q, 0.0);
    pattern.emplace_back(q, 0, 0.0);
  }
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < lay.size(i); ++a)
      for (int b = 0; b < lay.size(i); ++b)
        pattern.emplace_back(lay.lifted(i, a), lay.lifted(i, b), 0.0);
  for (const Edge& e : p.edges_)
    for (int a = 0; a < lay.size(e.i); ++a)
      for (int b = 0; b < lay.size(e.j); ++b) {
        pattern.emplace_back(lay.lifted(e.i, a), lay.lifted(e.j, b), 0.0);
        pattern.emplace_back(lay.lifted(e.j, b), lay.lifted(e.i, a), 0.0);
      }
  p.pattern_.resize(p.dim_, p.dim_);
  p.pattern_.setFromTriplets(pattern.begin(), pattern.end());
  p.pattern_.makeCompressed();
  const SparseMatrix& pat = p.pattern_;

  // Cost: unaries split over the border row/column, pairwise tables halved
  // over the two symmetric edge blocks.
  p.cost_ = pat;
  double* cv = p.cost_.valuePtr();
  std::fill(cv, cv + p.cost_.nonZeros(), 0.0);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < lay.size(i); ++a) {
      const double half = 0.5 * mrf.unary(i)(a);
      cv[find_slot(pat, 0, lay.lifted(i, a))] += half;
      cv[find_slot(pat, lay.lifted(i, a), 0)] += half;
    }
  for (std::size_t e = 0; e < p.edges_.size(); ++e) {
    const Edge& ed = p.edges_[e];
    const auto& w = mrf.pairwise(e);
    for (int a = 0; a < lay.size(ed.i); ++a)
      for (int b = 0; b < lay.size(ed.j); ++b) {
        const Index r = lay.lifted(ed.i, a), c = lay.lifted(ed.j, b);
        cv[find_slot(pat, r, c)] += 0.5 * w(a, b);
        cv[find_slot(pat, c, r)] += 0.5 * w(a, b);
      }
  }

  // Equality rows in fixed order: corner, simplex per variable, then per
  // variable the diagonal ties followed by the off-diagonal zeros.
  auto term = [&](Index r, Index c, double coeff) {
    return Term{r, c, find_slot(pat, r, c), coeff};
  };
  auto sym = [&](std::vector<Term>& row, Index r, Index c, double coeff) {
    row.push_back(term(r, c, 0.5 * coeff));
    row.push_back(term(c, r, 0.5 * coeff));
  };
  std::vector<double> rhs;
  p.constraints_.push_back({term(0, 0, 1.0)});
  p.kinds_.push_back(ConstraintKind::kCorner);
  rhs.push_back(1.0);
  for (int i = 0; i < n; ++i) {
    std::vector<Term> row;
    for (int a = 0; a < lay.size(i); ++a) sym(row, 0, lay.lifted(i, a), 1.0);
    p.constraints_.push_back(std::move(row));
    p.kinds_.push_back(ConstraintKind::kSimplex);
    rhs.push_back(1.0);
  }
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < lay.size(i); ++a) {
      const Index q = lay.lifted(i, a);
      std::vector<Term> row{term(q, q, 1.0)};
      sym(row, 0, q, -1.0);
      p.constraints_.push_back(std::move(row));
      p.kinds_.push_back(ConstraintKind::kDiagonalTie);
      rhs.push_back(0.0);
    }
    for (int a = 0; a < lay.size(i); ++a)
      for (int b = a + 1; b < lay.size(i); ++b) {
        std::vector<Term> row;
        sym(row, lay.lifted(i, a), lay.lifted(i, b), 1.0);
        p.constraints_.push_back(std::move(row));
        p.kinds_.push_back(ConstraintKind::kOffDiagonal);
        rhs.push_back(0.0);
      }
  }
  p.rhs_ = Eigen::Map<Eigen::VectorXd>(rhs.data(), static_cast<Index>(rhs.size()));

  if (options.edge_nonnegativity) {
    for (const Edge& e : p.edges_)
      for (int a = 0; a < lay.size(e.i); ++a)
        for (int b = 0; b < lay.size(e.j); ++b) {
          const Index r = lay.lifted(e.i, a), c = lay.lifted(e.j, b);
          p.nonneg_.push_back({r, c, find_slot(pat, r, c), find_slot(pat, c, r)});
        }
  }

  // A A^*: rows sharing a pattern slot interact.
  std::vector<std::vector<std::pair<Index, double>>> by_slot(
      static_cast<std::size_t>(pat.nonZeros()));
  for (Index k = 0; k < p.num_eq(); ++k)
    for (const Term& t : p.constraints_[static_cast<std::size_t>(k)])
      by_slot[static_cast<std::size_t>(t.slot)].emplace_back(k, t.coeff);
  std::vector<Triplet> gram;
  for (const auto& entries : by_slot)
    for (const auto& [k, ck] : entries)
      for (const auto& [l, cl] : entries) gram.emplace_back(k, l, ck * cl);
  Eigen::SparseMatrix<double> g(p.num_eq(), p.num_eq());
  g.setFromTriplets(gram.begin(), gram.end());
  g.makeCompressed();
  p.gram_ = g;
  auto factor = std::make_shared<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>(g);
  if (factor->info() != Eigen::Success)
    throw SolverError("A A^* is not positive definite");
  p.gram_factor_ = std::move(factor);
  return p;
}

void SdrProblem::check_dim(Index rows, Index cols) const {
  if (rows != dim_ || cols != dim_)
    throw DimensionMismatch("expected a " + std::to_string(dim_) + "x" + std::to_string(dim_) +
                            " matrix, got " + std::to_string(rows) + "x" +
                            std::to_string(cols));
}

Eigen::VectorXd SdrProblem::apply_A(const Eigen::MatrixXd& xbar) const {
  check_dim(xbar.rows(), xbar.cols());
  Eigen::VectorXd out(num_eq());
  for (Index k = 0; k < num_eq(); ++k) {
    double s = 0.0;
    for (const Term& t : constraints_[static_cast<std::size_t>(k)])
      s += t.coeff * xbar(t.row, t.col);
    out(k) = s;
  }
  return out;
}

Eigen::VectorXd SdrProblem::apply_A(const LiftedSolution& sol) const {
  if (!sol.is_factored()) return apply_A(sol.dense_matrix());
  const auto& y = sol.factor();
  check_dim(y.rows(), y.rows());
  Eigen::VectorXd out(num_eq());
  for (Index k = 0; k < num_eq(); ++k) {
    double s = 0.0;
    for (const Term& t : constraints_[static_cast<std::size_t>(k)])
      s += t.coeff * y.row(t.row).dot(y.row(t.col));
    out(k) = s;
  }
  return out;
}

SparseMatrix SdrProblem::combine(double cost_weight, const Eigen::VectorXd& y,
                                 const Eigen::VectorXd& z) const {
  if (y.size() != 0 && y.size() != num_eq())
    throw DimensionMismatch("dual y has length " + std::to_string(y.size()) + ", expected " +
                            std::to_string(num_eq()));
  if (z.size() != 0 && z.size() != num_nonneg())
    throw DimensionMismatch("dual z has length " + std::to_string(z.size()) + ", expected " +
                            std::to_string(num_nonneg()));
  SparseMatrix out = pattern_;
  double* v = out.valuePtr();
  const double* c = cost_.valuePtr();
  for (Index s = 0; s < out.nonZeros(); ++s) v[s] = cost_weight * c[s];
  if (y.size() != 0)
    for (Index k = 0; k < num_eq(); ++k)
      for (const Term& t : constraints_[static_cast<std::size_t>(k)])
        v[t.slot] += t.coeff * y(k);
  if (z.size() != 0)
    for (std::size_t e = 0; e < nonneg_.size(); ++e) {
      const double half = 0.5 * z(static_cast<Index>(e));
      v[nonneg_[e].upper_slot] -= half;
      v[nonneg_[e].lower_slot] -= half;
    }
  return out;
}

SparseMatrix SdrProblem::apply_Astar(const Eigen::VectorXd& y) const {
  if (y.size() != num_eq()) throw DimensionMismatch("dual y has wrong length");
  return combine(0.0, y, Eigen::VectorXd());
}

Eigen::VectorXd SdrProblem::apply_P(const Eigen::MatrixXd& xbar) const {
  check_dim(xbar.rows(), xbar.cols());
  Eigen::VectorXd out(num_nonneg());
  for (std::size_t e = 0; e < nonneg_.size(); ++e)
    out(static_cast<Index>(e)) = xbar(nonneg_[e].row, nonneg_[e].col);
  return out;
}

Eigen::VectorXd SdrProblem::apply_P(const LiftedSolution& sol) const {
  if (!sol.is_factored()) return apply_P(sol.dense_matrix());
  const auto& y = sol.factor();
  check_dim(y.rows(), y.rows());
  Eigen::VectorXd out(num_nonneg());
  for (std::size_t e = 0; e < nonneg_.size(); ++e)
    out(static_cast<Index>(e)) = y.row(nonneg_[e].row).dot(y.row(nonneg_[e].col));
  return out;
}

SparseMatrix SdrProblem::apply_Pstar(const Eigen::VectorXd& z) const {
  if (z.size() != num_nonneg()) throw DimensionMismatch("dual z has wrong length");
  SparseMatrix out = combine(0.0, Eigen::VectorXd(), -z);
  return out;
}

Eigen::MatrixXd SdrProblem::project_nonneg(const Eigen::MatrixXd& xbar) const {
  check_dim(xbar.rows(), xbar.cols());
  Eigen::MatrixXd out = xbar;
  for (const auto& e : nonneg_) {
    out(e.row, e.col) = std::max(0.0, out(e.row, e.col));
    out(e.col, e.row) = std::max(0.0, out(e.col, e.row));
  }
  return out;
}

Eigen::VectorXd SdrProblem::solve_gram(const Eigen::VectorXd& v) const {
  if (v.size() != num_eq()) throw DimensionMismatch("gram right-hand side has wrong length");
  Eigen::VectorXd out = gram_factor_->solve(v);
  return out;
}

double SdrProblem::objective(const LiftedSolution& sol) const {
  if (sol.dim() != dim_) throw DimensionMismatch("lifted dim mismatch");
  double s = 0.0;
  if (sol.is_factored()) {
    const auto& y = sol.factor();
    for (Index r = 0; r < cost_.outerSize(); ++r)
      for (SparseMatrix::InnerIterator it(cost_, r); it; ++it)
        if (it.value() != 0.0) s += it.value() * y.row(r).dot(y.row(it.col()));
  } else {
    const auto& x = sol.dense_matrix();
    for (Index r = 0; r < cost_.outerSize(); ++r)
      for (SparseMatrix::InnerIterator it(cost_, r); it; ++it) s += it.value() * x(r, it.col());
  }
  return s;
}

}  // namespace sdrmap
