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

#include "sdrmap/admm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sdrmap/diagnostics.hpp"
#include "sdrmap/errors.hpp"
#include "sdrmap/lanczos.hpp"
#include "sdrmap/parallel.hpp"

namespace sdrmap {

std::string to_string(SolverKind kind) {
  return kind == SolverKind::kSdpad ? "sdpad" : "sdpad-lr";
}

SolverKind parse_solver_kind(const std::string& name) {
  if (name == "sdpad") return SolverKind::kSdpad;
  if (name == "sdpad-lr" || name == "sdpad_lr") return SolverKind::kSdpadLr;
  throw ConfigError("unknown solver '" + name + "' (expected sdpad or sdpad-lr)");
}

SolverConfig SolverConfig::defaults(SolverKind kind) {
  SolverConfig c;
  c.k_max = kind == SolverKind::kSdpad ? 1000 : 5000;
  return c;
}

void SolverConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  require(k_max > 0, "k_max must be positive");
  require(eps > 0.0 && std::isfinite(eps), "eps must be positive");
  require(mu_min > 0.0 && std::isfinite(mu_min), "mu_min must be positive");
  require(rho > 1.0 && std::isfinite(rho), "rho must exceed 1");
  require(mu_max >= mu_min, "mu_max must be at least mu_min");
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  require(r_init >= 1, "r_init must be at least 1");
  require(r_init <= r_max, "r_init must not exceed r_max");
  require(restart_period >= 1, "restart_period must be positive");
  require(eig_tol > 0.0, "eig_tol must be positive");
  require(eig_max_restarts >= 0, "eig_max_restarts must be non-negative");
  require(gap_tol >= 0.0, "gap_tol must be non-negative");
  require(k_log >= 0, "k_log must be non-negative");
}

DualUpdate dual_closed_forms(const SdrProblem& problem, const Eigen::VectorXd& a_temp,
                             const Eigen::VectorXd& p_temp, const Eigen::VectorXd& y,
                             const Eigen::VectorXd& z, double mu) {
  if (a_temp.size() != problem.num_eq() || y.size() != problem.num_eq())
    throw DimensionMismatch("equality dual has wrong length");
  if (p_temp.size() != problem.num_nonneg() || z.size() != problem.num_nonneg())
    throw DimensionMismatch("nonnegativity dual has wrong length");
  DualUpdate out;
  out.y = y + mu * problem.solve_gram(a_temp - problem.rhs());
  out.z = (z - mu * p_temp).cwiseMax(0.0);
  return out;
}

namespace {

struct DenseProjection {
  Eigen::MatrixXd positive;
  Eigen::VectorXd eigenvalues;  // ascending
  Eigen::MatrixXd eigenvectors;
};

DenseProjection project_psd(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw SolverError("dense eigendecomposition failed");
  DenseProjection out;
  out.eigenvalues = es.eigenvalues();
  out.eigenvectors = es.eigenvectors();
  const double top = out.eigenvalues.cwiseAbs().maxCoeff();
  const double zero = 1e-12 * std::max(1.0, top);
  Eigen::VectorXd lam = out.eigenvalues;
  for (Index i = 0; i < lam.size(); ++i) lam(i) = lam(i) > zero ? lam(i) : 0.0;
  out.positive = out.eigenvectors * lam.asDiagonal() * out.eigenvectors.transpose();
  out.positive = 0.5 * (out.positive + out.positive.transpose()).eval();
  return out;
}

Eigen::MatrixXd shifted(const Eigen::MatrixXd& previous, const SparseMatrix& g, double mu) {
  Eigen::MatrixXd m = previous;
  for (Index r = 0; r < g.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(g, r); it; ++it) m(r, it.col()) -= it.value() / mu;
  return m;
}

double relative_gap(double primal, double dual) {
  return std::abs(dual - primal) / (1.0 + std::abs(dual) + std::abs(primal));
}

struct StopState {
  bool feasible = false;
  bool gap_ok = true;
};

StopState check_stop(const SolverConfig& cfg, double primal_inf, double dual_inf, double gap) {
  StopState s;
  const double measure = cfg.stop_rule == StopRule::kBoth ? std::max(primal_inf, dual_inf)
                                                          : std::min(primal_inf, dual_inf);
  s.feasible = measure <= cfg.eps;
  s.gap_ok = cfg.gap_tol <= 0.0 || gap <= cfg.gap_tol;
  return s;
}

void finalize_report(const SdrProblem& problem, const LiftedSolution& sol,
                     const DualCertificate& duals, SolveReport& report) {
  const Diagnostics d = diagnostics(problem, sol, duals);
  report.objective = d.primal_objective;
  report.dual_objective = d.dual_objective;
  report.gap = d.gap;
  report.inf = d.inf;
}

}  // namespace

Eigen::MatrixXd primal_step_dense(const SdrProblem& problem, const Eigen::MatrixXd& previous,
                                  const Eigen::VectorXd& y, const Eigen::VectorXd& z,
                                  double mu) {
  const SparseMatrix g = problem.combine(-1.0, y, z);
  return project_psd(shifted(previous, g, mu)).positive;
}

SolveOutput sdpad_solve(const SdrProblem& problem, const SolverConfig& cfg) {
  cfg.validate();
  const Index n = problem.dim();
  const Index meq = problem.num_eq();
  const Index mnn = problem.num_nonneg();

  Eigen::MatrixXd x1 = Eigen::MatrixXd::Zero(n, n);  // X^{k-1}
  Eigen::MatrixXd x2 = Eigen::MatrixXd::Zero(n, n);  // X^{k-2}
  Eigen::VectorXd a1 = Eigen::VectorXd::Zero(meq), a2 = a1;
  Eigen::VectorXd p1 = Eigen::VectorXd::Zero(mnn), p2 = p1;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(meq);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(mnn);
  double mu = cfg.mu_min;
  double mu_used = mu;

  SolveOutput out;
  SolveReport& report = out.report;
  DenseProjection last;

  for (int k = 1; k <= cfg.k_max; ++k) {
    const DualUpdate du = dual_closed_forms(problem, 2.0 * a1 - a2, 2.0 * p1 - p2, y, z, mu);
    y = du.y;
    z = du.z;
    const SparseMatrix g = problem.combine(-1.0, y, z);
    last = project_psd(shifted(x1, g, mu));

    x2.swap(x1);
    x1 = last.positive;
    a2 = a1;
    p2 = p1;
    a1 = problem.apply_A(x1);
    p1 = problem.apply_P(x1);
    mu_used = mu;

    IterationRecord rec;
    rec.iteration = k;
    rec.objective = problem.objective(LiftedSolution::dense(x1));
    rec.dual_objective = problem.rhs().dot(y);
    rec.primal_infeasibility = (a1 - problem.rhs()).norm();
    rec.dual_infeasibility = mu * (x1 - x2).norm();
    rec.mu = mu;
    rec.rank = static_cast<int>((last.eigenvalues.array() > 0.0).count());
    report.trace.push_back(rec);
    report.iterations = k;
    if (cfg.k_log > 0 && cfg.progress && k % cfg.k_log == 0)
      cfg.progress({k, rec.objective, rec.primal_infeasibility, mu, rec.rank});

    const double gap = relative_gap(rec.objective, rec.dual_objective);
    const StopState stop = check_stop(cfg, rec.primal_infeasibility, rec.dual_infeasibility, gap);
    if (stop.feasible && stop.gap_ok) {
      report.converged = true;
      break;
    }
    mu = std::min(mu * cfg.rho, cfg.mu_max);
  }

  const IterationRecord& tail = report.trace.back();
  report.primal_infeasibility = tail.primal_infeasibility;
  report.dual_infeasibility = tail.dual_infeasibility;

  // Spectrum of the final iterate.
  Eigen::VectorXd lam = last.eigenvalues.reverse().cwiseMax(0.0);
  const double top = lam.size() > 0 ? lam(0) : 0.0;
  report.rank1_ratio = (top > 0.0 && lam.size() > 1) ? lam(1) / top : 0.0;
  report.eigval_ratio = report.rank1_ratio;
  report.final_rank = top > 0.0 ? static_cast<int>((lam.array() > cfg.delta * top).count()) : 0;

  Eigen::VectorXd neg = (-last.eigenvalues).cwiseMax(0.0);
  Eigen::MatrixXd slack = mu_used * last.eigenvectors * neg.asDiagonal() *
                          last.eigenvectors.transpose();
  out.duals.y = y;
  out.duals.z = z;
  out.duals.mu = mu_used;
  out.duals.slack = 0.5 * (slack + slack.transpose());
  out.solution = LiftedSolution::dense(std::move(x1));
  finalize_report(problem, out.solution, out.duals, report);
  return out;
}

namespace {

struct LowRankStep {
  Eigen::MatrixXd factor;   // compact: only positive columns
  Eigen::VectorXd values;   // top-r eigenvalues of V, descending
  Eigen::MatrixXd vectors;  // matching eigenvectors
  Eigen::MatrixXd basis;    // wider Ritz basis, for warm starts
  bool exact = true;        // eigensolver met its tolerance
};

LowRankStep lowrank_projection(const Eigen::MatrixXd& y_prev, const SparseMatrix& g, double mu,
                               int r, double eig_tol, int eig_restarts, std::uint64_t seed,
                               const Eigen::MatrixXd* warm) {
  const Index n = y_prev.rows();
  PsdFactor f;
  LowRankStep out;
  if (r >= n - 1) {
    // Tiny problems: the full spectrum is cheaper than a Krylov solve.
    Eigen::MatrixXd v = y_prev * y_prev.transpose();
    for (Index row = 0; row < g.outerSize(); ++row)
      for (SparseMatrix::InnerIterator it(g, row); it; ++it) v(row, it.col()) -= it.value() / mu;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (v + v.transpose()));
    if (es.info() != Eigen::Success) throw SolverError("dense eigendecomposition failed");
    const Index keep = std::min<Index>(r, n);
    f = psd_from_eigen(es.eigenvalues().reverse().head(keep),
                       es.eigenvectors().rowwise().reverse().leftCols(keep));
  } else {
    const ImplicitSymMatrix op = low_rank_minus_sparse(y_prev, g, 1.0 / mu);
    LanczosOptions opts;
    opts.tol = eig_tol;
    opts.max_iter = eig_restarts;
    opts.seed = seed;
    opts.positive_only = true;
    opts.best_effort = true;
    opts.initial_subspace = (warm != nullptr && warm->rows() == n && warm->cols() > 0) ? warm : nullptr;
    EigResult eig = lanczos_top(op, r, opts);
    out.exact = eig.converged;
    out.basis = std::move(eig.basis);
    f = psd_from_eigen(eig.values, eig.vectors);
  }
  out.values = f.values;
  out.vectors = f.vectors;
  out.factor.resize(n, f.positive);
  Index c = 0;
  for (Index j = 0; j < f.factor.cols(); ++j)
    if (f.values(j) > 0.0 && f.factor.col(j).squaredNorm() > 0.0) out.factor.col(c++) = f.factor.col(j);
  out.factor.conservativeResize(n, c);
  return out;
}

Eigen::MatrixXd as_factor(const LiftedSolution& sol) {
  if (sol.is_factored()) return sol.factor();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sol.dense_matrix());
  const Eigen::VectorXd lam = es.eigenvalues();
  const double zero = 1e-12 * std::max(1.0, lam.cwiseAbs().maxCoeff());
  Eigen::MatrixXd y(sol.dim(), 0);
  for (Index i = lam.size() - 1; i >= 0; --i) {
    if (lam(i) <= zero) break;
    y.conservativeResize(Eigen::NoChange, y.cols() + 1);
    y.col(y.cols() - 1) = es.eigenvectors().col(i) * std::sqrt(lam(i));
  }
  return y;
}

}  // namespace

LiftedSolution primal_step_lowrank(const SdrProblem& problem, const LiftedSolution& previous,
                                   const Eigen::VectorXd& y, const Eigen::VectorXd& z, double mu,
                                   int r, std::uint64_t seed) {
  if (previous.dim() != problem.dim()) throw DimensionMismatch("lifted dim mismatch");
  const SparseMatrix g = problem.combine(-1.0, y, z);
  const Eigen::MatrixXd yprev = as_factor(previous);
  LowRankStep s = lowrank_projection(yprev, g, mu, r, 1e-12, 0, seed, nullptr);
  return LiftedSolution::factored(std::move(s.factor));
}

SolveOutput sdpad_lr_solve(const SdrProblem& problem, const SolverConfig& cfg) {
  cfg.validate();
  const Index n = problem.dim();
  const Index meq = problem.num_eq();
  const Index mnn = problem.num_nonneg();

  Eigen::MatrixXd y1(n, 0), y2(n, 0);  // factors of X^{k-1}, X^{k-2}
  Eigen::VectorXd a1 = Eigen::VectorXd::Zero(meq), a2 = a1;
  Eigen::VectorXd p1 = Eigen::VectorXd::Zero(mnn), p2 = p1;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(meq);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(mnn);
  double mu = cfg.mu_min;
  double mu_used = mu;
  int r = cfg.r_init;
  Eigen::MatrixXd warm;
  Eigen::VectorXd last_values;

  SolveOutput out;
  SolveReport& report = out.report;
  double ratio = 0.0;

  for (int k = 1; k <= cfg.k_max; ++k) {
    const DualUpdate du = dual_closed_forms(problem, 2.0 * a1 - a2, 2.0 * p1 - p2, y, z, mu);
    y = du.y;
    z = du.z;
    const SparseMatrix g = problem.combine(-1.0, y, z);
    LowRankStep step = lowrank_projection(y1, g, mu, std::max(1, std::min<int>(r, static_cast<int>(n))),
                                          cfg.eig_tol, cfg.eig_max_restarts, mix_seed(cfg.seed, static_cast<std::uint64_t>(k)),
                                          &warm);
    warm = step.basis.cols() > 0 ? std::move(step.basis) : step.vectors;
    report.inexact_eigensolves += step.exact ? 0 : 1;
    last_values = step.values;

    y2.swap(y1);
    y1 = std::move(step.factor);
    a2 = a1;
    p2 = p1;
    const LiftedSolution cur = LiftedSolution::factored(y1);
    a1 = problem.apply_A(cur);
    p1 = problem.apply_P(cur);
    mu_used = mu;

    const double lam_max = last_values.size() > 0 ? std::max(0.0, last_values(0)) : 0.0;
    const double lam_min = last_values.size() > 0
                               ? std::max(0.0, last_values(last_values.size() - 1))
                               : 0.0;
    ratio = lam_max > 0.0 ? lam_min / lam_max : 0.0;
    const bool rank_ok = lam_min <= cfg.delta * lam_max;

    IterationRecord rec;
    rec.iteration = k;
    rec.objective = problem.objective(cur);
    rec.dual_objective = problem.rhs().dot(y);
    rec.primal_infeasibility = (a1 - problem.rhs()).norm();
    rec.dual_infeasibility =
        mu * frobenius_distance(cur, LiftedSolution::factored(y2));
    rec.mu = mu;
    rec.rank = static_cast<int>(y1.cols());
    report.trace.push_back(rec);
    report.iterations = k;
    if (cfg.k_log > 0 && cfg.progress && k % cfg.k_log == 0)
      cfg.progress({k, rec.objective, rec.primal_infeasibility, mu, rec.rank});

    const double gap = relative_gap(rec.objective, rec.dual_objective);
    const StopState stop = check_stop(cfg, rec.primal_infeasibility, rec.dual_infeasibility, gap);
    if (rank_ok && stop.feasible && stop.gap_ok) {
      report.converged = true;
      break;
    }
    mu = std::min(mu * cfg.rho, cfg.mu_max);
    if (k % cfg.restart_period == 0 && !rank_ok) {
      const int next = std::min(cfg.r_max, 2 * r);
      if (next != r) report.restarts.push_back({k, r, next});
      r = next;
      mu = cfg.mu_min;
    }
  }

  const IterationRecord& tail = report.trace.back();
  report.primal_infeasibility = tail.primal_infeasibility;
  report.dual_infeasibility = tail.dual_infeasibility;
  report.final_rank = static_cast<int>(y1.cols());
  report.eigval_ratio = ratio;
  if (last_values.size() > 1 && last_values(0) > 0.0)
    report.rank1_ratio = std::max(0.0, last_values(1)) / last_values(0);
  else
    report.rank1_ratio = 0.0;
  report.rank_insufficient = (r >= cfg.r_max) && ratio > cfg.delta;

  out.duals.y = y;
  out.duals.z = z;
  out.duals.mu = mu_used;
  out.duals.previous = LiftedSolution::factored(y2);
  out.solution = LiftedSolution::factored(std::move(y1));
  finalize_report(problem, out.solution, out.duals, report);
  return out;
}

SolveOutput solve(const SdrProblem& problem, SolverKind kind, const SolverConfig& config) {
  return kind == SolverKind::kSdpad ? sdpad_solve(problem, config)
                                    : sdpad_lr_solve(problem, config);
}

}  // namespace sdrmap
