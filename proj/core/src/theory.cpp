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

#include "sdrmap/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

#include <Eigen/Eigenvalues>

#include "sdrmap/errors.hpp"
#include "sdrmap/parallel.hpp"

namespace sdrmap {
namespace {

Eigen::MatrixXd block(const LiftedSolution& sol, Index r0, Index nr, Index c0, Index nc) {
  if (sol.is_factored()) {
    const Eigen::MatrixXd& y = sol.factor();
    return y.middleRows(r0, nr) * y.middleRows(c0, nc).transpose();
  }
  return sol.dense_matrix().block(r0, c0, nr, nc);
}

// Stacked vector of w_i + (sum_j W_ij 1 + sum_j W_ji^T 1) / 2.
Eigen::VectorXd stacked_wbar(const PairwiseMRF& mrf) {
  const BlockLayout& layout = mrf.layout();
  Eigen::VectorXd wbar(layout.total());
  for (int i = 0; i < mrf.num_vars(); ++i)
    wbar.segment(layout.offset(i), layout.size(i)) = mrf.unary(i);
  for (std::size_t e = 0; e < mrf.num_edges(); ++e) {
    const Edge& ed = mrf.edges()[e];
    const Eigen::MatrixXd& w = mrf.pairwise(e);
    wbar.segment(layout.offset(ed.i), layout.size(ed.i)) += 0.5 * w.rowwise().sum();
    wbar.segment(layout.offset(ed.j), layout.size(ed.j)) += 0.5 * w.colwise().sum().transpose();
  }
  return wbar;
}

}  // namespace

MarginalizationReport check_marginalization(const SdrProblem& problem,
                                            const LiftedSolution& sol, double tol) {
  if (sol.dim() != problem.dim()) throw DimensionMismatch("solution does not match problem");
  const BlockLayout& layout = problem.layout();
  MarginalizationReport rep;
  const Eigen::VectorXd x = sol.border();
  for (const Edge& e : problem.edges()) {
    const Index pi = 1 + layout.offset(e.i), pj = 1 + layout.offset(e.j);
    const Index mi = layout.size(e.i), mj = layout.size(e.j);
    const Eigen::MatrixXd xij = block(sol, pi, mi, pj, mj);
    const double ri = (xij.rowwise().sum() - x.segment(pi - 1, mi)).cwiseAbs().maxCoeff();
    const double rj =
        (xij.colwise().sum().transpose() - x.segment(pj - 1, mj)).cwiseAbs().maxCoeff();
    rep.max_marginal_residual = std::max({rep.max_marginal_residual, ri, rj});
  }
  for (int i = 0; i < layout.num_vars(); ++i) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(problem.dim());
    u(0) = 1.0;
    u.segment(1 + layout.offset(i), layout.size(i)).setConstant(-1.0);
    rep.max_null_residual = std::max(rep.max_null_residual, sol.apply(u).norm());
  }
  rep.passed = rep.max_marginal_residual <= tol && rep.max_null_residual <= tol;
  return rep;
}

Sdr2Solution to_sdr2(const PairwiseMRF& mrf, const LiftedSolution& sol) {
  const Index n = mrf.layout().total();
  if (sol.dim() != n + 1) throw DimensionMismatch("solution does not match model");
  const Eigen::MatrixXd xbar = sol.to_dense();
  const Eigen::VectorXd x = xbar.col(0).tail(n);
  const Eigen::MatrixXd big_x = xbar.bottomRightCorner(n, n);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  Sdr2Solution out;
  out.corner = xbar(0, 0);
  out.y = 2.0 * x - out.corner * ones;
  out.Y = 4.0 * big_x - 2.0 * (x * ones.transpose() + ones * x.transpose()) +
          out.corner * ones * ones.transpose();
  out.wbar = stacked_wbar(mrf);
  return out;
}

Eigen::MatrixXd from_sdr2(const Sdr2Solution& s2) {
  const Index n = s2.y.size();
  if (s2.Y.rows() != n || s2.Y.cols() != n) throw DimensionMismatch("Y does not match y");
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  const Eigen::VectorXd x = 0.5 * (s2.corner * ones + s2.y);
  Eigen::MatrixXd xbar(n + 1, n + 1);
  xbar(0, 0) = s2.corner;
  xbar.col(0).tail(n) = x;
  xbar.row(0).tail(n) = x.transpose();
  xbar.bottomRightCorner(n, n) =
      0.25 * (s2.Y + 2.0 * (x * ones.transpose() + ones * x.transpose()) -
              s2.corner * ones * ones.transpose());
  return xbar;
}

double sdr2_objective(const PairwiseMRF& mrf, const Sdr2Solution& s2) {
  const BlockLayout& layout = mrf.layout();
  if (s2.y.size() != layout.total()) throw DimensionMismatch("y does not match model");
  double obj = s2.wbar.dot(s2.y);
  for (std::size_t e = 0; e < mrf.num_edges(); ++e) {
    const Edge& ed = mrf.edges()[e];
    obj += 0.5 * mrf.pairwise(e)
                     .cwiseProduct(s2.Y.block(layout.offset(ed.i), layout.offset(ed.j),
                                              layout.size(ed.i), layout.size(ed.j)))
                     .sum();
  }
  return obj;
}

Sdr2Feasibility check_sdr2_feasibility(const PairwiseMRF& mrf, const Sdr2Solution& s2,
                                       double tol) {
  const BlockLayout& layout = mrf.layout();
  const Index n = layout.total();
  if (s2.y.size() != n || s2.Y.rows() != n || s2.Y.cols() != n)
    throw DimensionMismatch("SDR2 solution does not match model");
  Sdr2Feasibility f;

  Eigen::MatrixXd bordered(n + 1, n + 1);
  bordered(0, 0) = s2.corner;
  bordered.col(0).tail(n) = s2.y;
  bordered.row(0).tail(n) = s2.y.transpose();
  bordered.bottomRightCorner(n, n) = s2.Y;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(bordered, Eigen::EigenvaluesOnly);
  f.psd_violation = std::max(0.0, -eig.eigenvalues()(0));

  for (int i = 0; i < mrf.num_vars(); ++i) {
    const Index o = layout.offset(i);
    const int m = layout.size(i);
    const Eigen::VectorXd yi = s2.y.segment(o, m);
    f.simplex_residual = std::max(f.simplex_residual, std::abs(yi.sum() - (2.0 - m)));
    const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(m, m);
    const Eigen::MatrixXd lhs = 0.5 * (ones + yi * Eigen::RowVectorXd::Ones(m) +
                                       Eigen::VectorXd::Ones(m) * yi.transpose() +
                                       s2.Y.block(o, o, m, m));
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(m, m);
    rhs.diagonal() = Eigen::VectorXd::Ones(m) + yi;
    f.diagonal_residual = std::max(f.diagonal_residual, (lhs - rhs).cwiseAbs().maxCoeff());
    f.unit_diag_residual =
        std::max(f.unit_diag_residual,
                 (s2.Y.block(o, o, m, m).diagonal().array() - 1.0).abs().maxCoeff());
  }
  for (const Edge& e : mrf.edges()) {
    const Index oi = layout.offset(e.i), oj = layout.offset(e.j);
    const int mi = layout.size(e.i), mj = layout.size(e.j);
    const Eigen::MatrixXd shifted =
        s2.Y.block(oi, oj, mi, mj) + Eigen::VectorXd::Ones(mi) * s2.y.segment(oj, mj).transpose() +
        s2.y.segment(oi, mi) * Eigen::RowVectorXd::Ones(mj) + Eigen::MatrixXd::Ones(mi, mj);
    f.nonneg_violation = std::max(f.nonneg_violation, -shifted.minCoeff());
  }
  f.max_residual = std::max({f.psd_violation, f.simplex_residual, f.nonneg_violation,
                             f.diagonal_residual, f.unit_diag_residual});
  f.passed = f.max_residual <= tol;
  return f;
}

double algebraic_connectivity(int n, const std::vector<Edge>& edges) {
  if (n < 2) return 0.0;
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : edges) {
    if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n || e.i == e.j)
      throw InvalidModel("edge out of range");
    lap(e.i, e.i) += 1.0;
    lap(e.j, e.j) += 1.0;
    lap(e.i, e.j) -= 1.0;
    lap(e.j, e.i) -= 1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lap, Eigen::EigenvaluesOnly);
  return std::max(0.0, eig.eigenvalues()(1));
}

RecoveryCertificate labeling_condition(const PlantedInstance& instance) {
  const PairwiseMRF& mrf = instance.mrf;
  const int n = mrf.num_vars();
  std::vector<Eigen::VectorXd> d;
  for (int i = 0; i < n; ++i) d.push_back(-mrf.unary(i));
  for (const Edge& e : instance.false_edges) {
    const auto idx = mrf.find_edge(e.i, e.j);
    if (!idx) throw InvalidModel("false edge is not in the model");
    const Edge& stored = mrf.edges()[*idx];
    const Eigen::MatrixXd& w = mrf.pairwise(*idx);
    d[static_cast<std::size_t>(stored.i)] += w.rowwise().sum();
    d[static_cast<std::size_t>(stored.j)] += w.colwise().sum().transpose();
  }
  double d_inf = 0.0;
  for (const auto& v : d)
    if (v.size() > 0) d_inf = std::max(d_inf, v.cwiseAbs().maxCoeff());
  const double lambda2 = algebraic_connectivity(n, instance.true_edges);

  RecoveryCertificate cert;
  cert.scenario = RecoveryScenario::kLabeling;
  cert.margin = lambda2 - 2.0 * d_inf;
  cert.satisfied = cert.margin > 0.0;
  cert.details["lambda2"] = lambda2;
  cert.details["d_inf"] = d_inf;
  return cert;
}

double rotation_bound(double m, double delta) {
  if (!(m >= 2.0)) throw ConfigError("rotation bound needs m >= 2");
  if (delta < 0.0 || delta > 1.0) throw ConfigError("delta must lie in [0,1]");
  return (1.0 - delta) / (1.0 + delta) * 2.0 / (3.0 - 1.0 / m);
}

bool sampling_ok(int n, int m, double p_obs, double p_false, double c) {
  if (n < 2 || m < 2) throw ConfigError("sampling condition needs n >= 2 and m >= 2");
  return p_false * p_obs / m > c * std::log(static_cast<double>(m) * n) / n;
}

RecoveryCertificate rotation_condition(const RotationSpec& spec, double delta, double c) {
  spec.validate();
  RecoveryCertificate cert;
  cert.scenario = RecoveryScenario::kRotation;
  const double bound = rotation_bound(spec.m, delta);
  const bool sampled = sampling_ok(spec.n, spec.m, spec.p_obs, spec.p_false, c);
  cert.margin = bound - spec.p_false;
  cert.satisfied = cert.margin > 0.0 && sampled;
  cert.details["bound"] = bound;
  cert.details["sampling_ok"] = sampled ? 1.0 : 0.0;
  return cert;
}

RecoveryExperimentResult recovery_experiment(const GeneratorSpec& spec, int trials,
                                             const RecoveryExperimentConfig& config) {
  if (trials < 0) throw ConfigError("trial count must be non-negative");
  config.solver_config.validate();
  config.rounding.validate();
  std::vector<int> outcome(static_cast<std::size_t>(trials), 0);  // 1 success, -1 solver error
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> planted(static_cast<std::size_t>(trials), nan);
  std::vector<double> rounded(static_cast<std::size_t>(trials), nan);
  const ReducedSolver solver = make_solver(config.solver);
  const int threads = config.threads > 0 ? config.threads : thread_count();

  parallel_for(trials, threads, [&](std::int64_t t) {
    PlantedInstance inst = std::visit(
        [&](auto s) {
          s.seed = mix_seed(s.seed, static_cast<std::uint64_t>(t));
          if constexpr (std::is_same_v<decltype(s), LabelingSpec>) return gen_labeling(s);
          else return gen_rotation_sync(s);
        },
        spec);
    SolverConfig sc = config.solver_config;
    sc.seed = mix_seed(sc.seed, static_cast<std::uint64_t>(t));
    sc.progress = nullptr;
    try {
      const SdrProblem problem = SdrProblem::build(inst.mrf);
      const SolveOutput out = solver(problem, sc);
      const RoundingResult r = round_solution(inst.mrf, out.solution, config.rounding, solver, sc);
      const int m = inst.mrf.num_vars() > 0 ? inst.mrf.num_states(0) : 1;
      const bool ok = inst.gauge_degenerate
                          ? equal_up_to_shift(r.assignment, inst.ground_truth, m)
                          : r.assignment == inst.ground_truth;
      outcome[static_cast<std::size_t>(t)] = ok ? 1 : 0;
      planted[static_cast<std::size_t>(t)] = energy(inst.mrf, inst.ground_truth);
      rounded[static_cast<std::size_t>(t)] = energy(inst.mrf, r.assignment);
    } catch (const SolverError&) {
      outcome[static_cast<std::size_t>(t)] = -1;
    } catch (const ConvergenceError&) {
      outcome[static_cast<std::size_t>(t)] = -1;
    }
  });

  RecoveryExperimentResult res;
  res.trials = trials;
  for (int o : outcome) {
    res.per_trial.push_back(o == 1);
    res.successes += o == 1;
    res.solver_failures += o == -1;
  }
  res.planted_energy = std::move(planted);
  res.rounded_energy = std::move(rounded);
  res.success_rate = trials > 0 ? static_cast<double>(res.successes) / trials : 0.0;
  return res;
}

}  // namespace sdrmap
