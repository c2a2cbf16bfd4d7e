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

#include "sdrmap_cli/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdrmap/admm.hpp"
#include "sdrmap/errors.hpp"
#include "sdrmap/generators.hpp"
#include "sdrmap/parallel.hpp"
#include "sdrmap/rounding.hpp"
#include "sdrmap/sdr_model.hpp"
#include "sdrmap/theory.hpp"
#include "sdrmap/uai.hpp"
#include "sdrmap_cli/report.hpp"

namespace sdrmap::cli {
namespace {

// Raised for bad input after parsing; maps to exit code 2.
struct InputError : Error {
  using Error::Error;
};

struct SolverFlags {
  std::string solver = "sdpad";
  std::optional<double> eps, mu_min, rho, delta, t_max, gap_tol;
  std::optional<int> k_max, r, r_max, max_rounds;
  std::uint64_t seed = 0;
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("--solver", f.solver, "sdpad or sdpad-lr")->capture_default_str();
  cmd->add_option("--eps", f.eps, "feasibility tolerance");
  cmd->add_option("--mu-min", f.mu_min, "initial penalty");
  cmd->add_option("--rho", f.rho, "penalty growth factor");
  cmd->add_option("--k-max", f.k_max, "iteration limit");
  cmd->add_option("--r", f.r, "initial rank (sdpad-lr)");
  cmd->add_option("--r-max", f.r_max, "rank cap (sdpad-lr)");
  cmd->add_option("--delta", f.delta, "rank-sufficiency ratio (sdpad-lr)");
  cmd->add_option("--gap-tol", f.gap_tol, "optional duality-gap requirement");
  cmd->add_option("--t-max", f.t_max, "rounding threshold");
  cmd->add_option("--max-rounds", f.max_rounds, "rounding re-solve limit");
  cmd->add_option("--seed", f.seed, "random seed")->capture_default_str();
}

struct Resolved {
  SolverKind kind;
  SolverConfig solver;
  RoundingConfig rounding;
};

Resolved resolve(const SolverFlags& f) {
  Resolved out;
  out.kind = parse_solver_kind(f.solver);
  out.solver = SolverConfig::defaults(out.kind);
  if (f.eps) out.solver.eps = *f.eps;
  if (f.mu_min) out.solver.mu_min = *f.mu_min;
  if (f.rho) out.solver.rho = *f.rho;
  if (f.k_max) out.solver.k_max = *f.k_max;
  if (f.r) out.solver.r_init = *f.r;
  if (f.r_max) out.solver.r_max = *f.r_max;
  if (f.delta) out.solver.delta = *f.delta;
  if (f.gap_tol) out.solver.gap_tol = *f.gap_tol;
  if (f.t_max) out.rounding.t_max = *f.t_max;
  if (f.max_rounds) out.rounding.max_rounds = *f.max_rounds;
  out.solver.seed = f.seed;
  out.solver.validate();
  out.rounding.validate();
  return out;
}

std::map<std::string, double> config_echo(const Resolved& c) {
  return {{"k_max", c.solver.k_max},       {"eps", c.solver.eps},
          {"mu_min", c.solver.mu_min},     {"rho", c.solver.rho},
          {"mu_max", c.solver.mu_max},     {"delta", c.solver.delta},
          {"r_init", c.solver.r_init},     {"r_max", c.solver.r_max},
          {"gap_tol", c.solver.gap_tol},   {"t_max", c.rounding.t_max},
          {"max_rounds", c.rounding.max_rounds}};
}

PairwiseMRF load_model(const std::string& path) {
  try {
    return to_mrf(read_uai_file(path));
  } catch (const ParseError& e) {
    throw InputError(path + ": " + e.what());
  } catch (const Error& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string format_assignment(const std::vector<int>& a) {
  std::ostringstream s;
  s << "(";
  for (std::size_t i = 0; i < a.size(); ++i) s << (i ? "," : "") << a[i];
  s << ")";
  return s.str();
}

struct SolveJob {
  RunReport report;
  std::string log;
  std::string error;
};

SolveJob solve_one(const std::string& path, const Resolved& cfg, std::uint64_t brute_cap) {
  SolveJob job;
  const auto t0 = std::chrono::steady_clock::now();
  const PairwiseMRF mrf = load_model(path);
  const SdrProblem problem = SdrProblem::build(mrf);
  const SolveOutput out = solve(problem, cfg.kind, cfg.solver);
  const RoundingResult rounded =
      round_solution(mrf, out.solution, cfg.rounding, make_solver(cfg.kind), cfg.solver);

  RunReport& r = job.report;
  r.instance = path;
  r.solver = to_string(cfg.kind);
  fill_from_solve(r, out.report);
  r.assignment = rounded.assignment.states;
  r.rounded_energy = energy(mrf, rounded.assignment);
  r.rounding_rounds = rounded.rounds;
  if (mrf.state_space_size() <= brute_cap)
    r.brute_energy = brute_force_map(mrf, brute_cap, 1).energy;
  r.config = config_echo(cfg);
  r.seed = cfg.solver.seed;
  r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::ostringstream log;
  log << std::setprecision(10) << path << ": solver=" << r.solver
      << " objective=" << r.objective << " gap=" << std::setprecision(3) << r.gap
      << " inf=" << r.inf << " iterations=" << r.iterations
      << " converged=" << (r.converged ? "yes" : "no") << std::setprecision(10)
      << " assignment=" << format_assignment(r.assignment) << " energy=" << r.rounded_energy;
  if (r.brute_energy) log << " optimum=" << *r.brute_energy;
  log << "\n";
  job.log = log.str();
  return job;
}

int cmd_solve(const std::vector<std::string>& models, const SolverFlags& flags,
              const std::string& report_path, int jobs, std::uint64_t brute_cap,
              std::ostream& out, std::ostream& err) {
  const Resolved cfg = resolve(flags);
  std::vector<SolveJob> results(models.size());
  std::vector<int> input_failed(models.size(), 0);
  parallel_for(static_cast<std::int64_t>(models.size()), std::max(1, jobs), [&](std::int64_t i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      results[k] = solve_one(models[k], cfg, brute_cap);
    } catch (const InputError& e) {
      results[k].error = e.what();
      input_failed[k] = 1;
    } catch (const Error& e) {
      results[k].error = models[k] + ": " + e.what();
    }
  });

  int code = kExitOk;
  std::vector<RunReport> reports;
  for (std::size_t k = 0; k < results.size(); ++k) {
    if (!results[k].error.empty()) {
      err << "error: " << results[k].error << "\n";
      code = std::max(code, input_failed[k] ? kExitInputError : kExitNotConverged);
      continue;
    }
    out << results[k].log;
    if (!results[k].report.converged) {
      err << "warning: " << models[k] << ": solver did not converge within "
          << results[k].report.iterations << " iterations\n";
      code = std::max(code, kExitNotConverged);
    }
    reports.push_back(results[k].report);
  }
  if (!report_path.empty() && !reports.empty()) {
    std::ofstream f(report_path);
    if (!f) {
      err << "error: cannot write report '" << report_path << "'\n";
      return kExitInputError;
    }
    f << dump_reports(reports);
  }
  return code;
}

nlohmann::json edges_json(const std::vector<Edge>& edges) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Edge& e : edges) arr.push_back({e.i, e.j});
  return arr;
}

std::vector<Edge> edges_from_json(const nlohmann::json& arr) {
  std::vector<Edge> edges;
  for (const auto& e : arr) edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
  return edges;
}

std::string sidecar_path(const std::string& model) { return model + ".json"; }

struct GenerateFlags {
  std::string kind;
  std::string out;
  int n = 10;
  int m = 3;
  std::uint64_t seed = 0;
  std::string graph = "complete";
  double p = 0.5;
  int rows = 0;
  int cols = 0;
  double unary_error = 0.0;
  double pairwise_error = 0.0;
  double p_obs = 0.5;
  double p_false = 0.0;
  double density = 0.5;
  double scale = 1.0;
};

int cmd_generate(const GenerateFlags& g, std::ostream& out) {
  nlohmann::json meta;
  PairwiseMRF mrf;
  if (g.kind == "labeling") {
    LabelingSpec spec;
    spec.n = g.n;
    spec.m = g.m;
    spec.seed = g.seed;
    spec.graph.family = parse_graph_family(g.graph);
    spec.graph.p = g.p;
    spec.graph.rows = g.rows;
    spec.graph.cols = g.cols;
    spec.unary_error_rate = g.unary_error;
    spec.pairwise_error_rate = g.pairwise_error;
    const PlantedInstance inst = gen_labeling(spec);
    mrf = inst.mrf;
    meta = {{"scenario", "labeling"},
            {"ground_truth", inst.ground_truth.states},
            {"true_edges", edges_json(inst.true_edges)},
            {"false_edges", edges_json(inst.false_edges)},
            {"gauge_degenerate", false},
            {"params", {{"n", g.n}, {"m", g.m}, {"seed", g.seed}, {"graph", g.graph},
                        {"unary_error", g.unary_error}, {"pairwise_error", g.pairwise_error}}}};
  } else if (g.kind == "rotation") {
    RotationSpec spec;
    spec.n = g.n;
    spec.m = g.m;
    spec.p_obs = g.p_obs;
    spec.p_false = g.p_false;
    spec.seed = g.seed;
    const PlantedInstance inst = gen_rotation_sync(spec);
    mrf = inst.mrf;
    meta = {{"scenario", "rotation"},
            {"ground_truth", inst.ground_truth.states},
            {"true_edges", edges_json(inst.true_edges)},
            {"false_edges", edges_json(inst.false_edges)},
            {"gauge_degenerate", inst.gauge_degenerate},
            {"params", {{"n", g.n}, {"m", g.m}, {"seed", g.seed}, {"p_obs", g.p_obs},
                        {"p_false", g.p_false}}}};
  } else if (g.kind == "random") {
    mrf = gen_random_mrf(g.n, g.m, g.density, g.scale, g.seed);
    meta = {{"scenario", "random"},
            {"params", {{"n", g.n}, {"m", g.m}, {"seed", g.seed}, {"density", g.density},
                        {"scale", g.scale}}}};
  } else {
    throw InputError("unknown generator '" + g.kind + "' (labeling, rotation or random)");
  }
  write_uai_file(g.out, from_mrf(mrf));
  std::ofstream(sidecar_path(g.out)) << meta.dump(2) << "\n";
  out << "wrote " << g.out << " (" << mrf.num_vars() << " variables, " << mrf.num_edges()
      << " edges) and " << sidecar_path(g.out) << "\n";
  return kExitOk;
}

int cmd_verify(const std::string& model, const std::string& check, const SolverFlags& flags,
               double tol, std::ostream& out, std::ostream& err) {
  if (check != "marginalization" && check != "sdr2" && check != "recovery")
    throw InputError("unknown check '" + check + "' (marginalization, sdr2 or recovery)");
  const Resolved cfg = resolve(flags);
  const PairwiseMRF mrf = load_model(model);
  nlohmann::json meta;
  if (check == "recovery") {
    try {
      meta = nlohmann::json::parse(read_text(sidecar_path(model)));
    } catch (const nlohmann::json::exception& e) {
      throw InputError(sidecar_path(model) + ": " + e.what());
    }
    if (!meta.contains("ground_truth"))
      throw InputError(sidecar_path(model) + " has no planted assignment");
  }
  const SdrProblem problem = SdrProblem::build(mrf);
  const SolveOutput sol = solve(problem, cfg.kind, cfg.solver);
  out << std::setprecision(3) << model << ": solver=" << to_string(cfg.kind)
      << " gap=" << sol.report.gap << " inf=" << sol.report.inf
      << " converged=" << (sol.report.converged ? "yes" : "no") << "\n";
  if (!sol.report.converged) {
    err << "warning: solver did not converge; check results are not certified\n";
  }
  bool passed = false;
  if (check == "marginalization") {
    const MarginalizationReport rep = check_marginalization(problem, sol.solution, tol);
    out << "marginal_residual=" << rep.max_marginal_residual
        << " null_residual=" << rep.max_null_residual << "\n";
    passed = rep.passed;
  } else if (check == "sdr2") {
    const Sdr2Solution s2 = to_sdr2(mrf, sol.solution);
    const Sdr2Feasibility f = check_sdr2_feasibility(mrf, s2, tol);
    out << "psd=" << f.psd_violation << " simplex=" << f.simplex_residual
        << " nonneg=" << f.nonneg_violation << " diagonal=" << f.diagonal_residual
        << " unit_diag=" << f.unit_diag_residual << "\n";
    passed = f.passed;
  } else {
    const RoundingResult r =
        round_solution(mrf, sol.solution, cfg.rounding, make_solver(cfg.kind), cfg.solver);
    Assignment truth{meta.at("ground_truth").get<std::vector<int>>()};
    const bool gauge = meta.value("gauge_degenerate", false);
    const int m = mrf.num_vars() > 0 ? mrf.num_states(0) : 1;
    passed = gauge ? equal_up_to_shift(r.assignment, truth, m) : r.assignment == truth;
    out << "recovered=" << (passed ? "yes" : "no")
        << " assignment=" << format_assignment(r.assignment.states) << "\n";
    if (meta.value("scenario", "") == "labeling") {
      PlantedInstance inst;
      inst.scenario = Scenario::kLabeling;
      inst.mrf = mrf;
      inst.ground_truth = truth;
      inst.true_edges = edges_from_json(meta.at("true_edges"));
      inst.false_edges = edges_from_json(meta.at("false_edges"));
      const RecoveryCertificate cert = labeling_condition(inst);
      out << "certificate=" << (cert.satisfied ? "satisfied" : "not satisfied")
          << " lambda2=" << cert.details.at("lambda2") << " d_inf=" << cert.details.at("d_inf")
          << "\n";
    }
  }
  out << "check " << check << ": " << (passed ? "PASS" : "FAIL") << "\n";
  if (!sol.report.converged) return kExitNotConverged;
  return passed ? kExitOk : kExitNotConverged;
}

int cmd_brute(const std::string& model, std::uint64_t cap, std::ostream& out) {
  const PairwiseMRF mrf = load_model(model);
  MapResult res;
  try {
    res = brute_force_map(mrf, cap);
  } catch (const OracleTooLarge& e) {
    throw InputError(e.what());
  }
  out << std::setprecision(12) << "assignment=" << format_assignment(res.assignment.states)
      << " energy=" << res.energy << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"MAP inference for pairwise MRFs by semidefinite relaxation"};
  app.require_subcommand(1);

  SolverFlags solve_flags;
  std::vector<std::string> models;
  std::string report_path;
  std::string evid;
  int jobs = 1;
  std::uint64_t brute_cap = 1'000'000;
  auto* solve_cmd = app.add_subcommand("solve", "solve and round one or more UAI models");
  solve_cmd->add_option("model", models, "UAI MARKOV files")->required();
  add_solver_flags(solve_cmd, solve_flags);
  solve_cmd->add_option("--report", report_path, "write a JSON report");
  solve_cmd->add_option("--jobs", jobs, "models solved in parallel")->capture_default_str();
  solve_cmd->add_option("--brute-cap", brute_cap,
                        "largest state space checked by enumeration")->capture_default_str();
  solve_cmd->add_option("--evid", evid, "evidence file (not supported)");

  GenerateFlags gen;
  auto* gen_cmd = app.add_subcommand("generate", "write a synthetic model and its planted answer");
  gen_cmd->add_option("kind", gen.kind, "labeling, rotation or random")->required();
  gen_cmd->add_option("--out", gen.out, "output UAI file")->required();
  gen_cmd->add_option("--n", gen.n, "variables")->capture_default_str();
  gen_cmd->add_option("--m", gen.m, "states per variable")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
  gen_cmd->add_option("--graph", gen.graph, "complete, grid, er")->capture_default_str();
  gen_cmd->add_option("--p", gen.p, "Erdos-Renyi edge probability")->capture_default_str();
  gen_cmd->add_option("--rows", gen.rows, "grid rows");
  gen_cmd->add_option("--cols", gen.cols, "grid columns");
  gen_cmd->add_option("--unary-error", gen.unary_error)->capture_default_str();
  gen_cmd->add_option("--pairwise-error", gen.pairwise_error)->capture_default_str();
  gen_cmd->add_option("--p-obs", gen.p_obs)->capture_default_str();
  gen_cmd->add_option("--p-false", gen.p_false)->capture_default_str();
  gen_cmd->add_option("--density", gen.density)->capture_default_str();
  gen_cmd->add_option("--scale", gen.scale)->capture_default_str();

  SolverFlags verify_flags;
  std::string verify_model;
  std::string check;
  double verify_tol = 1e-5;
  auto* verify_cmd = app.add_subcommand("verify", "solve and check a structural property");
  verify_cmd->add_option("model", verify_model, "UAI MARKOV file")->required();
  verify_cmd->add_option("--check", check, "marginalization, sdr2 or recovery")->required();
  verify_cmd->add_option("--tol", verify_tol, "residual tolerance")->capture_default_str();
  add_solver_flags(verify_cmd, verify_flags);

  std::string brute_model;
  std::uint64_t oracle_cap = kDefaultOracleCap;
  auto* brute_cmd = app.add_subcommand("brute", "exact MAP by enumeration");
  brute_cmd->add_option("model", brute_model, "UAI MARKOV file")->required();
  brute_cmd->add_option("--cap", oracle_cap, "largest state space enumerated")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (solve_cmd->parsed()) {
      if (!evid.empty()) throw InputError("evidence files are not supported");
      return cmd_solve(models, solve_flags, report_path, jobs, brute_cap, out, err);
    }
    if (gen_cmd->parsed()) return cmd_generate(gen, out);
    if (verify_cmd->parsed())
      return cmd_verify(verify_model, check, verify_flags, verify_tol, out, err);
    if (brute_cmd->parsed()) return cmd_brute(brute_model, oracle_cap, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const ConfigError& e) {
    err << "error: invalid configuration: " << e.what() << "\n";
    return kExitInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitNotConverged;
  }
  return kExitInputError;
}

}  // namespace sdrmap::cli
