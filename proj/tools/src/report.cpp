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

#include "sdrmap_cli/report.hpp"

#include "sdrmap/errors.hpp"

namespace sdrmap::cli {

void fill_from_solve(RunReport& report, const SolveReport& solve) {
  report.objective = solve.objective;
  report.dual_objective = solve.dual_objective;
  report.gap = solve.gap;
  report.inf = solve.inf;
  report.primal_infeasibility = solve.primal_infeasibility;
  report.dual_infeasibility = solve.dual_infeasibility;
  report.iterations = solve.iterations;
  report.final_rank = solve.final_rank;
  report.eigval_ratio = solve.eigval_ratio;
  report.rank1_ratio = solve.rank1_ratio;
  report.converged = solve.converged;
  report.rank_insufficient = solve.rank_insufficient;
  report.restarts = solve.restarts;
}

nlohmann::json to_json(const RunReport& r) {
  nlohmann::json restarts = nlohmann::json::array();
  for (const RestartEvent& e : r.restarts)
    restarts.push_back({{"iteration", e.iteration}, {"old_rank", e.old_rank}, {"new_rank", e.new_rank}});
  nlohmann::json j = {
      {"instance", r.instance},
      {"solver", r.solver},
      {"objective", r.objective},
      {"dual_objective", r.dual_objective},
      {"gap", r.gap},
      {"inf", r.inf},
      {"primal_infeasibility", r.primal_infeasibility},
      {"dual_infeasibility", r.dual_infeasibility},
      {"iterations", r.iterations},
      {"final_rank", r.final_rank},
      {"eigval_ratio", r.eigval_ratio},
      {"rank1_ratio", r.rank1_ratio},
      {"converged", r.converged},
      {"rank_insufficient", r.rank_insufficient},
      {"restarts", restarts},
      {"assignment", r.assignment},
      {"rounded_energy", r.rounded_energy},
      {"rounding_rounds", r.rounding_rounds},
      {"brute_energy", r.brute_energy ? nlohmann::json(*r.brute_energy) : nlohmann::json()},
      {"wall_time_s", r.wall_time_s},
      {"config", r.config},
      {"seed", r.seed},
  };
  return j;
}

RunReport report_from_json(const nlohmann::json& j) {
  try {
    RunReport r;
    r.instance = j.at("instance").get<std::string>();
    r.solver = j.at("solver").get<std::string>();
    r.objective = j.at("objective").get<double>();
    r.dual_objective = j.at("dual_objective").get<double>();
    r.gap = j.at("gap").get<double>();
    r.inf = j.at("inf").get<double>();
    r.primal_infeasibility = j.at("primal_infeasibility").get<double>();
    r.dual_infeasibility = j.at("dual_infeasibility").get<double>();
    r.iterations = j.at("iterations").get<int>();
    r.final_rank = j.at("final_rank").get<int>();
    r.eigval_ratio = j.at("eigval_ratio").get<double>();
    r.rank1_ratio = j.at("rank1_ratio").get<double>();
    r.converged = j.at("converged").get<bool>();
    r.rank_insufficient = j.at("rank_insufficient").get<bool>();
    for (const auto& e : j.at("restarts"))
      r.restarts.push_back({e.at("iteration").get<int>(), e.at("old_rank").get<int>(),
                            e.at("new_rank").get<int>()});
    r.assignment = j.at("assignment").get<std::vector<int>>();
    r.rounded_energy = j.at("rounded_energy").get<double>();
    r.rounding_rounds = j.at("rounding_rounds").get<int>();
    if (!j.at("brute_energy").is_null()) r.brute_energy = j.at("brute_energy").get<double>();
    r.wall_time_s = j.at("wall_time_s").get<double>();
    r.config = j.at("config").get<std::map<std::string, double>>();
    r.seed = j.at("seed").get<std::uint64_t>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed report: ") + e.what());
  }
}

std::string dump_reports(const std::vector<RunReport>& reports) {
  if (reports.size() == 1) return to_json(reports.front()).dump(2) + "\n";
  nlohmann::json arr = nlohmann::json::array();
  for (const RunReport& r : reports) arr.push_back(to_json(r));
  return arr.dump(2) + "\n";
}

std::vector<RunReport> parse_reports(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("report is not valid JSON: ") + e.what());
  }
  std::vector<RunReport> out;
  if (j.is_array()) {
    for (const auto& item : j) out.push_back(report_from_json(item));
  } else {
    out.push_back(report_from_json(j));
  }
  return out;
}

}  // namespace sdrmap::cli
