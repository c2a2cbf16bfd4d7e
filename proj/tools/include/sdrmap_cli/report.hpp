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

#ifndef SDRMAP_CLI_REPORT_HPP_
#define SDRMAP_CLI_REPORT_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdrmap/admm.hpp"

namespace sdrmap::cli {

/// Machine-readable result of one solve. States are 0-based, as in UAI files.
struct RunReport {
  std::string instance;
  std::string solver;
  double objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;
  double inf = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  int final_rank = 0;
  double eigval_ratio = 0.0;
  double rank1_ratio = 0.0;
  bool converged = false;
  bool rank_insufficient = false;
  std::vector<RestartEvent> restarts;
  std::vector<int> assignment;
  double rounded_energy = 0.0;
  int rounding_rounds = 0;
  std::optional<double> brute_energy;
  double wall_time_s = 0.0;
  std::map<std::string, double> config;
  std::uint64_t seed = 0;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

/// Copies the solver-side fields.
void fill_from_solve(RunReport& report, const SolveReport& solve);

nlohmann::json to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::json& j);

/// One report is written as an object, several as an array.
std::string dump_reports(const std::vector<RunReport>& reports);
std::vector<RunReport> parse_reports(const std::string& text);

}  // namespace sdrmap::cli

#endif  // SDRMAP_CLI_REPORT_HPP_
