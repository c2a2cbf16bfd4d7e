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

// Runs the rotation-recovery experiment of the acceptance suite and writes
// the observed rates as JSON. Usage: rotation_pilot <out.json>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "criteria_config.hpp"
#include "sdrmap/theory.hpp"

int main(int argc, char** argv) {
  using namespace sdrmap;
  using namespace sdrmap::acceptance;
  if (argc != 2) {
    std::cerr << "usage: rotation_pilot <out.json>\n";
    return 2;
  }
  nlohmann::json doc;
  doc["n"] = kRotationN;
  doc["m"] = kRotationM;
  doc["p_obs"] = kRotationPObs;
  doc["trials"] = kRotationTrials;
  doc["seed"] = kRotationSeed;
  doc["solver"] = "sdpad-lr";
  for (double pf : kRotationPFalse) {
    RotationSpec spec;
    spec.n = kRotationN;
    spec.m = kRotationM;
    spec.p_obs = kRotationPObs;
    spec.p_false = pf;
    spec.seed = kRotationSeed;
    RecoveryExperimentConfig cfg;
    const auto t0 = std::chrono::steady_clock::now();
    const RecoveryExperimentResult res = recovery_experiment(spec, kRotationTrials, cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    int beaten = 0;
    nlohmann::json trials = nlohmann::json::array();
    for (int t = 0; t < res.trials; ++t) {
      const double planted = res.planted_energy[static_cast<std::size_t>(t)];
      const double rounded = res.rounded_energy[static_cast<std::size_t>(t)];
      beaten += rounded > planted + 1e-9;
      trials.push_back({{"success", static_cast<bool>(res.per_trial[static_cast<std::size_t>(t)])},
                        {"planted_energy", std::isnan(planted) ? nlohmann::json() : nlohmann::json(planted)},
                        {"rounded_energy", std::isnan(rounded) ? nlohmann::json() : nlohmann::json(rounded)}});
    }
    doc["runs"].push_back({{"p_false", pf},
                           {"successes", res.successes},
                           {"success_rate", res.success_rate},
                           {"solver_failures", res.solver_failures},
                           {"planted_not_optimal", beaten},
                           {"seconds", secs},
                           {"per_trial", trials}});
    std::cout << "p_false=" << pf << " success_rate=" << res.success_rate
              << " planted_not_optimal=" << beaten << " seconds=" << secs << std::endl;
  }
  std::ofstream(argv[1]) << doc.dump(2) << "\n";
  return 0;
}
