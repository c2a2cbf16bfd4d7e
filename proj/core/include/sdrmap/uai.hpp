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

#ifndef SDRMAP_UAI_HPP_
#define SDRMAP_UAI_HPP_

#include <string>
#include <vector>

#include "sdrmap/mrf.hpp"

namespace sdrmap {

/// A MARKOV network in UAI text form. Tables are row-major over the scope
/// with the last scope variable changing fastest.
struct UaiModel {
  std::vector<int> cardinalities;
  std::vector<std::vector<int>> scopes;
  std::vector<std::vector<double>> tables;

  friend bool operator==(const UaiModel&, const UaiModel&) = default;
};

/// Parses UAI MARKOV text. Lines whose first token starts with 'c' are
/// comments. Throws ParseError with the offending line number.
UaiModel parse_uai(const std::string& text);
UaiModel read_uai_file(const std::string& path);

/// Inverse of parse_uai; numbers are printed with round-trip precision.
std::string print_uai(const UaiModel& model);
void write_uai_file(const std::string& path, const UaiModel& model);

inline constexpr double kProbabilityFloor = 1e-300;

/// Log-potentials: w = ln(max(p, 1e-300)). Factors on the same scope add up;
/// pairwise tables are transposed so rows index the smaller variable.
PairwiseMRF to_mrf(const UaiModel& model);

/// exp of the potentials, one factor per variable and one per edge.
UaiModel from_mrf(const PairwiseMRF& mrf);

}  // namespace sdrmap

#endif  // SDRMAP_UAI_HPP_
