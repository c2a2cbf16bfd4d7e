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

#ifndef SDRMAP_CLI_CLI_HPP_
#define SDRMAP_CLI_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace sdrmap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNotConverged = 1;
inline constexpr int kExitInputError = 2;

/// Entry point of the sdrmap tool. args excludes the program name. Exit
/// codes: 0 success, 1 solver non-convergence or a failed verification
/// check, 2 invalid input or configuration.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sdrmap::cli

#endif  // SDRMAP_CLI_CLI_HPP_
