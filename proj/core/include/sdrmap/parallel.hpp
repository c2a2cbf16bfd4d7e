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

#ifndef SDRMAP_PARALLEL_HPP_
#define SDRMAP_PARALLEL_HPP_

#include <cstdint>
#include <functional>

namespace sdrmap {

/// Worker count for internal parallel loops. Reads SDRMAP_THREADS; falls back
/// to the hardware concurrency. Always at least 1.
int thread_count();

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
/// visited exactly once; callers write results into per-index slots and reduce
/// afterwards so the outcome does not depend on scheduling.
void parallel_for(std::int64_t count, int threads,
                  const std::function<void(std::int64_t)>& body);

/// SplitMix64 step, used to derive independent per-trial seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace sdrmap

#endif  // SDRMAP_PARALLEL_HPP_
