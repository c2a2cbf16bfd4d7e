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

#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <set>
#include <stdexcept>
#include <vector>

#include "sdrmap/parallel.hpp"

namespace sdrmap {
namespace {

TEST(ParallelFor, VisitsEveryIndexOnce) {
  for (int threads : {1, 2, 7}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(1000, threads, [&](std::int64_t i) { hits[static_cast<std::size_t>(i)]++; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
  int calls = 0;
  parallel_for(0, 4, [&](std::int64_t) { ++calls; });
  EXPECT_EQ(calls, 0);
}

TEST(ParallelFor, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(100, 3,
                            [](std::int64_t i) {
                              if (i == 42) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

TEST(ThreadCount, ReadsEnvironment) {
  ::setenv("SDRMAP_THREADS", "3", 1);
  EXPECT_EQ(thread_count(), 3);
  ::setenv("SDRMAP_THREADS", "zero", 1);
  EXPECT_GE(thread_count(), 1);
  ::unsetenv("SDRMAP_THREADS");
  EXPECT_GE(thread_count(), 1);
}

TEST(MixSeed, DistinctStreams) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 100; ++s) seen.insert(mix_seed(7, s));
  EXPECT_EQ(seen.size(), 100u);
  EXPECT_EQ(mix_seed(7, 3), mix_seed(7, 3));
  EXPECT_NE(mix_seed(7, 3), mix_seed(8, 3));
}

}  // namespace
}  // namespace sdrmap
