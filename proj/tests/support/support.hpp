// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef REPAIRKIT_TESTS_SUPPORT_HPP
#define REPAIRKIT_TESTS_SUPPORT_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "repairkit/constraint.hpp"
#include "repairkit/dataset.hpp"
#include "repairkit/query.hpp"

namespace repairkit::testing {

// Four-tuple micro table (T numeric, G categorical with F=0 and M=1, Y
// binary outcome) and its single-predicate query T >= 33.
Dataset micro_dataset();
UserQuery micro_query(const Dataset& ds);
// Parity gap between the M and F groups, bounded by 0.2.
inline constexpr const char* kMicroParity =
    "count(G == 1 && Y == 1) / count(G == 1) - "
    "count(G == 0 && Y == 1) / count(G == 0) <= 0.2";

// Small randomized repair problem: up to 1,000 rows, 2-3 predicates over
// domains of at most 15 values, one or two constraints whose thresholds sit
// near the value of a random candidate so that valid and invalid candidates
// both occur.
struct Instance {
  Dataset ds;
  UserQuery query;
  std::vector<std::string> constraints;
  std::size_t k = 1;
  std::uint64_t seed = 0;

  ConstraintSet constraint_set() const;
  std::string describe() const;
};

Instance random_instance(std::uint64_t seed, std::size_t max_rows = 1000);

// Every candidate of `set`, in lexicographic index order.
std::vector<RepairCandidate> expand(const CandidateSpace& space,
                                    const CandidateSet& set);

// A random non-empty candidate set of `space`.
template <typename Rng>
CandidateSet random_set(const CandidateSpace& space, Rng& rng) {
  CandidateSet set;
  for (const auto& slot : space.slots()) {
    auto n = static_cast<std::int64_t>(slot.domain.size());
    auto a = static_cast<std::uint32_t>(rng.uniform_int(0, n - 1));
    auto b = static_cast<std::uint32_t>(rng.uniform_int(0, n - 1));
    if (a > b) std::swap(a, b);
    set.ranges.push_back({a, b});
  }
  return set;
}

}  // namespace repairkit::testing

#endif  // REPAIRKIT_TESTS_SUPPORT_HPP
