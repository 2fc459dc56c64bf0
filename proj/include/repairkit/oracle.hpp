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

#ifndef REPAIRKIT_ORACLE_HPP
#define REPAIRKIT_ORACLE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "repairkit/constraint.hpp"
#include "repairkit/dataset.hpp"
#include "repairkit/query.hpp"
#include "repairkit/search.hpp"

namespace repairkit {

// Aggregate values of the candidate's result computed by a full table scan.
std::vector<std::optional<double>> bf_aggregates(
    const Dataset& ds, const CandidateSpace& space,
    const ConstraintSet& constraints, const RepairCandidate& candidate,
    std::uint64_t* tuple_accesses = nullptr);

// Full-scan verdict: filter every row, aggregate, evaluate each constraint.
bool bf_eval_candidate(const Dataset& ds, const CandidateSpace& space,
                       const ConstraintSet& constraints,
                       const RepairCandidate& candidate,
                       std::uint64_t* tuple_accesses = nullptr);

// Distance-ordered enumeration with full-scan checks. NCA counts tuple
// accesses since no clusters are involved.
RepairResult bf_topk(const Dataset& ds, const CandidateSpace& space,
                     const ConstraintSet& constraints, std::size_t k);

// Independent ground truth for small spaces: materializes the whole cross
// product, checks every candidate, sorts and keeps the first k. Throws
// Error{kSpaceTooLarge} above `max_space` candidates.
std::vector<ScoredCandidate> materialize_topk(const Dataset& ds,
                                              const CandidateSpace& space,
                                              const ConstraintSet& constraints,
                                              std::size_t k,
                                              std::uint64_t max_space = 200000);

}  // namespace repairkit

#endif  // REPAIRKIT_ORACLE_HPP
