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

#ifndef REPAIRKIT_BOUNDS_HPP
#define REPAIRKIT_BOUNDS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "repairkit/constraint.hpp"
#include "repairkit/coverage.hpp"
#include "repairkit/kdtree.hpp"
#include "repairkit/query.hpp"

namespace repairkit {

// Exact aggregate values over an exact cover: summaries of the full
// clusters merged in list order, then the resolved rows folded in. Entries
// are nullopt for MIN/MAX over no matching tuple.
std::vector<std::optional<double>> merge_exact(const KdTree& tree,
                                               const CoverResult& cover);

// Sound interval per aggregate over a partial cover: every candidate whose
// result lies between rows(full) and rows(full + partial) has its exact
// aggregate inside the interval.
std::vector<AggBound> bound_aggregates(const KdTree& tree,
                                       const CoverResult& cover);

// Interval of Φ for one constraint of the set (constraint index `which`).
ExprBound constraint_bound(const ConstraintSet& constraints,
                           std::size_t which,
                           std::span<const AggBound> bindings);

// Certifies that every candidate of the cover's set satisfies all
// constraints.
bool aceval_forall(const ConstraintSet& constraints, const KdTree& tree,
                   const CoverResult& cover);
// False only if no candidate of the cover's set can satisfy all constraints.
bool aceval_exists(const ConstraintSet& constraints, const KdTree& tree,
                   const CoverResult& cover);

struct EvalCounters {
  std::uint64_t clusters_accessed = 0;
  std::uint64_t tuple_accesses = 0;
};

// Exact verdict for one concrete candidate via its covering cluster set.
bool eval_candidate_exact(const ConstraintSet& constraints, const KdTree& tree,
                          const CandidateSpace& space,
                          const RepairCandidate& candidate,
                          EvalCounters* counters = nullptr);

}  // namespace repairkit

#endif  // REPAIRKIT_BOUNDS_HPP
