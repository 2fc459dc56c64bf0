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

#ifndef REPAIRKIT_COVERAGE_HPP
#define REPAIRKIT_COVERAGE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "repairkit/interval.hpp"
#include "repairkit/kdtree.hpp"
#include "repairkit/query.hpp"

namespace repairkit {

// True when every value in `bounds` satisfies `cmp`.
bool eval_forall(const Comparison& cmp, const Interval& bounds);
// True when no value in `bounds` satisfies `cmp` (the for-all test of the
// negated comparison; for range membership: bounds lie entirely outside).
bool eval_none(const Comparison& cmp, const Interval& bounds);

// True when every value in `bounds` satisfies the comparison for every
// constant in the comparison's range.
bool reval_forall(const RangeComparison& cmp, const Interval& bounds);
// True when some value in `bounds` may satisfy the comparison for some
// constant in its range.
bool reval_exists(const RangeComparison& cmp, const Interval& bounds);

struct CoverResult {
  std::vector<NodeId> full;
  std::vector<NodeId> partial;
  // Rows of partially covered leaves that satisfy the condition (exact
  // covers only); together with `full` they form the exact result.
  std::vector<std::uint32_t> resolved_rows;
  std::uint64_t clusters_accessed = 0;
  std::uint64_t tuple_accesses = 0;
};

// Exact covering cluster set of one concrete condition (one comparison per
// indexed attribute, in predicate order).
CoverResult full_cover_cluster_set(const KdTree& tree,
                                   std::span<const Comparison> condition);

// Partially covering cluster set of a candidate set's range condition.
CoverResult par_cover_cluster_set(const KdTree& tree,
                                  std::span<const RangeComparison> condition);

}  // namespace repairkit

#endif  // REPAIRKIT_COVERAGE_HPP
