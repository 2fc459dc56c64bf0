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

#ifndef REPAIRKIT_SEARCH_HPP
#define REPAIRKIT_SEARCH_HPP

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "repairkit/bounds.hpp"
#include "repairkit/constraint.hpp"
#include "repairkit/coverage.hpp"
#include "repairkit/kdtree.hpp"
#include "repairkit/query.hpp"

namespace repairkit {

struct SearchStats {
  std::uint64_t nce = 0;             // constraint evaluations
  std::uint64_t nca = 0;             // cluster accesses
  std::uint64_t tuple_accesses = 0;  // rows touched outside summaries
  double wall_time_s = 0;
  std::uint64_t repairs_found = 0;
  // Candidate-set outcomes (range pruning only).
  std::uint64_t sets_certified = 0;
  std::uint64_t sets_pruned = 0;
  std::uint64_t sets_divided = 0;

  nlohmann::json to_json() const;
};

struct RepairResult {
  std::string algorithm;
  std::vector<ScoredCandidate> repairs;  // ranks_before order
  SearchStats stats;

  nlohmann::json to_json(const CandidateSpace& space) const;
};

// Enumerates candidates by distance and certifies each through its exact
// covering cluster set; stops after k repairs.
RepairResult ff_topk(const KdTree& tree, const CandidateSpace& space,
                     const ConstraintSet& constraints, std::size_t k);

// Best-first search over candidate sets with interval pruning.
RepairResult rp_topk(const KdTree& tree, const CandidateSpace& space,
                     const ConstraintSet& constraints, std::size_t k,
                     std::size_t split = 2);

// Splits every non-singleton range into min(l, size) contiguous pieces and
// returns the cross product (lexicographic in piece order). Throws
// Error{kAllSingleton} when nothing can be split and Error{kBadParams} for
// l < 2.
std::vector<CandidateSet> range_divide(const CandidateSet& set,
                                       std::size_t l);

// Index ranges make domain membership structural: a set has candidates iff
// none of its ranges is empty.
bool has_candidates(const CandidateSet& set);

// Verdict of one candidate set against the constraint set.
struct SetVerdict {
  bool all_valid = false;   // aceval for all
  bool some_valid = false;  // aceval exists
  CoverResult cover;
  std::vector<AggBound> bindings;
};

SetVerdict evaluate_candidate_set(const KdTree& tree,
                                  const CandidateSpace& space,
                                  const ConstraintSet& constraints,
                                  const CandidateSet& set);

// The best k concrete candidates drawn from a growing pool of certified
// (valid) candidate sets. Sets are expanded lazily in lower-bound order and
// each set keeps its expansion cursor, so refreshing after new sets arrive
// only touches what is needed.
class ConcreteTopK {
 public:
  explicit ConcreteTopK(const CandidateSpace& space) : space_(&space) {}

  void add(const CandidateSet& set);
  std::size_t set_count() const noexcept { return sets_.size(); }

  // Recomputes the best k over all certified sets.
  const std::vector<ScoredCandidate>& refresh(std::size_t k);
  const std::vector<ScoredCandidate>& current() const noexcept {
    return topk_;
  }

 private:
  struct Pool {
    CandidateSet set;
    double lb = 0;
    std::vector<ScoredCandidate> cache;
    std::optional<DistanceEnumerator> cursor;
    bool exhausted = false;
  };
  // The i-th candidate of `pool` in ranks_before order, if any.
  const ScoredCandidate* item(Pool& pool, std::size_t i);

  const CandidateSpace* space_;
  std::deque<Pool> sets_;           // insertion order; stable addresses
  std::vector<std::size_t> order_;  // indices into sets_ sorted by lb
  std::vector<ScoredCandidate> topk_;
};

}  // namespace repairkit

#endif  // REPAIRKIT_SEARCH_HPP
