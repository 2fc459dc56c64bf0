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

#include "repairkit/oracle.hpp"

#include <algorithm>
#include <chrono>

#include "repairkit/error.hpp"

namespace repairkit {

std::vector<std::optional<double>> bf_aggregates(
    const Dataset& ds, const CandidateSpace& space,
    const ConstraintSet& constraints, const RepairCandidate& candidate,
    std::uint64_t* tuple_accesses) {
  const auto condition = space.conditions(candidate);
  const auto& columns = space.predicate_columns();
  const auto& aggs = constraints.aggs();
  std::vector<AggState> states;
  for (const auto& agg : aggs) states.push_back(AggState::identity(agg.fn));

  for (std::size_t row = 0; row < ds.row_count(); ++row) {
    bool selected = true;
    for (std::size_t i = 0; i < condition.size() && selected; ++i) {
      const Comparison& c = condition[i];
      selected = compare(ds.value(row, columns[i]), c.op, c.value,
                         c.value_high);
    }
    if (!selected) continue;
    for (std::size_t g = 0; g < aggs.size(); ++g) {
      if (!aggs[g].matches(ds, row)) continue;
      double x = aggs[g].fn == AggFn::kCount
                     ? 1.0
                     : ds.value(row, aggs[g].input_column);
      states[g].add(aggs[g].fn, x);
    }
  }
  if (tuple_accesses) *tuple_accesses += ds.row_count();

  std::vector<std::optional<double>> out;
  for (std::size_t g = 0; g < aggs.size(); ++g) {
    out.push_back(states[g].result(aggs[g].fn));
  }
  return out;
}

bool bf_eval_candidate(const Dataset& ds, const CandidateSpace& space,
                       const ConstraintSet& constraints,
                       const RepairCandidate& candidate,
                       std::uint64_t* tuple_accesses) {
  return constraints.holds(
      bf_aggregates(ds, space, constraints, candidate, tuple_accesses));
}

RepairResult bf_topk(const Dataset& ds, const CandidateSpace& space,
                     const ConstraintSet& constraints, std::size_t k) {
  if (k < 1) throw Error(ErrorKind::kBadParams, "k must be at least 1");
  const auto start = std::chrono::steady_clock::now();
  RepairResult result;
  result.algorithm = "bf";
  DistanceEnumerator candidates(space);
  std::uint64_t tuples = 0;
  while (result.repairs.size() < k) {
    auto next = candidates.next();
    if (!next) break;
    ++result.stats.nce;
    if (bf_eval_candidate(ds, space, constraints, next->candidate, &tuples)) {
      result.repairs.push_back(std::move(*next));
    }
  }
  result.stats.nca = tuples;
  result.stats.tuple_accesses = tuples;
  result.stats.repairs_found = result.repairs.size();
  result.stats.wall_time_s = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
  return result;
}

std::vector<ScoredCandidate> materialize_topk(const Dataset& ds,
                                              const CandidateSpace& space,
                                              const ConstraintSet& constraints,
                                              std::size_t k,
                                              std::uint64_t max_space) {
  if (space.size() > max_space) {
    throw Error(ErrorKind::kSpaceTooLarge,
                "candidate space exceeds " + std::to_string(max_space));
  }
  const std::size_t slots = space.slot_count();
  std::vector<ScoredCandidate> all;
  std::vector<std::uint32_t> idx(slots, 0);
  while (true) {
    RepairCandidate cand = space.at(idx);
    if (bf_eval_candidate(ds, space, constraints, cand)) {
      // Distance recomputed term by term in slot order.
      double d = 0;
      for (std::size_t s = 0; s < slots; ++s) {
        const Slot& slot = space.slots()[s];
        d += slot.weight * predicate_distance(slot.original, cand.constants[s],
                                              slot.categorical);
      }
      all.push_back({std::move(cand), d});
    }
    std::size_t s = slots;
    bool done = true;
    while (s > 0) {
      --s;
      if (++idx[s] < space.slots()[s].domain.size()) {
        done = false;
        break;
      }
      idx[s] = 0;
    }
    if (done) break;
  }
  std::sort(all.begin(), all.end(), ranks_before);
  if (all.size() > k) all.resize(k);
  return all;
}

}  // namespace repairkit
