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

#include "repairkit/bounds.hpp"

#include <algorithm>
#include <limits>

namespace repairkit {

std::vector<std::optional<double>> merge_exact(const KdTree& tree,
                                               const CoverResult& cover) {
  auto aggs = tree.aggs();
  const Dataset& ds = tree.dataset();
  std::vector<std::optional<double>> out;
  out.reserve(aggs.size());
  for (std::size_t g = 0; g < aggs.size(); ++g) {
    const FilterAggQuery& agg = aggs[g];
    AggState state = AggState::identity(agg.fn);
    for (NodeId id : cover.full) state.merge(agg.fn, tree.agg(id, g));
    for (auto row : cover.resolved_rows) {
      if (!agg.matches(ds, row)) continue;
      state.add(agg.fn,
                agg.fn == AggFn::kCount ? 1.0 : ds.value(row, agg.input_column));
    }
    out.push_back(state.result(agg.fn));
  }
  return out;
}

std::vector<AggBound> bound_aggregates(const KdTree& tree,
                                       const CoverResult& cover) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  auto aggs = tree.aggs();
  std::vector<AggBound> out;
  out.reserve(aggs.size());
  for (std::size_t g = 0; g < aggs.size(); ++g) {
    const AggFn fn = aggs[g].fn;
    AggBound b;
    switch (fn) {
      case AggFn::kCount: {
        double lo = 0;
        double extra = 0;
        for (NodeId id : cover.full) lo += tree.agg(id, g).value;
        for (NodeId id : cover.partial) extra += tree.agg(id, g).value;
        b.value = {lo, lo + extra};
        break;
      }
      case AggFn::kSum:
      case AggFn::kAvg: {
        // Any subset of the partial rows adds at least the sum of their
        // negative contributions and at most the sum of their positive ones.
        double base = 0;
        double neg = 0;
        double pos = 0;
        for (NodeId id : cover.full) base += tree.agg(id, g).value;
        for (NodeId id : cover.partial) {
          neg += tree.agg(id, g).neg_sum;
          pos += tree.agg(id, g).pos_sum;
        }
        b.value = {base + neg, base + pos};
        break;
      }
      case AggFn::kMin:
      case AggFn::kMax: {
        const bool is_min = fn == AggFn::kMin;
        auto better = [&](double x, double y) {
          return is_min ? std::min(x, y) : std::max(x, y);
        };
        const double none = is_min ? kInf : -kInf;
        double certain = none;  // over full clusters only
        double any = none;      // over full and partial clusters
        bool full_match = false;
        bool any_match = false;
        for (NodeId id : cover.full) {
          const AggState& s = tree.agg(id, g);
          if (s.matches == 0) continue;
          certain = better(certain, s.value);
          any = better(any, s.value);
          full_match = any_match = true;
        }
        for (NodeId id : cover.partial) {
          const AggState& s = tree.agg(id, g);
          if (s.matches == 0) continue;
          any = better(any, s.value);
          any_match = true;
        }
        b.may_be_empty = !full_match;
        b.always_empty = !any_match;
        if (!any_match) {
          b.value = Interval::entire();
        } else if (is_min) {
          b.value = {any, certain};  // certain is +inf without full matches
        } else {
          b.value = {certain, any};
        }
        break;
      }
    }
    out.push_back(b);
  }
  return out;
}

ExprBound constraint_bound(const ConstraintSet& constraints, std::size_t which,
                           std::span<const AggBound> bindings) {
  std::size_t offset = 0;
  for (std::size_t i = 0; i < which; ++i) {
    offset += constraints.constraints()[i].aggs.size();
  }
  const auto& c = constraints.constraints().at(which);
  return eval_expr_bound(*c.expr, bindings.subspan(offset, c.aggs.size()));
}

bool aceval_forall(const ConstraintSet& constraints, const KdTree& tree,
                   const CoverResult& cover) {
  return constraints.holds_for_all(bound_aggregates(tree, cover));
}

bool aceval_exists(const ConstraintSet& constraints, const KdTree& tree,
                   const CoverResult& cover) {
  return constraints.holds_for_some(bound_aggregates(tree, cover));
}

bool eval_candidate_exact(const ConstraintSet& constraints, const KdTree& tree,
                          const CandidateSpace& space,
                          const RepairCandidate& candidate,
                          EvalCounters* counters) {
  auto condition = space.conditions(candidate);
  CoverResult cover = full_cover_cluster_set(tree, condition);
  if (counters) {
    counters->clusters_accessed += cover.clusters_accessed;
    counters->tuple_accesses += cover.tuple_accesses;
  }
  return constraints.holds(merge_exact(tree, cover));
}

}  // namespace repairkit
