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

#ifndef REPAIRKIT_KDTREE_HPP
#define REPAIRKIT_KDTREE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"
#include "repairkit/constraint.hpp"
#include "repairkit/dataset.hpp"
#include "repairkit/interval.hpp"
#include "repairkit/query.hpp"

namespace repairkit {

using NodeId = std::uint32_t;

struct KdNode {
  std::uint32_t begin = 0;  // slice of KdTree::row_order()
  std::uint32_t end = 0;
  NodeId first_child = 0;  // children occupy [first_child, first_child+n)
  std::uint32_t child_count = 0;
  std::uint32_t depth = 0;

  std::uint32_t count() const noexcept { return end - begin; }
  bool is_leaf() const noexcept { return child_count == 0; }
};

// B-way kd-tree over the predicate attributes of a query. Every node carries
// a cluster summary: attribute bounds over all of its rows, its row count,
// and one AggState per aggregate of the constraint set.
//
// Nodes are numbered breadth-first, so siblings are contiguous and children
// always have larger ids than their parent.
class KdTree {
 public:
  // `columns` are the indexed dataset columns in predicate order; `aggs`
  // are the aggregates to materialize (ids must be 0..n-1 in order).
  // Throws Error{kBadParams} for branching < 2 or bucket < 1 and
  // Error{kEmptyDataset} for a dataset without rows.
  KdTree(const Dataset& ds, std::vector<std::size_t> columns,
         std::vector<FilterAggQuery> aggs, std::size_t branching,
         std::size_t bucket);

  const Dataset& dataset() const noexcept { return *ds_; }
  std::size_t branching() const noexcept { return branching_; }
  std::size_t bucket() const noexcept { return bucket_; }
  std::span<const std::size_t> columns() const noexcept { return columns_; }
  std::span<const FilterAggQuery> aggs() const noexcept { return aggs_; }

  NodeId root() const noexcept { return 0; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  const KdNode& node(NodeId id) const { return nodes_[id]; }
  std::span<const NodeId> children(NodeId id) const;
  std::span<const std::uint32_t> rows(NodeId id) const;
  std::span<const std::uint32_t> row_order() const noexcept {
    return row_order_;
  }

  // Bounds of the `attr`-th indexed column (predicate order).
  const Interval& bounds(NodeId id, std::size_t attr) const {
    return bounds_[id * columns_.size() + attr];
  }
  const AggState& agg(NodeId id, std::size_t agg_id) const {
    return agg_states_[id * aggs_.size() + agg_id];
  }
  std::span<const AggState> aggs_of(NodeId id) const {
    return {agg_states_.data() + id * aggs_.size(), aggs_.size()};
  }

  std::size_t depth() const noexcept { return depth_; }
  // Per-level node counts (level 0 is the root).
  std::vector<std::size_t> level_counts() const;
  std::vector<std::size_t> leaf_sizes() const;
  // {"levels":[..], "leaf_count":.., "min_leaf_size":.., "max_leaf_size":..,
  //  "node_count":.., "depth":..}
  nlohmann::json stats_json() const;

  // Test hook: perturbs every materialized aggregate so a cover-based
  // evaluation disagrees with a full scan.
  void corrupt_summaries();

 private:
  void build();
  void summarize();

  const Dataset* ds_;
  std::vector<std::size_t> columns_;
  std::vector<FilterAggQuery> aggs_;
  std::size_t branching_;
  std::size_t bucket_;
  std::size_t depth_ = 0;
  std::vector<KdNode> nodes_;
  std::vector<NodeId> child_ids_;  // identity map backing children()
  std::vector<std::uint32_t> row_order_;
  std::vector<Interval> bounds_;
  std::vector<AggState> agg_states_;
};

// Indexes the predicate attributes of `space`'s query and materializes the
// aggregates of `constraints`.
KdTree build_tree(const Dataset& ds, const CandidateSpace& space,
                  const ConstraintSet& constraints, std::size_t branching,
                  std::size_t bucket);

}  // namespace repairkit

#endif  // REPAIRKIT_KDTREE_HPP
