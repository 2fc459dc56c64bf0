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

#include "repairkit/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "repairkit/error.hpp"

namespace repairkit {

KdTree::KdTree(const Dataset& ds, std::vector<std::size_t> columns,
               std::vector<FilterAggQuery> aggs, std::size_t branching,
               std::size_t bucket)
    : ds_(&ds),
      columns_(std::move(columns)),
      aggs_(std::move(aggs)),
      branching_(branching),
      bucket_(bucket) {
  if (branching_ < 2) {
    throw Error(ErrorKind::kBadParams, "branching factor must be at least 2");
  }
  if (bucket_ < 1) {
    throw Error(ErrorKind::kBadParams, "bucket size must be at least 1");
  }
  if (ds.row_count() == 0) {
    throw Error(ErrorKind::kEmptyDataset, "cannot index an empty dataset");
  }
  if (ds.row_count() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorKind::kBadParams, "dataset has too many rows");
  }
  for (std::size_t i = 0; i < aggs_.size(); ++i) {
    if (aggs_[i].id != i) {
      throw Error(ErrorKind::kBadParams, "aggregate ids must be dense");
    }
  }
  build();
  summarize();
}

namespace {

// Cut positions splitting sorted `values` into at most `branching` groups of
// near-equal size without separating equal values. Each quantile cut moves
// to the nearest position where the value changes (left wins ties).
std::vector<std::uint32_t> quantile_cuts(std::span<const double> values,
                                         std::size_t branching) {
  const std::size_t n = values.size();
  std::vector<std::uint32_t> changes;
  for (std::size_t i = 1; i < n; ++i) {
    if (values[i - 1] != values[i]) changes.push_back(static_cast<std::uint32_t>(i));
  }
  std::vector<std::uint32_t> cuts;
  if (changes.empty()) return cuts;
  for (std::size_t j = 1; j < branching; ++j) {
    auto target = static_cast<std::uint32_t>(j * n / branching);
    auto it = std::lower_bound(changes.begin(), changes.end(), target);
    std::uint32_t best;
    if (it == changes.end()) {
      best = changes.back();
    } else if (*it == target || it == changes.begin()) {
      best = *it;
    } else {
      std::uint32_t right = *it;
      std::uint32_t left = *(it - 1);
      best = (target - left <= right - target) ? left : right;
    }
    cuts.push_back(best);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

}  // namespace

void KdTree::build() {
  const auto n = static_cast<std::uint32_t>(ds_->row_count());
  row_order_.resize(n);
  std::iota(row_order_.begin(), row_order_.end(), 0u);
  nodes_.push_back({0, n, 0, 0, 0});
  const std::size_t m = columns_.size();
  std::vector<double> values;

  // Breadth-first: children are appended as one contiguous block.
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    const KdNode node = nodes_[id];
    depth_ = std::max<std::size_t>(depth_, node.depth);
    if (node.count() <= bucket_ || m == 0) continue;
    auto first = row_order_.begin() + node.begin;
    auto last = row_order_.begin() + node.end;
    for (std::size_t attempt = 0; attempt < m; ++attempt) {
      const std::size_t col = columns_[(node.depth + attempt) % m];
      auto column = ds_->column(col);
      std::sort(first, last, [&](std::uint32_t a, std::uint32_t b) {
        if (column[a] != column[b]) return column[a] < column[b];
        return a < b;
      });
      values.clear();
      for (auto it = first; it != last; ++it) values.push_back(column[*it]);
      auto cuts = quantile_cuts(values, branching_);
      if (cuts.empty()) continue;  // constant here: try the next attribute

      auto child_base = static_cast<NodeId>(nodes_.size());
      std::uint32_t start = node.begin;
      cuts.push_back(node.count());
      for (auto cut : cuts) {
        nodes_.push_back({start, node.begin + cut, 0, 0, node.depth + 1});
        start = node.begin + cut;
      }
      nodes_[id].first_child = child_base;
      nodes_[id].child_count = static_cast<std::uint32_t>(cuts.size());
      break;
    }
  }
  child_ids_.resize(nodes_.size());
  std::iota(child_ids_.begin(), child_ids_.end(), NodeId{0});
}

void KdTree::summarize() {
  const std::size_t m = columns_.size();
  const std::size_t a = aggs_.size();
  bounds_.assign(nodes_.size() * m, Interval{});
  agg_states_.assign(nodes_.size() * a, AggState{});

  // Children have larger ids, so a reverse sweep sees them first.
  for (std::size_t i = nodes_.size(); i-- > 0;) {
    const KdNode& node = nodes_[i];
    Interval* bounds = bounds_.data() + i * m;
    AggState* states = agg_states_.data() + i * a;
    for (std::size_t g = 0; g < a; ++g) {
      states[g] = AggState::identity(aggs_[g].fn);
    }
    if (node.is_leaf()) {
      auto rows = this->rows(static_cast<NodeId>(i));
      for (std::size_t k = 0; k < m; ++k) {
        auto column = ds_->column(columns_[k]);
        double lo = column[rows.front()];
        double hi = lo;
        for (auto r : rows) {
          lo = std::min(lo, column[r]);
          hi = std::max(hi, column[r]);
        }
        bounds[k] = {lo, hi};
      }
      for (std::size_t g = 0; g < a; ++g) {
        states[g] = accumulate(aggs_[g], *ds_, rows);
      }
      continue;
    }
    for (std::uint32_t c = 0; c < node.child_count; ++c) {
      const std::size_t child = node.first_child + c;
      const Interval* cb = bounds_.data() + child * m;
      const AggState* cs = agg_states_.data() + child * a;
      for (std::size_t k = 0; k < m; ++k) {
        bounds[k] = c == 0 ? cb[k]
                           : Interval{std::min(bounds[k].lo, cb[k].lo),
                                      std::max(bounds[k].hi, cb[k].hi)};
      }
      for (std::size_t g = 0; g < a; ++g) states[g].merge(aggs_[g].fn, cs[g]);
    }
  }
}

std::span<const NodeId> KdTree::children(NodeId id) const {
  const KdNode& node = nodes_[id];
  return {child_ids_.data() + node.first_child, node.child_count};
}

std::span<const std::uint32_t> KdTree::rows(NodeId id) const {
  const KdNode& node = nodes_[id];
  return {row_order_.data() + node.begin, node.count()};
}

std::vector<std::size_t> KdTree::level_counts() const {
  std::vector<std::size_t> counts(depth_ + 1, 0);
  for (const auto& node : nodes_) ++counts[node.depth];
  return counts;
}

std::vector<std::size_t> KdTree::leaf_sizes() const {
  std::vector<std::size_t> sizes;
  for (const auto& node : nodes_) {
    if (node.is_leaf()) sizes.push_back(node.count());
  }
  return sizes;
}

nlohmann::json KdTree::stats_json() const {
  auto sizes = leaf_sizes();
  auto [mn, mx] = std::minmax_element(sizes.begin(), sizes.end());
  nlohmann::json levels = nlohmann::json::array();
  auto counts = level_counts();
  for (std::size_t d = 0; d < counts.size(); ++d) {
    levels.push_back({{"level", d}, {"nodes", counts[d]}});
  }
  return {{"node_count", nodes_.size()},
          {"depth", depth_},
          {"levels", std::move(levels)},
          {"leaf_count", sizes.size()},
          {"min_leaf_size", *mn},
          {"max_leaf_size", *mx}};
}

void KdTree::corrupt_summaries() {
  const std::size_t a = aggs_.size();
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    for (std::size_t g = 0; g < a; ++g) {
      AggState& s = agg_states_[i * a + g];
      s.matches += 1;
      switch (aggs_[g].fn) {
        case AggFn::kMin: s.value -= 1; break;
        case AggFn::kMax: s.value += 1; break;
        default:
          s.value += 1;
          s.pos_sum += 1;
          break;
      }
    }
  }
}

KdTree build_tree(const Dataset& ds, const CandidateSpace& space,
                  const ConstraintSet& constraints, std::size_t branching,
                  std::size_t bucket) {
  return KdTree(ds, space.predicate_columns(), constraints.aggs(), branching,
                bucket);
}

}  // namespace repairkit
