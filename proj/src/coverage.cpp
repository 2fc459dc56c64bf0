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

#include "repairkit/coverage.hpp"

#include <algorithm>

namespace repairkit {

bool eval_forall(const Comparison& cmp, const Interval& b) {
  const double c = cmp.value;
  switch (cmp.op) {
    case CompareOp::kLt: return b.hi < c;
    case CompareOp::kLe: return b.hi <= c;
    case CompareOp::kGt: return b.lo > c;
    case CompareOp::kGe: return b.lo >= c;
    case CompareOp::kEq: return b.lo == c && b.hi == c;
    case CompareOp::kNe: return c < b.lo || c > b.hi;
    case CompareOp::kInRange: return c <= b.lo && b.hi <= cmp.value_high;
  }
  return false;
}

bool eval_none(const Comparison& cmp, const Interval& b) {
  if (cmp.op == CompareOp::kInRange) {
    return b.hi < cmp.value || b.lo > cmp.value_high;
  }
  return eval_forall({negate(cmp.op), cmp.value, 0}, b);
}

bool reval_forall(const RangeComparison& cmp, const Interval& b) {
  const Interval& c = cmp.value;
  switch (cmp.op) {
    case CompareOp::kLt: return b.hi < c.lo;
    case CompareOp::kLe: return b.hi <= c.lo;
    case CompareOp::kGt: return b.lo > c.hi;
    case CompareOp::kGe: return b.lo >= c.hi;
    case CompareOp::kEq:
      return b.lo == c.lo && c.lo == b.hi && b.hi == c.hi;
    case CompareOp::kNe: return !b.intersects(c);
    case CompareOp::kInRange:
      return c.hi <= b.lo && b.hi <= cmp.value_high.lo;
  }
  return false;
}

bool reval_exists(const RangeComparison& cmp, const Interval& b) {
  const Interval& c = cmp.value;
  switch (cmp.op) {
    case CompareOp::kLt: return b.lo < c.hi;
    case CompareOp::kLe: return b.lo <= c.hi;
    case CompareOp::kGt: return b.hi > c.lo;
    case CompareOp::kGe: return b.hi >= c.lo;
    case CompareOp::kEq: return b.intersects(c);
    case CompareOp::kNe:
      return !(b.lo == c.lo && c.lo == c.hi && c.hi == b.hi);
    case CompareOp::kInRange: {
      // Some t in bounds with low <= t <= high for some admissible pair.
      double lo = std::max(b.lo, c.lo);
      double hi = std::min(b.hi, cmp.value_high.hi);
      return lo <= hi;
    }
  }
  return true;
}

namespace {

bool row_matches(const KdTree& tree, std::uint32_t row,
                 std::span<const Comparison> condition) {
  const Dataset& ds = tree.dataset();
  auto columns = tree.columns();
  for (std::size_t i = 0; i < condition.size(); ++i) {
    const Comparison& c = condition[i];
    if (!compare(ds.value(row, columns[i]), c.op, c.value, c.value_high)) {
      return false;
    }
  }
  return true;
}

}  // namespace

CoverResult full_cover_cluster_set(const KdTree& tree,
                                   std::span<const Comparison> condition) {
  CoverResult out;
  std::vector<NodeId> stack{tree.root()};
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    ++out.clusters_accessed;
    bool all = true;
    bool none = false;
    for (std::size_t i = 0; i < condition.size() && !none; ++i) {
      const Interval& b = tree.bounds(id, i);
      all = all && eval_forall(condition[i], b);
      none = eval_none(condition[i], b);
    }
    if (none) continue;
    if (all) {
      out.full.push_back(id);
      continue;
    }
    if (tree.node(id).is_leaf()) {
      for (auto row : tree.rows(id)) {
        ++out.tuple_accesses;
        if (row_matches(tree, row, condition)) out.resolved_rows.push_back(row);
      }
      continue;
    }
    // Reverse push so children pop in index order.
    auto kids = tree.children(id);
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

CoverResult par_cover_cluster_set(const KdTree& tree,
                                  std::span<const RangeComparison> condition) {
  CoverResult out;
  std::vector<NodeId> stack{tree.root()};
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    ++out.clusters_accessed;
    bool in = true;
    bool pin = true;
    for (std::size_t i = 0; i < condition.size() && pin; ++i) {
      const Interval& b = tree.bounds(id, i);
      in = in && reval_forall(condition[i], b);
      pin = reval_exists(condition[i], b);
    }
    if (!pin) continue;
    if (in) {
      out.full.push_back(id);
      continue;
    }
    if (tree.node(id).is_leaf()) {
      out.partial.push_back(id);
      continue;
    }
    auto kids = tree.children(id);
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

}  // namespace repairkit
