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

#include "repairkit/search.hpp"

#include <algorithm>
#include <chrono>
#include <queue>

#include "repairkit/error.hpp"

namespace repairkit {

nlohmann::json SearchStats::to_json() const {
  return {{"nce", nce},
          {"nca", nca},
          {"tuple_accesses", tuple_accesses},
          {"wall_time_s", wall_time_s},
          {"repairs_found", repairs_found},
          {"sets_certified", sets_certified},
          {"sets_pruned", sets_pruned},
          {"sets_divided", sets_divided}};
}

nlohmann::json RepairResult::to_json(const CandidateSpace& space) const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& r : repairs) {
    nlohmann::json entry = space.candidate_to_json(r.candidate);
    entry["distance"] = r.distance;
    list.push_back(std::move(entry));
  }
  return {{"schema_version", 1},
          {"algorithm", algorithm},
          {"query", space.query().to_json()},
          {"repairs", std::move(list)},
          {"stats", stats.to_json()}};
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

RepairResult ff_topk(const KdTree& tree, const CandidateSpace& space,
                     const ConstraintSet& constraints, std::size_t k) {
  if (k < 1) throw Error(ErrorKind::kBadParams, "k must be at least 1");
  const auto start = Clock::now();
  RepairResult result;
  result.algorithm = "ff";
  EvalCounters counters;
  DistanceEnumerator candidates(space);
  while (result.repairs.size() < k) {
    auto next = candidates.next();
    if (!next) break;
    ++result.stats.nce;
    if (eval_candidate_exact(constraints, tree, space, next->candidate,
                             &counters)) {
      result.repairs.push_back(std::move(*next));
    }
  }
  result.stats.nca = counters.clusters_accessed;
  result.stats.tuple_accesses = counters.tuple_accesses;
  result.stats.repairs_found = result.repairs.size();
  result.stats.wall_time_s = seconds_since(start);
  return result;
}

std::vector<CandidateSet> range_divide(const CandidateSet& set,
                                       std::size_t l) {
  if (l < 2) throw Error(ErrorKind::kBadParams, "split factor must be >= 2");
  if (set.all_singleton()) {
    throw Error(ErrorKind::kAllSingleton,
                "every range is a single value; nothing to divide");
  }
  // Pieces per slot.
  std::vector<std::vector<IndexRange>> pieces(set.ranges.size());
  for (std::size_t s = 0; s < set.ranges.size(); ++s) {
    const IndexRange& r = set.ranges[s];
    const std::uint64_t size = r.size();
    const std::uint64_t parts = std::min<std::uint64_t>(l, size);
    if (parts <= 1) {
      pieces[s].push_back(r);
      continue;
    }
    for (std::uint64_t j = 0; j < parts; ++j) {
      auto lo = static_cast<std::uint32_t>(r.lo + j * size / parts);
      auto hi = static_cast<std::uint32_t>(r.lo + (j + 1) * size / parts - 1);
      pieces[s].push_back({lo, hi});
    }
  }
  std::vector<CandidateSet> out;
  std::vector<std::size_t> choice(pieces.size(), 0);
  while (true) {
    CandidateSet child;
    child.ranges.reserve(pieces.size());
    for (std::size_t s = 0; s < pieces.size(); ++s) {
      child.ranges.push_back(pieces[s][choice[s]]);
    }
    out.push_back(std::move(child));
    // Odometer with the last slot varying fastest.
    std::size_t s = pieces.size();
    while (s > 0) {
      --s;
      if (++choice[s] < pieces[s].size()) break;
      choice[s] = 0;
      if (s == 0) return out;
    }
    if (pieces.empty()) return out;
  }
}

bool has_candidates(const CandidateSet& set) {
  return std::none_of(set.ranges.begin(), set.ranges.end(),
                      [](const IndexRange& r) { return r.empty(); });
}

SetVerdict evaluate_candidate_set(const KdTree& tree,
                                  const CandidateSpace& space,
                                  const ConstraintSet& constraints,
                                  const CandidateSet& set) {
  SetVerdict v;
  v.cover = par_cover_cluster_set(tree, space.range_conditions(set));
  v.bindings = bound_aggregates(tree, v.cover);
  v.all_valid = constraints.holds_for_all(v.bindings);
  v.some_valid = v.all_valid || constraints.holds_for_some(v.bindings);
  return v;
}

// ---------------------------------------------------------------------------
// ConcreteTopK

void ConcreteTopK::add(const CandidateSet& set) {
  Pool pool;
  pool.set = set;
  pool.lb = space_->lower_bound(set);
  sets_.push_back(std::move(pool));
  const std::size_t index = sets_.size() - 1;
  auto pos = std::upper_bound(
      order_.begin(), order_.end(), sets_.back().lb,
      [&](double lb, std::size_t other) { return lb < sets_[other].lb; });
  order_.insert(pos, index);
}

const ScoredCandidate* ConcreteTopK::item(Pool& pool, std::size_t i) {
  while (pool.cache.size() <= i && !pool.exhausted) {
    if (!pool.cursor) pool.cursor.emplace(*space_, pool.set);
    auto next = pool.cursor->next();
    if (!next) {
      pool.exhausted = true;
      pool.cursor.reset();
      break;
    }
    pool.cache.push_back(std::move(*next));
  }
  return i < pool.cache.size() ? &pool.cache[i] : nullptr;
}

const std::vector<ScoredCandidate>& ConcreteTopK::refresh(std::size_t k) {
  topk_.clear();
  struct Head {
    std::size_t pool;
    std::size_t index;
  };
  // Heap of pool heads; the comparator reads cached items only.
  auto later = [this](const Head& a, const Head& b) {
    return ranks_before(sets_[b.pool].cache[b.index],
                        sets_[a.pool].cache[a.index]);
  };
  std::vector<Head> heap;
  std::size_t next_pool = 0;
  while (topk_.size() < k) {
    // Open the next set while its bound does not exceed the best head: it
    // may hold a candidate that ranks first (ties included).
    if (next_pool < order_.size()) {
      const Pool& peek = sets_[order_[next_pool]];
      if (heap.empty() ||
          peek.lb <= sets_[heap.front().pool].cache[heap.front().index]
                         .distance) {
        std::size_t p = order_[next_pool++];
        if (item(sets_[p], 0)) {
          heap.push_back({p, 0});
          std::push_heap(heap.begin(), heap.end(), later);
        }
        continue;
      }
    }
    if (heap.empty()) break;
    std::pop_heap(heap.begin(), heap.end(), later);
    Head h = heap.back();
    heap.pop_back();
    topk_.push_back(sets_[h.pool].cache[h.index]);
    if (item(sets_[h.pool], h.index + 1)) {
      heap.push_back({h.pool, h.index + 1});
      std::push_heap(heap.begin(), heap.end(), later);
    }
  }
  return topk_;
}

// ---------------------------------------------------------------------------
// Range pruning

namespace {

struct OpenSet {
  double lb;
  CandidateSet set;
};

// Min-queue order: lb, then lexicographic lo indices, then hi indices.
struct OpenLater {
  bool operator()(const OpenSet& a, const OpenSet& b) const {
    if (a.lb != b.lb) return a.lb > b.lb;
    const auto& x = a.set.ranges;
    const auto& y = b.set.ranges;
    for (std::size_t s = 0; s < x.size(); ++s) {
      if (x[s].lo != y[s].lo) return x[s].lo > y[s].lo;
    }
    for (std::size_t s = 0; s < x.size(); ++s) {
      if (x[s].hi != y[s].hi) return x[s].hi > y[s].hi;
    }
    return false;
  }
};

}  // namespace

RepairResult rp_topk(const KdTree& tree, const CandidateSpace& space,
                     const ConstraintSet& constraints, std::size_t k,
                     std::size_t split) {
  if (k < 1) throw Error(ErrorKind::kBadParams, "k must be at least 1");
  if (split < 2) throw Error(ErrorKind::kBadParams, "split factor must be >= 2");
  const auto start = Clock::now();
  RepairResult result;
  result.algorithm = "rp";
  SearchStats& stats = result.stats;
  EvalCounters counters;

  std::priority_queue<OpenSet, std::vector<OpenSet>, OpenLater> open;
  ConcreteTopK certified(space);
  {
    CandidateSet full = space.full_set();
    double lb = space.lower_bound(full);
    open.push({lb, std::move(full)});
  }

  while (!open.empty()) {
    OpenSet cur = open.top();
    open.pop();
    bool certified_changed = false;

    if (cur.set.all_singleton()) {
      std::vector<std::uint32_t> idx;
      for (const auto& r : cur.set.ranges) idx.push_back(r.lo);
      ++stats.nce;
      if (eval_candidate_exact(constraints, tree, space, space.at(idx),
                               &counters)) {
        certified.add(cur.set);
        ++stats.sets_certified;
        certified_changed = true;
      } else {
        ++stats.sets_pruned;
      }
    } else {
      ++stats.nce;
      SetVerdict v = evaluate_candidate_set(tree, space, constraints, cur.set);
      counters.clusters_accessed += v.cover.clusters_accessed;
      if (v.all_valid) {
        certified.add(cur.set);
        ++stats.sets_certified;
        certified_changed = true;
      } else if (v.some_valid) {
        ++stats.sets_divided;
        for (auto& child : range_divide(cur.set, split)) {
          if (!has_candidates(child)) continue;
          double lb = space.lower_bound(child);
          open.push({lb, std::move(child)});
        }
      } else {
        ++stats.sets_pruned;
      }
    }

    if (certified_changed) certified.refresh(k);
    const auto& best = certified.current();
    // Stop once the k-th repair beats every set still open. The check reads
    // the queue after this iteration's children were pushed, since a child
    // can have a smaller bound than the set that was next before.
    if (best.size() >= k &&
        (open.empty() || best[k - 1].distance < open.top().lb)) {
      break;
    }
  }

  result.repairs = certified.current();
  if (result.repairs.size() > k) result.repairs.resize(k);
  stats.nca = counters.clusters_accessed;
  stats.tuple_accesses = counters.tuple_accesses;
  stats.repairs_found = result.repairs.size();
  stats.wall_time_s = seconds_since(start);
  return result;
}

}  // namespace repairkit
