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


#include <algorithm>
#include <set>

#include "doctest.h"
#include "repairkit/bounds.hpp"
#include "repairkit/coverage.hpp"
#include "repairkit/datagen.hpp"
#include "repairkit/oracle.hpp"
#include "repairkit/search.hpp"
#include "support.hpp"

using namespace repairkit;

namespace {

// Rows selected by a concrete condition, by a plain scan.
std::set<std::uint32_t> scan(const Dataset& ds, const CandidateSpace& space,
                             const RepairCandidate& cand) {
  auto conds = space.conditions(cand);
  std::set<std::uint32_t> out;
  for (std::uint32_t r = 0; r < ds.row_count(); ++r) {
    bool ok = true;
    for (std::size_t p = 0; p < conds.size() && ok; ++p) {
      ok = compare(ds.value(r, space.predicate_columns()[p]), conds[p].op,
                   conds[p].value, conds[p].value_high);
    }
    if (ok) out.insert(r);
  }
  return out;
}

std::set<std::uint32_t> rows_of(const KdTree& tree,
                                const std::vector<NodeId>& nodes) {
  std::set<std::uint32_t> out;
  for (NodeId id : nodes) {
    for (auto r : tree.rows(id)) {
      CHECK(out.insert(r).second);  // clusters are disjoint
    }
  }
  return out;
}

NodeId leaf_of(const KdTree& tree, double t) {
  for (NodeId id = 0; id < tree.node_count(); ++id) {
    if (tree.node(id).is_leaf() && tree.bounds(id, 0) == Interval::point(t)) {
      return id;
    }
  }
  FAIL("no leaf for " << t);
  return 0;
}

}  // namespace

TEST_CASE("comparison tests against cluster bounds") {
  CHECK(eval_forall({CompareOp::kGe, 34}, {34, 37}));
  CHECK_FALSE(eval_forall({CompareOp::kGe, 34}, {31, 37}));
  CHECK(eval_forall({CompareOp::kEq, 3}, {3, 3}));
  CHECK_FALSE(eval_forall({CompareOp::kEq, 3}, {3, 4}));
  CHECK(eval_forall({CompareOp::kNe, 3}, {4, 9}));
  CHECK(eval_forall({CompareOp::kInRange, 2, 5}, {2, 5}));
  CHECK(eval_none({CompareOp::kGe, 34}, {27, 31}));
  CHECK_FALSE(eval_none({CompareOp::kGe, 31}, {27, 31}));
  CHECK(eval_none({CompareOp::kInRange, 2, 5}, {6, 9}));
  CHECK_FALSE(eval_none({CompareOp::kInRange, 2, 5}, {0, 2}));

  RangeComparison ge{CompareOp::kGe, {33, 37}, {}};
  CHECK(reval_forall(ge, {37, 37}));
  CHECK_FALSE(reval_forall(ge, {34, 34}));
  CHECK(reval_exists(ge, {34, 34}));
  CHECK_FALSE(reval_exists(ge, {27, 31}));
  RangeComparison eq{CompareOp::kEq, {3, 3}, {}};
  CHECK(reval_forall(eq, {3, 3}));
  RangeComparison eq_wide{CompareOp::kEq, {3, 4}, {}};
  CHECK_FALSE(reval_forall(eq_wide, {3, 3}));
  CHECK(reval_exists(eq_wide, {4, 8}));
  RangeComparison in{CompareOp::kInRange, {1, 2}, {5, 6}};
  CHECK(reval_forall(in, {2, 5}));
  CHECK_FALSE(reval_forall(in, {1, 5}));
  CHECK(reval_exists(in, {6, 9}));
  CHECK_FALSE(reval_exists(in, {6.5, 9}));
}

TEST_CASE("micro fixture covers, bounds and verdicts") {
  Dataset ds = testing::micro_dataset();
  CandidateSpace space(ds, testing::micro_query(ds));
  const std::vector<std::string> texts{testing::kMicroParity};
  auto cs = ConstraintSet::parse(texts, ds.schema());
  KdTree tree = build_tree(ds, space, cs, 2, 1);

  // Candidate T >= 34: one cluster holds both matching rows.
  RepairCandidate t34{{34}};
  auto conds = space.conditions(t34);
  auto cover = full_cover_cluster_set(tree, conds);
  REQUIRE(cover.full.size() == 1);
  CHECK(tree.bounds(cover.full[0], 0) == Interval{34, 37});
  CHECK(cover.partial.empty());
  CHECK(cover.resolved_rows.empty());
  auto values = merge_exact(tree, cover);
  CHECK(values == std::vector<std::optional<double>>{2.0, 2.0, 0.0, 0.0});
  CHECK(eval_expr_scalar(*cs.constraints()[0].expr, values) == 1.0);
  CHECK_FALSE(eval_candidate_exact(cs, tree, space, t34));

  // Candidate set with T ranging over [33, 37].
  const Interval range[] = {{33, 37}};
  CandidateSet set = space.from_value_ranges(range);
  auto verdict = evaluate_candidate_set(tree, space, cs, set);
  REQUIRE(verdict.cover.full.size() == 1);
  REQUIRE(verdict.cover.partial.size() == 1);
  CHECK(verdict.cover.full[0] == leaf_of(tree, 37));
  CHECK(verdict.cover.partial[0] == leaf_of(tree, 34));
  REQUIRE(verdict.bindings.size() == 4);
  CHECK(verdict.bindings[0].value == Interval{1, 2});
  CHECK(verdict.bindings[1].value == Interval{1, 2});
  CHECK(verdict.bindings[2].value == Interval{0, 0});
  CHECK(verdict.bindings[3].value == Interval{0, 0});
  auto phi = constraint_bound(cs, 0, verdict.bindings);
  CHECK(phi.value == Interval{0.5, 2});
  CHECK_FALSE(verdict.some_valid);
  CHECK_FALSE(verdict.all_valid);

  // The same covers come straight from the value range.
  const RangeComparison rc[] = {{CompareOp::kGe, {33, 37}, {}}};
  auto direct = par_cover_cluster_set(tree, rc);
  CHECK(direct.full == verdict.cover.full);
  CHECK(direct.partial == verdict.cover.partial);
}

TEST_CASE("exact covers reproduce the selected rows") {
  Rng rng(8);
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto inst = testing::random_instance(seed, 500);
    CandidateSpace space(inst.ds, inst.query);
    auto cs = inst.constraint_set();
    KdTree tree = build_tree(inst.ds, space, cs,
                             static_cast<std::size_t>(rng.uniform_int(2, 5)),
                             static_cast<std::size_t>(rng.uniform_int(1, 15)));
    for (int t = 0; t < 15; ++t) {
      auto set = testing::random_set(space, rng);
      auto members = testing::expand(space, set);
      const auto& cand = members[static_cast<std::size_t>(rng.uniform_int(
          0, static_cast<std::int64_t>(members.size()) - 1))];
      auto conds = space.conditions(cand);
      auto cover = full_cover_cluster_set(tree, conds);
      auto got = rows_of(tree, cover.full);
      for (auto r : cover.resolved_rows) CHECK(got.insert(r).second);
      CHECK(got == scan(inst.ds, space, cand));
      for (NodeId id : cover.partial) CHECK(tree.node(id).is_leaf());
      CHECK(merge_exact(tree, cover) ==
            bf_aggregates(inst.ds, space, cs, cand));
      CHECK(eval_candidate_exact(cs, tree, space, cand) ==
            bf_eval_candidate(inst.ds, space, cs, cand));
    }
  }
}

TEST_CASE("partial covers sandwich every member's result") {
  Rng rng(12);
  for (std::uint64_t seed = 50; seed < 90; ++seed) {
    auto inst = testing::random_instance(seed, 500);
    CandidateSpace space(inst.ds, inst.query);
    auto cs = inst.constraint_set();
    KdTree tree = build_tree(inst.ds, space, cs,
                             static_cast<std::size_t>(rng.uniform_int(2, 5)),
                             static_cast<std::size_t>(rng.uniform_int(1, 15)));
    for (int t = 0; t < 10; ++t) {
      auto set = testing::random_set(space, rng);
      auto cover = par_cover_cluster_set(tree, space.range_conditions(set));
      auto inner = rows_of(tree, cover.full);
      auto outer = inner;
      for (auto r : rows_of(tree, cover.partial)) {
        CHECK(outer.insert(r).second);  // full and partial are disjoint
      }
      auto members = testing::expand(space, set);
      for (std::size_t i = 0; i < members.size(); i += 1 + members.size() / 25) {
        auto result = scan(inst.ds, space, members[i]);
        CHECK(std::includes(result.begin(), result.end(), inner.begin(),
                            inner.end()));
        CHECK(std::includes(outer.begin(), outer.end(), result.begin(),
                            result.end()));
      }
    }
  }
}

TEST_CASE("corrupted summaries change exact verdicts") {
  Dataset ds = testing::micro_dataset();
  CandidateSpace space(ds, testing::micro_query(ds));
  const std::vector<std::string> texts{testing::kMicroParity};
  auto cs = ConstraintSet::parse(texts, ds.schema());
  KdTree tree = build_tree(ds, space, cs, 2, 1);
  auto before = merge_exact(tree, full_cover_cluster_set(
                                      tree, space.conditions({{34}})));
  tree.corrupt_summaries();
  auto after = merge_exact(tree, full_cover_cluster_set(
                                     tree, space.conditions({{34}})));
  CHECK(before != after);
}

TEST_CASE("evaluation counters accumulate") {
  Dataset ds = testing::micro_dataset();
  CandidateSpace space(ds, testing::micro_query(ds));
  const std::vector<std::string> texts{testing::kMicroParity};
  auto cs = ConstraintSet::parse(texts, ds.schema());
  KdTree tree = build_tree(ds, space, cs, 2, 1);
  EvalCounters counters;
  eval_candidate_exact(cs, tree, space, {{34}}, &counters);
  CHECK(counters.clusters_accessed > 0);
  const auto first = counters.clusters_accessed;
  eval_candidate_exact(cs, tree, space, {{31}}, &counters);
  CHECK(counters.clusters_accessed > first);
}
