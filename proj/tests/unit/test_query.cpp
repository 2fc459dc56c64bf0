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
#include <stdexcept>

#include "doctest.h"
#include "repairkit/datagen.hpp"
#include "repairkit/error.hpp"
#include "repairkit/query.hpp"
#include "support.hpp"

using namespace repairkit;
using nlohmann::json;

namespace {

Dataset students() {
  return Dataset({"Major", "TestScore", "GPA"},
                 {{0, 1, 0, 2}, {30, 33, 35, 33}, {3.5, 3.9, 3.8, 3.7}},
                 {{"Major", {"CS", "EE", "ME"}}});
}

UserQuery parse_query(const Dataset& ds, const char* text) {
  return UserQuery::from_json(json::parse(text), ds);
}

// Every candidate of the space with its distance, in the canonical order.
std::vector<ScoredCandidate> sorted_cross_product(const CandidateSpace& space) {
  std::vector<ScoredCandidate> all;
  for (auto& cand : testing::expand(space, space.full_set())) {
    // Independent distance: sum the per-predicate terms directly.
    double d = 0;
    std::size_t slot = 0;
    const auto& q = space.query();
    for (std::size_t p = 0; p < q.predicates.size(); ++p) {
      const auto& pred = q.predicates[p];
      const bool cat = space.slots()[slot].categorical;
      if (pred.op == CompareOp::kInRange) {
        d += q.weights[p] / 2 *
             predicate_distance(pred.constant, cand.constants[slot], cat);
        d += q.weights[p] / 2 *
             predicate_distance(pred.constant_high, cand.constants[slot + 1],
                                cat);
        slot += 2;
      } else {
        d += q.weights[p] *
             predicate_distance(pred.constant, cand.constants[slot], cat);
        slot += 1;
      }
    }
    all.push_back({cand, d});
  }
  std::sort(all.begin(), all.end(), ranks_before);
  return all;
}

}  // namespace

TEST_CASE("comparison operators") {
  CHECK(parse_compare_op(">=") == CompareOp::kGe);
  CHECK(parse_compare_op("==") == CompareOp::kEq);
  CHECK(parse_compare_op("=") == CompareOp::kEq);
  CHECK(parse_compare_op("<>") == CompareOp::kNe);
  CHECK(parse_compare_op("in") == CompareOp::kInRange);
  CHECK_FALSE(parse_compare_op("=>").has_value());
  CHECK(negate(CompareOp::kLt) == CompareOp::kGe);
  CHECK(negate(CompareOp::kLe) == CompareOp::kGt);
  CHECK(negate(CompareOp::kEq) == CompareOp::kNe);
  CHECK_THROWS_AS(negate(CompareOp::kInRange), std::invalid_argument);
  CHECK(compare(3, CompareOp::kInRange, 1, 3));
  CHECK_FALSE(compare(4, CompareOp::kInRange, 1, 3));
  CHECK(compare(2, CompareOp::kNe, 3));
}

TEST_CASE("predicate distance examples") {
  CHECK(predicate_distance(3.80, 3.90, false) ==
        doctest::Approx(0.0263158).epsilon(1e-6));
  CHECK(predicate_distance(33, 33, false) == 0.0);
  CHECK(predicate_distance(0, 1, true) == 1.0);
  CHECK(predicate_distance(1, 1, true) == 0.0);
  CHECK(predicate_distance(0, 2.5, false) == 2.5);
  CHECK(predicate_distance(-4, -2, false) == 0.5);
}

TEST_CASE("repair distance examples") {
  Dataset ds = students();
  auto q = parse_query(ds, R"({"predicates":[
      {"attr":"Major","op":"=","const":"CS"},
      {"attr":"TestScore","op":">=","const":33},
      {"attr":"GPA","op":">=","const":3.80}]})");
  CHECK(q.weights == std::vector<double>{1, 1, 1});
  CandidateSpace space(ds, q);
  CHECK(space.distance({{1, 33, 3.9}}) ==
        doctest::Approx(1.0263).epsilon(1e-4));
  CHECK(space.distance({{0, 33, 3.8}}) == 0.0);

  Dataset one({"x"}, {{10, 15}});
  auto q1 = parse_query(one,
      R"({"predicates":[{"attr":"x","op":">=","const":10}],"weights":[2]})");
  CandidateSpace s1(one, q1);
  CHECK(s1.distance({{15}}) == 1.0);
}

TEST_CASE("query json handling") {
  Dataset ds = students();
  auto q = parse_query(ds, R"({"predicates":[
      {"attr":"GPA","op":"in","const":[3.5, 3.9]},
      {"attr":"Major","op":"!=","const":"EE"}], "weights":[2, 1]})");
  REQUIRE(q.predicates.size() == 2);
  CHECK(q.predicates[0].op == CompareOp::kInRange);
  CHECK(q.predicates[0].constant_high == 3.9);
  CHECK(q.predicates[1].constant == 1.0);
  auto back = UserQuery::from_json(q.to_json(), ds);
  CHECK(back.to_json() == q.to_json());

  auto kind = [&](const char* text) {
    try {
      parse_query(ds, text);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::kIo;
  };
  CHECK(kind(R"({"predicates":[{"attr":"Nope","op":">=","const":1}]})") ==
        ErrorKind::kUnknownAttribute);
  CHECK(kind(R"({"predicates":[{"attr":"GPA","op":"~","const":1}]})") ==
        ErrorKind::kBadQuery);
  CHECK(kind(R"({"predicates":[]})") == ErrorKind::kBadQuery);
  CHECK(kind(R"({"predicates":[{"attr":"Major","op":"=","const":"Art"}]})") ==
        ErrorKind::kBadQuery);
  CHECK(kind(R"({"predicates":[{"attr":"GPA","op":">=","const":1}],
                 "weights":[1, 2]})") == ErrorKind::kBadQuery);
  CHECK(kind(R"({"predicates":[{"attr":"GPA","op":"in","const":3}]})") ==
        ErrorKind::kBadQuery);
}

TEST_CASE("candidate space layout") {
  Dataset ds = students();
  auto q = parse_query(ds, R"({"predicates":[
      {"attr":"TestScore","op":"in","const":[31, 34]},
      {"attr":"Major","op":"=","const":"CS"}], "weights":[2, 1]})");
  CandidateSpace space(ds, q);
  REQUIRE(space.slot_count() == 3);
  CHECK(space.slots()[0].weight == 1.0);
  CHECK(space.slots()[1].weight == 1.0);
  CHECK(space.slots()[2].categorical);
  CHECK(space.slots()[0].domain == std::vector<double>{30, 33, 35});
  CHECK(space.size() == 27);
  const std::uint32_t idx[] = {1, 2, 1};
  auto cand = space.at(idx);
  CHECK(cand.constants == std::vector<double>{33, 35, 1});
  auto conds = space.conditions(cand);
  REQUIRE(conds.size() == 2);
  CHECK(conds[0].op == CompareOp::kInRange);
  CHECK(conds[0].value_high == 35);
  auto j = space.candidate_to_json(cand);
  CHECK(j["condition"] == "TestScore IN [33, 35] AND Major = 'EE'");

  // Lower bound examples.
  Dataset t({"T"}, {{27, 31, 34, 37}});
  auto qt = parse_query(t,
      R"({"predicates":[{"attr":"T","op":">=","const":33}]})");
  CandidateSpace st(t, qt);
  CHECK(st.lower_bound({{{2, 3}}}) == doctest::Approx(1.0 / 33));
  CHECK(st.lower_bound({{{1, 3}}}) == 0.0);
  CHECK(st.lower_bound({{{3, 3}}}) == st.distance({{37}}));
  const Interval r[] = {{33, 37}};
  CHECK(st.from_value_ranges(r) == CandidateSet{{{2, 3}}});
  const Interval none[] = {{32, 33}};
  CHECK(st.from_value_ranges(none).ranges[0].empty());
  CHECK(st.contains({{{2, 3}}}, {{34}}));
  CHECK_FALSE(st.contains({{{2, 3}}}, {{31}}));
}

TEST_CASE("empty dataset has no candidates") {
  Dataset ds({"x"}, {{}});
  UserQuery q;
  q.predicates.push_back({"x", CompareOp::kGe, 1, 0});
  q.weights = {1};
  try {
    CandidateSpace space(ds, q);
    FAIL("expected EmptyDomain");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kEmptyDomain);
  }
}

TEST_CASE("lower bound never exceeds member distances") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    auto inst = testing::random_instance(seed, 200);
    CandidateSpace space(inst.ds, inst.query);
    Rng rng(seed * 31);
    for (int t = 0; t < 20; ++t) {
      auto set = testing::random_set(space, rng);
      const double lb = space.lower_bound(set);
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : testing::expand(space, set)) {
        best = std::min(best, space.distance(c));
      }
      CHECK(lb <= best);
      if (set.all_singleton()) CHECK(lb == best);
    }
  }
}

TEST_CASE("enumeration matches the sorted cross product") {
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    auto inst = testing::random_instance(seed, 150);
    CandidateSpace space(inst.ds, inst.query);
    auto expected = sorted_cross_product(space);
    DistanceEnumerator e(space);
    std::vector<ScoredCandidate> got;
    while (auto c = e.next()) got.push_back(*c);
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].candidate == expected[i].candidate);
      CHECK(got[i].distance == doctest::Approx(expected[i].distance));
    }
    CHECK(e.yielded() == got.size());
  }
}

TEST_CASE("enumeration within a set yields exactly its members in order") {
  Rng rng(5);
  for (std::uint64_t seed = 100; seed < 140; ++seed) {
    auto inst = testing::random_instance(seed, 150);
    CandidateSpace space(inst.ds, inst.query);
    auto set = testing::random_set(space, rng);
    DistanceEnumerator e(space, set);
    std::vector<ScoredCandidate> got;
    while (auto c = e.next()) got.push_back(*c);
    auto members = testing::expand(space, set);
    CHECK(got.size() == members.size());
    CHECK(std::is_sorted(got.begin(), got.end(), ranks_before));
    std::set<std::vector<double>> seen;
    for (const auto& g : got) {
      CHECK(space.contains(set, g.candidate));
      seen.insert(g.candidate.constants);
    }
    CHECK(seen.size() == got.size());
  }
}

TEST_CASE("ties are ordered by constants") {
  // 10 -> 5 and 10 -> 15 are equally far; the smaller constant comes first.
  Dataset ds({"x", "y"}, {{5, 15, 10}, {2, 2, 2}});
  auto q = parse_query(ds, R"({"predicates":[
      {"attr":"x","op":">=","const":10},{"attr":"y","op":"<=","const":2}]})");
  CandidateSpace space(ds, q);
  DistanceEnumerator e(space);
  CHECK(e.next()->candidate.constants == std::vector<double>{10, 2});
  CHECK(e.next()->candidate.constants == std::vector<double>{5, 2});
  CHECK(e.next()->candidate.constants == std::vector<double>{15, 2});
  CHECK_FALSE(e.next().has_value());
}
