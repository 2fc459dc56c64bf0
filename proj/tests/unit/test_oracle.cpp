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


#include "doctest.h"
#include "repairkit/error.hpp"
#include "repairkit/oracle.hpp"
#include "repairkit/search.hpp"
#include "support.hpp"

using namespace repairkit;

TEST_CASE("full-scan aggregates on the micro fixture") {
  Dataset ds = testing::micro_dataset();
  CandidateSpace space(ds, testing::micro_query(ds));
  const std::vector<std::string> texts{testing::kMicroParity};
  auto cs = ConstraintSet::parse(texts, ds.schema());
  std::uint64_t accesses = 0;
  auto values = bf_aggregates(ds, space, cs, {{34}}, &accesses);
  CHECK(values == std::vector<std::optional<double>>{2.0, 2.0, 0.0, 0.0});
  CHECK(accesses == 4);
  CHECK_FALSE(bf_eval_candidate(ds, space, cs, {{34}}));
  CHECK(bf_eval_candidate(ds, space, cs, {{31}}));
  // t1 (F, 1) joins: 2/2 - 1/1 = 0.
  auto at31 = bf_aggregates(ds, space, cs, {{31}});
  CHECK(at31 == std::vector<std::optional<double>>{2.0, 2.0, 1.0, 1.0});
}

TEST_CASE("brute-force top-k counts one scan per evaluation") {
  Dataset ds = testing::micro_dataset();
  CandidateSpace space(ds, testing::micro_query(ds));
  const std::vector<std::string> texts{testing::kMicroParity};
  auto cs = ConstraintSet::parse(texts, ds.schema());
  auto r = bf_topk(ds, space, cs, 1);
  CHECK(r.algorithm == "bf");
  CHECK(r.stats.nce == 2);
  CHECK(r.stats.tuple_accesses == 8);
  CHECK(r.stats.nca == r.stats.tuple_accesses);
  CHECK(r.repairs[0].distance == doctest::Approx(2.0 / 33));
}

TEST_CASE("materialized oracle refuses oversized spaces") {
  auto inst = testing::random_instance(3, 100);
  CandidateSpace space(inst.ds, inst.query);
  auto cs = inst.constraint_set();
  try {
    materialize_topk(inst.ds, space, cs, 1, 1);
    FAIL("expected SpaceTooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kSpaceTooLarge);
  }
  auto all = materialize_topk(inst.ds, space, cs, space.size());
  CHECK(std::is_sorted(all.begin(), all.end(), ranks_before));
  for (const auto& s : all) {
    CHECK(bf_eval_candidate(inst.ds, space, cs, s.candidate));
  }
}
