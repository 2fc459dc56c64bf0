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


#include <cmath>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "repairkit/dataset.hpp"
#include "repairkit/datagen.hpp"
#include "repairkit/error.hpp"

using namespace repairkit;

namespace {

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::kIo;
}

}  // namespace

TEST_CASE("dataset construction checks invariants") {
  CHECK(kind_of([] { Dataset({"a", "a"}, {{1}, {2}}); }) == ErrorKind::kSchema);
  CHECK(kind_of([] { Dataset({"a", ""}, {{1}, {2}}); }) == ErrorKind::kSchema);
  CHECK(kind_of([] { Dataset({"a", "b"}, {{1}, {2, 3}}); }) ==
        ErrorKind::kSchema);
  CHECK(kind_of([] { Dataset({"a"}, {{1}, {2}}); }) == ErrorKind::kSchema);
  CHECK(kind_of([] {
          Dataset({"a"}, {{std::numeric_limits<double>::quiet_NaN()}});
        }) == ErrorKind::kParse);
  Dataset ds({"a", "b"}, {{1, 2}, {3, 4}});
  CHECK(ds.row_count() == 2);
  CHECK(ds.index_of("b") == 1);
  CHECK_FALSE(ds.find("z").has_value());
  CHECK(kind_of([&] { ds.index_of("z"); }) == ErrorKind::kUnknownAttribute);
}

TEST_CASE("csv reading assigns categorical codes by first appearance") {
  std::istringstream in("Major,Score\r\nEE,3\nCS,4\nEE,5\n\nME,1\n");
  Dataset ds = read_csv(in, {"Major"});
  REQUIRE(ds.row_count() == 4);
  CHECK(ds.is_categorical("Major"));
  CHECK_FALSE(ds.is_categorical("Score"));
  CHECK(ds.labels("Major") == std::vector<std::string>{"EE", "CS", "ME"});
  CHECK(ds.code_of("Major", "CS") == 1.0);
  CHECK_FALSE(ds.code_of("Major", "XX").has_value());
  auto col = ds.column("Major");
  CHECK(std::vector<double>(col.begin(), col.end()) ==
        std::vector<double>{0, 1, 0, 2});
  CHECK(ds.category_mapping()["Major"]["ME"] == 2);
}

TEST_CASE("csv reading rejects malformed input") {
  {
    std::istringstream in("");
    CHECK(kind_of([&] { read_csv(in); }) == ErrorKind::kSchema);
  }
  {
    std::istringstream in("a,a\n1,2\n");
    CHECK(kind_of([&] { read_csv(in); }) == ErrorKind::kSchema);
  }
  {
    std::istringstream in("a,b\n1\n");
    CHECK(kind_of([&] { read_csv(in); }) == ErrorKind::kParse);
  }
  {
    std::istringstream in("a\nx\n");
    CHECK(kind_of([&] { read_csv(in); }) == ErrorKind::kParse);
  }
  {
    std::istringstream in("a\ninf\n");
    CHECK(kind_of([&] { read_csv(in); }) == ErrorKind::kParse);
  }
  {
    std::istringstream in("a\n1\n");
    CHECK(kind_of([&] { read_csv(in, {"b"}); }) ==
          ErrorKind::kUnknownAttribute);
  }
  CHECK(kind_of([] { load_csv("/nonexistent/file.csv"); }) == ErrorKind::kIo);
}

TEST_CASE("csv round trip is bit exact") {
  Rng rng(3);
  std::vector<double> a, b;
  std::vector<double> cat;
  for (int i = 0; i < 200; ++i) {
    a.push_back((rng.uniform() - 0.5) * std::pow(10.0, rng.uniform_int(-300, 300)));
    b.push_back(0.1 * static_cast<double>(i));
    cat.push_back(static_cast<double>(i % 3));
  }
  a.push_back(0.0);
  b.push_back(1e-320);  // subnormal
  cat.push_back(0);
  Dataset ds({"a", "b", "c"}, {a, b, cat}, {{"c", {"x y", "z", "w"}}});
  std::stringstream io;
  write_csv(ds, io);
  Dataset back = read_csv(io, {"c"});
  REQUIRE(back.row_count() == ds.row_count());
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t r = 0; r < ds.row_count(); ++r) {
      CHECK(back.value(r, c) == ds.value(r, c));
    }
  }
  CHECK(back.labels("c") == ds.labels("c"));
}

TEST_CASE("active domain is sorted and distinct") {
  Dataset ds({"x"}, {{3, 1, 3, 2, 1}});
  auto dom = active_domain(ds, "x");
  CHECK(dom.attribute == "x");
  CHECK(dom.values == std::vector<double>{1, 2, 3});
}
