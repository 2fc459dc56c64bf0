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


#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "repairkit/datagen.hpp"
#include "repairkit/format.hpp"
#include "repairkit/oracle.hpp"

namespace repairkit::testing {

Dataset micro_dataset() {
  return Dataset({"T", "G", "Y"},
                 {{31, 27, 37, 34}, {0, 1, 1, 1}, {1, 0, 1, 1}},
                 {{"G", {"F", "M"}}});
}

UserQuery micro_query(const Dataset& ds) {
  return UserQuery::from_json(
      nlohmann::json::parse(
          R"({"predicates":[{"attr":"T","op":">=","const":33}]})"),
      ds);
}

ConstraintSet Instance::constraint_set() const {
  return ConstraintSet::parse(constraints, ds.schema());
}

std::string Instance::describe() const {
  std::ostringstream os;
  os << "seed=" << seed << " rows=" << ds.row_count() << " k=" << k
     << " query=" << query.to_json().dump();
  for (const auto& c : constraints) os << " constraint=[" << c << "]";
  return os.str();
}

namespace {

constexpr const char* kTemplates[] = {
    "count(G == 1 && Y == 1) / count(G == 1) - "
    "count(G == 0 && Y == 1) / count(G == 0)",
    "count(Y == 1)",
    "count()",
    "sum(V, G == 1)",
    "min(V)",
    "max(V, Y == 1)",
    "avg(V)",
    "count(Y == 1) / count()",
    "sum(V) - 2 * count(G == 0)",
    "min(V, G == 0) + max(V, G == 1)",
};

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<std::int64_t>(v.size()) - 1))];
}

}  // namespace

Instance random_instance(std::uint64_t seed, std::size_t max_rows) {
  Rng rng(seed);
  Instance inst;
  inst.seed = seed;
  const auto n = static_cast<std::size_t>(
      rng.uniform_int(20, static_cast<std::int64_t>(max_rows)));

  // Numeric predicate attributes on evenly spaced grids.
  struct Grid {
    double offset;
    double step;
    std::int64_t size;
  };
  std::vector<Grid> grids;
  std::vector<std::vector<double>> cols;
  const std::vector<double> steps{1, 0.5, 2, 3};
  for (int a = 0; a < 3; ++a) {
    Grid g{static_cast<double>(rng.uniform_int(-5, 20)), pick(rng, steps),
           rng.uniform_int(2, 15)};
    std::vector<double> col(n);
    for (auto& x : col) {
      x = g.offset + g.step * static_cast<double>(rng.uniform_int(0, g.size - 1));
    }
    grids.push_back(g);
    cols.push_back(std::move(col));
  }
  const auto categories = rng.uniform_int(2, 4);
  std::vector<double> cat(n), grp(n), y(n), v(n);
  const double gp = 0.3 + 0.4 * rng.uniform();
  for (std::size_t r = 0; r < n; ++r) {
    cat[r] = static_cast<double>(rng.uniform_int(0, categories - 1));
    grp[r] = rng.uniform() < gp ? 1 : 0;
    // Outcome leans on the first attribute and the group so that parity
    // differs across candidate results.
    const double pos = (cols[0][r] - grids[0].offset) /
                       (grids[0].step * static_cast<double>(grids[0].size));
    const double p = 0.2 + 0.5 * pos + (grp[r] == 1 ? 0.1 : -0.1);
    y[r] = rng.uniform() < p ? 1 : 0;
    v[r] = static_cast<double>(rng.uniform_int(-5, 10));
  }
  std::vector<std::string> labels{"a", "b", "c", "d"};
  labels.resize(static_cast<std::size_t>(categories));
  inst.ds = Dataset({"P0", "P1", "P2", "C", "G", "Y", "V"},
                    {cols[0], cols[1], cols[2], cat, grp, y, v},
                    {{"C", labels}});

  // Predicates.
  std::vector<std::string> attrs{"P0", "P1", "P2", "C"};
  for (std::size_t i = attrs.size(); i > 1; --i) {
    std::swap(attrs[i - 1],
              attrs[static_cast<std::size_t>(
                  rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
  }
  const auto pred_count = static_cast<std::size_t>(rng.uniform_int(2, 3));
  bool used_range = false;
  const std::vector<CompareOp> ops{CompareOp::kLt, CompareOp::kLe,
                                   CompareOp::kGt, CompareOp::kGe,
                                   CompareOp::kEq, CompareOp::kNe,
                                   CompareOp::kInRange};
  for (std::size_t i = 0; i < pred_count; ++i) {
    Predicate p;
    p.attr = attrs[i];
    if (p.attr == "C") {
      p.op = rng.uniform() < 0.5 ? CompareOp::kEq : CompareOp::kNe;
      p.constant = static_cast<double>(rng.uniform_int(0, categories - 1));
    } else {
      const Grid& g = grids[static_cast<std::size_t>(p.attr[1] - '0')];
      p.op = pick(rng, ops);
      if (p.op == CompareOp::kInRange && (used_range || g.size > 8)) {
        p.op = CompareOp::kGe;
      }
      used_range = used_range || p.op == CompareOp::kInRange;
      auto constant = [&] {
        const double u = rng.uniform();
        const double base =
            g.offset + g.step * static_cast<double>(rng.uniform_int(0, g.size - 1));
        if (u < 0.6) return base;
        if (u < 0.8) return base + g.step / 2;
        if (u < 0.9) return 0.0;
        return g.offset + g.step * static_cast<double>(g.size + 1);
      };
      p.constant = constant();
      if (p.op == CompareOp::kInRange) {
        p.constant_high = constant();
        if (p.constant > p.constant_high) std::swap(p.constant, p.constant_high);
      }
    }
    inst.query.predicates.push_back(p);
  }
  const std::vector<double> weights{1, 1, 0.5, 2};
  for (std::size_t i = 0; i < pred_count; ++i) {
    inst.query.weights.push_back(pick(rng, weights));
  }
  const std::vector<std::size_t> ks{1, 3, 7};
  inst.k = pick(rng, ks);

  // Constraints with thresholds near the value at a random candidate.
  CandidateSpace space(inst.ds, inst.query);
  const auto count = rng.uniform_int(1, 2);
  for (std::int64_t c = 0; c < count; ++c) {
    const std::string expr =
        kTemplates[rng.uniform_int(0, std::size(kTemplates) - 1)];
    std::vector<std::uint32_t> idx;
    for (const auto& slot : space.slots()) {
      idx.push_back(static_cast<std::uint32_t>(rng.uniform_int(
          0, static_cast<std::int64_t>(slot.domain.size()) - 1)));
    }
    const std::vector<std::string> probe_text{expr + " <= 0"};
    auto probe = ConstraintSet::parse(probe_text, inst.ds.schema());
    auto bindings = bf_aggregates(inst.ds, space, probe, space.at(idx));
    double phi =
        try_eval_expr_scalar(*probe.constraints()[0].expr, bindings).value_or(0);
    // Round to a short decimal so the threshold text is exact.
    phi = std::round(phi * 100) / 100;
    const double jitter = std::round(rng.uniform() * 20) / 100;
    const auto form = rng.uniform_int(0, 4);
    std::string text = expr;
    switch (form) {
      case 0: text += " <= " + format_double(phi + jitter); break;
      case 1: text += " < " + format_double(phi + jitter); break;
      case 2: text += " >= " + format_double(phi - jitter); break;
      case 3: text += " > " + format_double(phi - jitter); break;
      default:
        text += " in [" + format_double(phi - jitter) + ", " +
                format_double(phi + jitter + 0.05) + "]";
    }
    inst.constraints.push_back(text);
  }
  return inst;
}

std::vector<RepairCandidate> expand(const CandidateSpace& space,
                                    const CandidateSet& set) {
  std::vector<RepairCandidate> out;
  if (set.ranges.empty()) return out;
  for (const auto& r : set.ranges) {
    if (r.empty()) return out;
  }
  std::vector<std::uint32_t> idx;
  for (const auto& r : set.ranges) idx.push_back(r.lo);
  while (true) {
    out.push_back(space.at(idx));
    std::size_t s = idx.size();
    while (s > 0) {
      --s;
      if (idx[s] < set.ranges[s].hi) {
        ++idx[s];
        break;
      }
      idx[s] = set.ranges[s].lo;
      if (s == 0) return out;
    }
  }
}

}  // namespace repairkit::testing
