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

#ifndef REPAIRKIT_QUERY_HPP
#define REPAIRKIT_QUERY_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "repairkit/dataset.hpp"
#include "repairkit/interval.hpp"

namespace repairkit {

enum class CompareOp { kLt, kLe, kGt, kGe, kEq, kNe, kInRange };

std::string_view symbol(CompareOp op);
// Accepts "<", "<=", ">", ">=", "=", "==", "!=", "<>", "in".
std::optional<CompareOp> parse_compare_op(std::string_view text);

// Pushes a negation into a scalar operator: < <-> >=, <= <-> >, = <-> !=.
// kInRange has no single-operator negation (see eval_none in coverage.hpp)
// and throws std::invalid_argument.
CompareOp negate(CompareOp op);

// `value op constant`, or constant <= value <= constant_high for kInRange.
bool compare(double value, CompareOp op, double constant,
             double constant_high = 0);

// One concrete selection comparison of a candidate's condition.
struct Comparison {
  CompareOp op = CompareOp::kEq;
  double value = 0;
  double value_high = 0;  // kInRange only
};

// A comparison whose constant ranges over an interval (candidate sets).
struct RangeComparison {
  CompareOp op = CompareOp::kEq;
  Interval value;
  Interval value_high;  // kInRange only
};

struct Predicate {
  std::string attr;
  CompareOp op = CompareOp::kGe;
  double constant = 0;
  double constant_high = 0;  // kInRange only

  std::size_t slot_count() const noexcept {
    return op == CompareOp::kInRange ? 2 : 1;
  }
};

struct UserQuery {
  std::vector<Predicate> predicates;
  std::vector<double> weights;

  // Throws Error{kBadQuery|kUnknownAttribute}.
  void validate(const Dataset& ds) const;

  // {"predicates":[{"attr":..,"op":..,"const":..}], "weights":[..]}.
  // Categorical constants may be given as labels; weights default to 1.
  static UserQuery from_json(const nlohmann::json& j, const Dataset& ds);
  nlohmann::json to_json() const;
};

// |c' - c| / |c| for numeric attributes (|c' - c| when c == 0); 0/1
// mismatch for categorical ones.
double predicate_distance(double original, double repaired,
                          bool is_categorical);

// Constants of a candidate, one per slot. A kInRange predicate occupies two
// consecutive slots (low, high).
struct RepairCandidate {
  std::vector<double> constants;

  friend bool operator==(const RepairCandidate&,
                         const RepairCandidate&) = default;
};

struct ScoredCandidate {
  RepairCandidate candidate;
  double distance = 0;

  friend bool operator==(const ScoredCandidate&,
                         const ScoredCandidate&) = default;
};

// The total order used everywhere: distance, then constants ascending.
bool ranks_before(const ScoredCandidate& a, const ScoredCandidate& b);

// Inclusive index interval into a slot's sorted domain; lo > hi is empty.
struct IndexRange {
  std::uint32_t lo = 0;
  std::uint32_t hi = 0;

  bool empty() const noexcept { return lo > hi; }
  std::uint32_t size() const noexcept { return empty() ? 0 : hi - lo + 1; }
  bool is_singleton() const noexcept { return lo == hi; }

  friend auto operator<=>(const IndexRange&, const IndexRange&) = default;
};

struct CandidateSet {
  std::vector<IndexRange> ranges;  // one per slot

  bool all_singleton() const;
  friend bool operator==(const CandidateSet&, const CandidateSet&) = default;
};

// Per-slot view of the repair space.
struct Slot {
  std::size_t predicate = 0;
  std::size_t column = 0;
  double original = 0;
  double weight = 0;  // predicate weight, halved for the two kInRange slots
  bool categorical = false;
  std::vector<double> domain;
  std::vector<std::string> labels;  // code -> label, categorical only
};

class CandidateSpace {
 public:
  // Throws Error{kEmptyDomain} when the dataset has no rows, plus whatever
  // UserQuery::validate throws.
  CandidateSpace(const Dataset& ds, const UserQuery& query);

  const UserQuery& query() const noexcept { return query_; }
  std::span<const Slot> slots() const noexcept { return slots_; }
  std::size_t slot_count() const noexcept { return slots_.size(); }
  std::size_t predicate_count() const noexcept {
    return query_.predicates.size();
  }
  // Dataset column of each predicate, in predicate order.
  const std::vector<std::size_t>& predicate_columns() const noexcept {
    return predicate_columns_;
  }

  // Weighted contribution of one slot holding `value`.
  double term(std::size_t slot, double value) const;
  double distance(const RepairCandidate& cand) const;
  // Smallest distance of any candidate in `set`.
  double lower_bound(const CandidateSet& set) const;

  CandidateSet full_set() const;
  // Number of candidates, saturating at UINT64_MAX.
  std::uint64_t size() const { return size(full_set()); }
  std::uint64_t size(const CandidateSet& set) const;
  bool contains(const CandidateSet& set, const RepairCandidate& cand) const;

  RepairCandidate at(std::span<const std::uint32_t> indices) const;
  std::vector<Comparison> conditions(const RepairCandidate& cand) const;
  std::vector<RangeComparison> range_conditions(const CandidateSet& set) const;

  // Maps closed value intervals onto domain indices. A slot whose interval
  // holds no domain value gets an empty range.
  CandidateSet from_value_ranges(std::span<const Interval> ranges) const;

  nlohmann::json candidate_to_json(const RepairCandidate& cand) const;

 private:
  UserQuery query_;
  std::vector<Slot> slots_;
  std::vector<std::size_t> predicate_columns_;
};

double repair_distance(const CandidateSpace& space,
                       const RepairCandidate& cand);
double candidate_set_distance_lb(const CandidateSpace& space,
                                 const CandidateSet& set);

// Lazily yields the candidates of a space (or of one candidate set) in
// ranks_before order, each exactly once. Best-first search over per-slot
// lists sorted by (term, value); a successor advances one slot, so distances
// never shrink along successor edges. Candidates tied on distance are
// released as a batch sorted by constants, which keeps the order exact even
// when rounding hides a larger term inside an equal sum.
class DistanceEnumerator {
 public:
  explicit DistanceEnumerator(const CandidateSpace& space);
  // Throws Error{kEmptyDomain} if `set` has an empty range.
  DistanceEnumerator(const CandidateSpace& space, const CandidateSet& set);

  std::optional<ScoredCandidate> next();
  std::size_t yielded() const noexcept { return yielded_; }

 private:
  struct Entry {
    double term;
    double value;
  };
  struct State {
    double distance;
    std::vector<std::uint32_t> pos;
  };
  struct PosHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept;
  };
  // Heap order: true when `a` pops after `b`.
  bool later(const State& a, const State& b) const;

  void init(const CandidateSpace& space, const CandidateSet& set);
  double distance_of(const std::vector<std::uint32_t>& pos) const;
  void push(std::vector<std::uint32_t> pos);
  // Pops every state tied at the smallest distance (expanding successors
  // that stay tied) and sorts them lexicographically into pending_.
  void fill_batch();

  std::vector<std::vector<Entry>> lists_;
  std::vector<State> heap_;
  std::unordered_set<std::vector<std::uint32_t>, PosHash> seen_;
  std::vector<ScoredCandidate> pending_;
  std::size_t pending_pos_ = 0;
  std::size_t yielded_ = 0;
};

}  // namespace repairkit

#endif  // REPAIRKIT_QUERY_HPP
