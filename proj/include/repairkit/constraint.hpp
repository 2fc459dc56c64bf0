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

#ifndef REPAIRKIT_CONSTRAINT_HPP
#define REPAIRKIT_CONSTRAINT_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "repairkit/dataset.hpp"
#include "repairkit/interval.hpp"
#include "repairkit/query.hpp"

namespace repairkit {

// kAvg only exists in source text; the parser rewrites it to sum / count.
enum class AggFn { kCount, kSum, kMin, kMax, kAvg };

std::string_view symbol(AggFn fn);

struct FilterCondition {
  std::string attr;
  std::size_t column = 0;
  CompareOp op = CompareOp::kEq;
  double constant = 0;
};

struct FilterAggQuery {
  std::size_t id = 0;
  AggFn fn = AggFn::kCount;
  std::string input_attr;  // empty for kCount
  std::size_t input_column = 0;
  std::vector<FilterCondition> filter;  // conjunction; empty accepts all

  bool matches(const Dataset& ds, std::size_t row) const;
};

// Running state of one aggregate over some set of matching tuples. `value`
// is the aggregate itself (count, sum, min or max); neg_sum/pos_sum split a
// sum by the sign of each contribution so partially covered clusters can be
// bounded from both sides.
struct AggState {
  double value = 0;
  double neg_sum = 0;
  double pos_sum = 0;
  std::uint64_t matches = 0;

  static AggState identity(AggFn fn);
  void add(AggFn fn, double x);
  void merge(AggFn fn, const AggState& other);
  // nullopt for MIN/MAX over zero matching tuples.
  std::optional<double> result(AggFn fn) const;

  friend bool operator==(const AggState&, const AggState&) = default;
};

// Exact aggregate over `rows` restricted to the query's filter.
AggState accumulate(const FilterAggQuery& agg, const Dataset& ds,
                    std::span<const std::uint32_t> rows);
std::optional<double> eval_agg_scalar(const FilterAggQuery& agg,
                                      const Dataset& ds,
                                      std::span<const std::uint32_t> rows);

// Immutable arithmetic tree over aggregate leaves.
struct Expr {
  enum class Kind { kLeaf, kConst, kBinary };

  Kind kind = Kind::kConst;
  std::size_t agg = 0;   // kLeaf
  double value = 0;      // kConst
  ArithOp op = ArithOp::kAdd;  // kBinary
  std::shared_ptr<const Expr> lhs;
  std::shared_ptr<const Expr> rhs;

  static std::shared_ptr<const Expr> leaf(std::size_t agg);
  static std::shared_ptr<const Expr> constant(double v);
  static std::shared_ptr<const Expr> binary(ArithOp op,
                                            std::shared_ptr<const Expr> lhs,
                                            std::shared_ptr<const Expr> rhs);
};

bool structurally_equal(const Expr& a, const Expr& b);

// Bindings are indexed by aggregate id; nullopt marks an empty MIN/MAX.
using ScalarBindings = std::span<const std::optional<double>>;

// Throws Error{kUndefinedDivision} for x/0 with x != 0 and for empty
// MIN/MAX bindings, Error{kUnboundAggregate} for ids outside `bindings`.
double eval_expr_scalar(const Expr& expr, ScalarBindings bindings);
// Non-throwing variant: nullopt wherever the throwing one raises
// kUndefinedDivision.
std::optional<double> try_eval_expr_scalar(const Expr& expr,
                                           ScalarBindings bindings);

// Interval binding of one aggregate, with emptiness flags for MIN/MAX.
struct AggBound {
  Interval value;
  bool may_be_empty = false;
  bool always_empty = false;
};

// Result of evaluating Φ over interval bindings. `value` encloses every
// defined scalar result; may_fail/always_fail report whether some/all scalar
// choices hit an undefined division or empty aggregate.
struct ExprBound {
  Interval value;
  bool may_fail = false;
  bool always_fail = false;
};

ExprBound eval_expr_bound(const Expr& expr, std::span<const AggBound> bindings);
// Plain interval evaluation; throws Error{kUnboundAggregate}.
Interval eval_expr_interval(const Expr& expr,
                            std::span<const Interval> bindings);

enum class BoundKind { kLt, kLe, kGt, kGe, kRange };

std::string_view symbol(BoundKind kind);

struct AggregateConstraint {
  std::shared_ptr<const Expr> expr;
  BoundKind kind = BoundKind::kLe;
  double threshold = 0;  // comparison forms
  double low = 0;        // kRange
  double high = 0;       // kRange
  std::vector<FilterAggQuery> aggs;  // aggs[i].id == i

  bool satisfied_by(double phi) const;
  // Every Φ in `phi` satisfies the comparison.
  bool certainly_satisfied(const Interval& phi) const;
  // Some Φ in `phi` satisfies the comparison.
  bool possibly_satisfied(const Interval& phi) const;

  // Whole-constraint scalar verdict; undefined values count as false.
  bool holds(ScalarBindings bindings) const;
  // aceval for all / exists over interval bindings.
  bool holds_for_all(std::span<const AggBound> bindings) const;
  bool holds_for_some(std::span<const AggBound> bindings) const;
};

// Parses `expr cmp NUMBER` or `expr in [NUMBER, NUMBER]`. Throws
// Error{kSyntax} (with a column), Error{kUnknownAttribute} or
// Error{kEmptyRangeBound}.
AggregateConstraint parse_constraint(std::string_view text,
                                     std::span<const std::string> schema);

// Source form that reparses to a structurally identical constraint.
std::string to_string(const AggregateConstraint& c);
std::string to_string(const Expr& expr, const AggregateConstraint& c);

bool structurally_equal(const AggregateConstraint& a,
                        const AggregateConstraint& b);

// Conjunction of constraints with their aggregates flattened into one
// global id space: constraint i owns ids [offsets[i], offsets[i+1]).
class ConstraintSet {
 public:
  ConstraintSet() = default;
  // Throws Error{kBadQuery} when empty.
  explicit ConstraintSet(std::vector<AggregateConstraint> constraints);

  static ConstraintSet parse(std::span<const std::string> texts,
                             std::span<const std::string> schema);

  const std::vector<AggregateConstraint>& constraints() const noexcept {
    return constraints_;
  }
  const std::vector<FilterAggQuery>& aggs() const noexcept { return aggs_; }
  std::size_t agg_count() const noexcept { return aggs_.size(); }

  bool holds(ScalarBindings bindings) const;
  bool holds_for_all(std::span<const AggBound> bindings) const;
  bool holds_for_some(std::span<const AggBound> bindings) const;

 private:
  std::vector<AggregateConstraint> constraints_;
  std::vector<FilterAggQuery> aggs_;
  std::vector<std::size_t> offsets_;
};

}  // namespace repairkit

#endif  // REPAIRKIT_CONSTRAINT_HPP
