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

#include "repairkit/constraint.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

#include "repairkit/error.hpp"
#include "repairkit/format.hpp"

namespace repairkit {

std::string_view symbol(AggFn fn) {
  switch (fn) {
    case AggFn::kCount: return "count";
    case AggFn::kSum: return "sum";
    case AggFn::kMin: return "min";
    case AggFn::kMax: return "max";
    case AggFn::kAvg: return "avg";
  }
  return "?";
}

std::string_view symbol(BoundKind kind) {
  switch (kind) {
    case BoundKind::kLt: return "<";
    case BoundKind::kLe: return "<=";
    case BoundKind::kGt: return ">";
    case BoundKind::kGe: return ">=";
    case BoundKind::kRange: return "in";
  }
  return "?";
}

bool FilterAggQuery::matches(const Dataset& ds, std::size_t row) const {
  for (const auto& f : filter) {
    if (!compare(ds.value(row, f.column), f.op, f.constant)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// AggState

AggState AggState::identity(AggFn fn) {
  AggState s;
  if (fn == AggFn::kMin) s.value = std::numeric_limits<double>::infinity();
  if (fn == AggFn::kMax) s.value = -std::numeric_limits<double>::infinity();
  return s;
}

void AggState::add(AggFn fn, double x) {
  ++matches;
  switch (fn) {
    case AggFn::kCount:
      value += 1;
      break;
    case AggFn::kSum:
    case AggFn::kAvg:
      value += x;
      if (x < 0) {
        neg_sum += x;
      } else {
        pos_sum += x;
      }
      break;
    case AggFn::kMin:
      value = std::min(value, x);
      break;
    case AggFn::kMax:
      value = std::max(value, x);
      break;
  }
}

void AggState::merge(AggFn fn, const AggState& other) {
  matches += other.matches;
  switch (fn) {
    case AggFn::kCount:
    case AggFn::kSum:
    case AggFn::kAvg:
      value += other.value;
      neg_sum += other.neg_sum;
      pos_sum += other.pos_sum;
      break;
    case AggFn::kMin:
      value = std::min(value, other.value);
      break;
    case AggFn::kMax:
      value = std::max(value, other.value);
      break;
  }
}

std::optional<double> AggState::result(AggFn fn) const {
  if ((fn == AggFn::kMin || fn == AggFn::kMax) && matches == 0) {
    return std::nullopt;
  }
  return value;
}

AggState accumulate(const FilterAggQuery& agg, const Dataset& ds,
                    std::span<const std::uint32_t> rows) {
  AggState state = AggState::identity(agg.fn);
  for (auto row : rows) {
    if (!agg.matches(ds, row)) continue;
    double x = agg.fn == AggFn::kCount ? 1.0 : ds.value(row, agg.input_column);
    state.add(agg.fn, x);
  }
  return state;
}

std::optional<double> eval_agg_scalar(const FilterAggQuery& agg,
                                      const Dataset& ds,
                                      std::span<const std::uint32_t> rows) {
  return accumulate(agg, ds, rows).result(agg.fn);
}

// ---------------------------------------------------------------------------
// Expressions

std::shared_ptr<const Expr> Expr::leaf(std::size_t agg) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::kLeaf;
  e->agg = agg;
  return e;
}

std::shared_ptr<const Expr> Expr::constant(double v) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::kConst;
  e->value = v;
  return e;
}

std::shared_ptr<const Expr> Expr::binary(ArithOp op,
                                         std::shared_ptr<const Expr> lhs,
                                         std::shared_ptr<const Expr> rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::kBinary;
  e->op = op;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::kLeaf: return a.agg == b.agg;
    case Expr::Kind::kConst: return a.value == b.value;
    case Expr::Kind::kBinary:
      return a.op == b.op && structurally_equal(*a.lhs, *b.lhs) &&
             structurally_equal(*a.rhs, *b.rhs);
  }
  return false;
}

namespace {

const std::optional<double>& bound_leaf(std::size_t id,
                                        ScalarBindings bindings) {
  if (id >= bindings.size()) {
    throw Error(ErrorKind::kUnboundAggregate,
                "aggregate q" + std::to_string(id + 1) + " has no binding");
  }
  return bindings[id];
}

}  // namespace

std::optional<double> try_eval_expr_scalar(const Expr& expr,
                                           ScalarBindings bindings) {
  switch (expr.kind) {
    case Expr::Kind::kLeaf: return bound_leaf(expr.agg, bindings);
    case Expr::Kind::kConst: return expr.value;
    case Expr::Kind::kBinary: {
      auto l = try_eval_expr_scalar(*expr.lhs, bindings);
      auto r = try_eval_expr_scalar(*expr.rhs, bindings);
      if (!l || !r) return std::nullopt;
      return scalar_apply(expr.op, *l, *r);
    }
  }
  return std::nullopt;
}

double eval_expr_scalar(const Expr& expr, ScalarBindings bindings) {
  auto v = try_eval_expr_scalar(expr, bindings);
  if (!v) {
    throw Error(ErrorKind::kUndefinedDivision,
                "expression is undefined (division by zero or empty "
                "min/max)");
  }
  return *v;
}

ExprBound eval_expr_bound(const Expr& expr,
                          std::span<const AggBound> bindings) {
  switch (expr.kind) {
    case Expr::Kind::kLeaf: {
      if (expr.agg >= bindings.size()) {
        throw Error(ErrorKind::kUnboundAggregate,
                    "aggregate q" + std::to_string(expr.agg + 1) +
                        " has no binding");
      }
      const AggBound& b = bindings[expr.agg];
      return {b.value, b.may_be_empty || b.always_empty, b.always_empty};
    }
    case Expr::Kind::kConst:
      return {Interval::point(expr.value), false, false};
    case Expr::Kind::kBinary: {
      ExprBound l = eval_expr_bound(*expr.lhs, bindings);
      ExprBound r = eval_expr_bound(*expr.rhs, bindings);
      if (l.always_fail || r.always_fail) {
        return {Interval::entire(), true, true};
      }
      ExprBound out;
      out.value = interval_apply(expr.op, l.value, r.value);
      out.may_fail = l.may_fail || r.may_fail;
      if (expr.op == ArithOp::kDiv) {
        // x / 0 is undefined unless x is 0 as well.
        if (r.value.contains(0.0) && !l.value.is_zero()) out.may_fail = true;
        if (r.value.is_zero() && !l.value.contains(0.0)) {
          return {Interval::entire(), true, true};
        }
      }
      return out;
    }
  }
  return {Interval::entire(), true, false};
}

Interval eval_expr_interval(const Expr& expr,
                            std::span<const Interval> bindings) {
  switch (expr.kind) {
    case Expr::Kind::kLeaf:
      if (expr.agg >= bindings.size()) {
        throw Error(ErrorKind::kUnboundAggregate,
                    "aggregate q" + std::to_string(expr.agg + 1) +
                        " has no binding");
      }
      return bindings[expr.agg];
    case Expr::Kind::kConst: return Interval::point(expr.value);
    case Expr::Kind::kBinary:
      return interval_apply(expr.op, eval_expr_interval(*expr.lhs, bindings),
                            eval_expr_interval(*expr.rhs, bindings));
  }
  return Interval::entire();
}

// ---------------------------------------------------------------------------
// AggregateConstraint

bool AggregateConstraint::satisfied_by(double phi) const {
  switch (kind) {
    case BoundKind::kLt: return phi < threshold;
    case BoundKind::kLe: return phi <= threshold;
    case BoundKind::kGt: return phi > threshold;
    case BoundKind::kGe: return phi >= threshold;
    case BoundKind::kRange: return low <= phi && phi <= high;
  }
  return false;
}

bool AggregateConstraint::certainly_satisfied(const Interval& phi) const {
  switch (kind) {
    case BoundKind::kLt: return phi.hi < threshold;
    case BoundKind::kLe: return phi.hi <= threshold;
    case BoundKind::kGt: return phi.lo > threshold;
    case BoundKind::kGe: return phi.lo >= threshold;
    case BoundKind::kRange: return low <= phi.lo && phi.hi <= high;
  }
  return false;
}

bool AggregateConstraint::possibly_satisfied(const Interval& phi) const {
  switch (kind) {
    case BoundKind::kLt: return phi.lo < threshold;
    case BoundKind::kLe: return phi.lo <= threshold;
    case BoundKind::kGt: return phi.hi > threshold;
    case BoundKind::kGe: return phi.hi >= threshold;
    case BoundKind::kRange: return phi.lo <= high && phi.hi >= low;
  }
  return true;
}

bool AggregateConstraint::holds(ScalarBindings bindings) const {
  auto phi = try_eval_expr_scalar(*expr, bindings);
  return phi && satisfied_by(*phi);
}

bool AggregateConstraint::holds_for_all(
    std::span<const AggBound> bindings) const {
  ExprBound b = eval_expr_bound(*expr, bindings);
  return !b.may_fail && certainly_satisfied(b.value);
}

bool AggregateConstraint::holds_for_some(
    std::span<const AggBound> bindings) const {
  ExprBound b = eval_expr_bound(*expr, bindings);
  return !b.always_fail && possibly_satisfied(b.value);
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok {
  kIdent,
  kNumber,
  kLParen,
  kRParen,
  kLBracket,
  kRBracket,
  kComma,
  kPlus,
  kMinus,
  kStar,
  kSlash,
  kAnd,
  kCmp,
  kEnd,
};

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  double number = 0;
  std::size_t column = 1;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::kEnd) return "end of input";
  return "'" + t.text + "'";
}

[[noreturn]] void syntax_error(std::size_t column, const std::string& what) {
  throw Error(ErrorKind::kSyntax,
              "column " + std::to_string(column) + ": " + what);
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto is_ident_start = [](char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  };
  auto is_ident_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           c == '.';
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    Token t;
    t.column = i + 1;
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && is_ident_char(text[j])) ++j;
      t.kind = Tok::kIdent;
      t.text = std::string(text.substr(i, j - i));
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0;
      auto [ptr, ec] = std::from_chars(text.data() + i,
                                       text.data() + text.size(), v);
      if (ec != std::errc()) syntax_error(t.column, "malformed number");
      std::size_t j = static_cast<std::size_t>(ptr - text.data());
      t.kind = Tok::kNumber;
      t.text = std::string(text.substr(i, j - i));
      t.number = v;
      i = j;
    } else {
      auto two = text.substr(i, 2);
      if (two == "&&" || two == "==" || two == "!=" || two == "<=" ||
          two == ">=" || two == "<>") {
        t.kind = two == "&&" ? Tok::kAnd : Tok::kCmp;
        t.text = std::string(two);
        i += 2;
      } else {
        t.text = std::string(1, c);
        switch (c) {
          case '(': t.kind = Tok::kLParen; break;
          case ')': t.kind = Tok::kRParen; break;
          case '[': t.kind = Tok::kLBracket; break;
          case ']': t.kind = Tok::kRBracket; break;
          case ',': t.kind = Tok::kComma; break;
          case '+': t.kind = Tok::kPlus; break;
          case '-': t.kind = Tok::kMinus; break;
          case '*': t.kind = Tok::kStar; break;
          case '/': t.kind = Tok::kSlash; break;
          case '<':
          case '>':
          case '=': t.kind = Tok::kCmp; break;
          default:
            syntax_error(t.column,
                         "unexpected character '" + std::string(1, c) + "'");
        }
        ++i;
      }
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.column = text.size() + 1;
  out.push_back(end);
  return out;
}

std::string lower(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::tolower(
                          static_cast<unsigned char>(ch)));
  return s;
}

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> schema)
      : tokens_(tokenize(text)), schema_(schema) {}

  AggregateConstraint parse() {
    out_.expr = expr();
    const Token& t = peek();
    if (t.kind == Tok::kIdent && lower(t.text) == "in") {
      advance();
      expect(Tok::kLBracket, "'['");
      out_.kind = BoundKind::kRange;
      out_.low = signed_number();
      expect(Tok::kComma, "','");
      out_.high = signed_number();
      expect(Tok::kRBracket, "']'");
      if (out_.low > out_.high) {
        throw Error(ErrorKind::kEmptyRangeBound,
                    "range [" + format_double(out_.low) + ", " +
                        format_double(out_.high) + "] is empty");
      }
    } else if (t.kind == Tok::kCmp &&
               (t.text == "<" || t.text == "<=" || t.text == ">" ||
                t.text == ">=")) {
      std::string op = advance().text;
      out_.kind = op == "<"    ? BoundKind::kLt
                  : op == "<=" ? BoundKind::kLe
                  : op == ">"  ? BoundKind::kGt
                               : BoundKind::kGe;
      out_.threshold = signed_number();
    } else {
      syntax_error(t.column, "expected one of '<', '<=', '>', '>=', 'in', "
                             "found " + describe(t));
    }
    if (peek().kind != Tok::kEnd) {
      syntax_error(peek().column,
                   "expected end of input, found " + describe(peek()));
    }
    return std::move(out_);
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_++]; }

  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) {
      syntax_error(peek().column, std::string("expected ") + what +
                                      ", found " + describe(peek()));
    }
    return advance();
  }

  double signed_number() {
    bool negative = false;
    if (peek().kind == Tok::kMinus || peek().kind == Tok::kPlus) {
      negative = advance().kind == Tok::kMinus;
    }
    if (peek().kind != Tok::kNumber) {
      syntax_error(peek().column,
                   "expected a number, found " + describe(peek()));
    }
    double v = advance().number;
    return negative ? -v : v;
  }

  std::shared_ptr<const Expr> expr() {
    auto lhs = term();
    while (peek().kind == Tok::kPlus || peek().kind == Tok::kMinus) {
      ArithOp op = advance().kind == Tok::kPlus ? ArithOp::kAdd : ArithOp::kSub;
      lhs = Expr::binary(op, std::move(lhs), term());
    }
    return lhs;
  }

  std::shared_ptr<const Expr> term() {
    auto lhs = factor();
    while (peek().kind == Tok::kStar || peek().kind == Tok::kSlash) {
      ArithOp op = advance().kind == Tok::kStar ? ArithOp::kMul : ArithOp::kDiv;
      lhs = Expr::binary(op, std::move(lhs), factor());
    }
    return lhs;
  }

  std::shared_ptr<const Expr> factor() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::kNumber:
      case Tok::kMinus:
        return Expr::constant(signed_number());
      case Tok::kLParen: {
        advance();
        auto inner = expr();
        expect(Tok::kRParen, "')'");
        return inner;
      }
      case Tok::kIdent:
        return aggregate();
      default:
        syntax_error(t.column, "expected a number, aggregate or '(', found " +
                                   describe(t));
    }
  }

  std::size_t column_of(const Token& t) {
    auto it = std::find(schema_.begin(), schema_.end(), t.text);
    if (it == schema_.end()) {
      throw Error(ErrorKind::kUnknownAttribute,
                  "column " + std::to_string(t.column) +
                      ": unknown attribute '" + t.text + "'");
    }
    return static_cast<std::size_t>(it - schema_.begin());
  }

  std::shared_ptr<const Expr> aggregate() {
    const Token& name = advance();
    std::string fn_name = lower(name.text);
    AggFn fn;
    if (fn_name == "count") {
      fn = AggFn::kCount;
    } else if (fn_name == "sum") {
      fn = AggFn::kSum;
    } else if (fn_name == "min") {
      fn = AggFn::kMin;
    } else if (fn_name == "max") {
      fn = AggFn::kMax;
    } else if (fn_name == "avg") {
      fn = AggFn::kAvg;
    } else {
      syntax_error(name.column,
                   "expected count, sum, min, max or avg, found '" +
                       name.text + "'");
    }
    expect(Tok::kLParen, "'('");
    FilterAggQuery agg;
    agg.fn = fn;
    bool need_filter = false;
    if (fn != AggFn::kCount) {
      const Token& input = expect(Tok::kIdent, "an attribute name");
      agg.input_attr = input.text;
      agg.input_column = column_of(input);
      if (peek().kind == Tok::kComma) {
        advance();
        need_filter = true;
      }
    } else {
      need_filter = peek().kind != Tok::kRParen;
    }
    if (need_filter) agg.filter = filter();
    expect(Tok::kRParen, "')'");

    if (fn == AggFn::kAvg) {
      FilterAggQuery sum = agg;
      sum.fn = AggFn::kSum;
      FilterAggQuery count = agg;
      count.fn = AggFn::kCount;
      count.input_attr.clear();
      count.input_column = 0;
      auto sum_leaf = register_agg(std::move(sum));
      auto count_leaf = register_agg(std::move(count));
      return Expr::binary(ArithOp::kDiv, std::move(sum_leaf),
                          std::move(count_leaf));
    }
    return register_agg(std::move(agg));
  }

  std::shared_ptr<const Expr> register_agg(FilterAggQuery agg) {
    agg.id = out_.aggs.size();
    out_.aggs.push_back(std::move(agg));
    return Expr::leaf(out_.aggs.back().id);
  }

  std::vector<FilterCondition> filter() {
    std::vector<FilterCondition> out;
    while (true) {
      const Token& attr = expect(Tok::kIdent, "an attribute name");
      FilterCondition f;
      f.attr = attr.text;
      f.column = column_of(attr);
      const Token& op = expect(Tok::kCmp, "a comparison operator");
      auto parsed = parse_compare_op(op.text);
      f.op = *parsed;
      f.constant = signed_number();
      out.push_back(std::move(f));
      if (peek().kind != Tok::kAnd) break;
      advance();
    }
    return out;
  }

  std::vector<Token> tokens_;
  std::span<const std::string> schema_;
  std::size_t pos_ = 0;
  AggregateConstraint out_;
};

int precedence(const Expr& e) {
  if (e.kind != Expr::Kind::kBinary) return 3;
  return (e.op == ArithOp::kAdd || e.op == ArithOp::kSub) ? 1 : 2;
}

std::string agg_to_string(const FilterAggQuery& agg) {
  std::string out(symbol(agg.fn));
  out += "(";
  if (agg.fn != AggFn::kCount) {
    out += agg.input_attr;
    if (!agg.filter.empty()) out += ", ";
  }
  for (std::size_t i = 0; i < agg.filter.size(); ++i) {
    if (i) out += " && ";
    const auto& f = agg.filter[i];
    std::string op = f.op == CompareOp::kEq ? "==" : std::string(symbol(f.op));
    out += f.attr + " " + op + " " + format_double(f.constant);
  }
  out += ")";
  return out;
}

}  // namespace

AggregateConstraint parse_constraint(std::string_view text,
                                     std::span<const std::string> schema) {
  return Parser(text, schema).parse();
}

std::string to_string(const Expr& expr, const AggregateConstraint& c) {
  switch (expr.kind) {
    case Expr::Kind::kLeaf: return agg_to_string(c.aggs.at(expr.agg));
    case Expr::Kind::kConst: return format_double(expr.value);
    case Expr::Kind::kBinary: {
      int p = precedence(expr);
      std::string l = to_string(*expr.lhs, c);
      std::string r = to_string(*expr.rhs, c);
      if (precedence(*expr.lhs) < p) l = "(" + l + ")";
      // Operators associate left, so an equal-precedence right operand needs
      // parentheses to keep its shape.
      if (precedence(*expr.rhs) <= p) r = "(" + r + ")";
      return l + " " + std::string(symbol(expr.op)) + " " + r;
    }
  }
  return "?";
}

std::string to_string(const AggregateConstraint& c) {
  std::string out = to_string(*c.expr, c);
  if (c.kind == BoundKind::kRange) {
    return out + " in [" + format_double(c.low) + ", " +
           format_double(c.high) + "]";
  }
  return out + " " + std::string(symbol(c.kind)) + " " +
         format_double(c.threshold);
}

bool structurally_equal(const AggregateConstraint& a,
                        const AggregateConstraint& b) {
  if (a.kind != b.kind || a.threshold != b.threshold || a.low != b.low ||
      a.high != b.high || a.aggs.size() != b.aggs.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.aggs.size(); ++i) {
    const auto& x = a.aggs[i];
    const auto& y = b.aggs[i];
    if (x.fn != y.fn || x.input_attr != y.input_attr ||
        x.filter.size() != y.filter.size()) {
      return false;
    }
    for (std::size_t f = 0; f < x.filter.size(); ++f) {
      if (x.filter[f].attr != y.filter[f].attr ||
          x.filter[f].op != y.filter[f].op ||
          x.filter[f].constant != y.filter[f].constant) {
        return false;
      }
    }
  }
  return structurally_equal(*a.expr, *b.expr);
}

// ---------------------------------------------------------------------------
// ConstraintSet

ConstraintSet::ConstraintSet(std::vector<AggregateConstraint> constraints)
    : constraints_(std::move(constraints)) {
  if (constraints_.empty()) {
    throw Error(ErrorKind::kBadQuery, "at least one constraint is required");
  }
  for (const auto& c : constraints_) {
    offsets_.push_back(aggs_.size());
    for (auto agg : c.aggs) {
      agg.id = aggs_.size();
      aggs_.push_back(std::move(agg));
    }
  }
  offsets_.push_back(aggs_.size());
}

ConstraintSet ConstraintSet::parse(std::span<const std::string> texts,
                                   std::span<const std::string> schema) {
  std::vector<AggregateConstraint> parsed;
  for (const auto& t : texts) parsed.push_back(parse_constraint(t, schema));
  return ConstraintSet(std::move(parsed));
}

bool ConstraintSet::holds(ScalarBindings bindings) const {
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    auto slice = bindings.subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
    if (!constraints_[i].holds(slice)) return false;
  }
  return true;
}

bool ConstraintSet::holds_for_all(std::span<const AggBound> bindings) const {
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    auto slice = bindings.subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
    if (!constraints_[i].holds_for_all(slice)) return false;
  }
  return true;
}

bool ConstraintSet::holds_for_some(std::span<const AggBound> bindings) const {
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    auto slice = bindings.subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
    if (!constraints_[i].holds_for_some(slice)) return false;
  }
  return true;
}

}  // namespace repairkit
