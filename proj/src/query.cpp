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

#include "repairkit/query.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "repairkit/error.hpp"
#include "repairkit/format.hpp"

namespace repairkit {

std::string_view symbol(CompareOp op) {
  switch (op) {
    case CompareOp::kLt: return "<";
    case CompareOp::kLe: return "<=";
    case CompareOp::kGt: return ">";
    case CompareOp::kGe: return ">=";
    case CompareOp::kEq: return "=";
    case CompareOp::kNe: return "!=";
    case CompareOp::kInRange: return "in";
  }
  return "?";
}

std::optional<CompareOp> parse_compare_op(std::string_view text) {
  if (text == "<") return CompareOp::kLt;
  if (text == "<=") return CompareOp::kLe;
  if (text == ">") return CompareOp::kGt;
  if (text == ">=") return CompareOp::kGe;
  if (text == "=" || text == "==") return CompareOp::kEq;
  if (text == "!=" || text == "<>") return CompareOp::kNe;
  if (text == "in") return CompareOp::kInRange;
  return std::nullopt;
}

CompareOp negate(CompareOp op) {
  switch (op) {
    case CompareOp::kLt: return CompareOp::kGe;
    case CompareOp::kLe: return CompareOp::kGt;
    case CompareOp::kGt: return CompareOp::kLe;
    case CompareOp::kGe: return CompareOp::kLt;
    case CompareOp::kEq: return CompareOp::kNe;
    case CompareOp::kNe: return CompareOp::kEq;
    case CompareOp::kInRange: break;
  }
  throw std::invalid_argument("range membership has no operator negation");
}

bool compare(double value, CompareOp op, double constant,
             double constant_high) {
  switch (op) {
    case CompareOp::kLt: return value < constant;
    case CompareOp::kLe: return value <= constant;
    case CompareOp::kGt: return value > constant;
    case CompareOp::kGe: return value >= constant;
    case CompareOp::kEq: return value == constant;
    case CompareOp::kNe: return value != constant;
    case CompareOp::kInRange:
      return constant <= value && value <= constant_high;
  }
  return false;
}

// ---------------------------------------------------------------------------
// UserQuery

void UserQuery::validate(const Dataset& ds) const {
  if (predicates.empty()) {
    throw Error(ErrorKind::kBadQuery, "query needs at least one predicate");
  }
  if (weights.size() != predicates.size()) {
    throw Error(ErrorKind::kBadQuery,
                "expected " + std::to_string(predicates.size()) +
                    " weights, got " + std::to_string(weights.size()));
  }
  bool any_positive = false;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0) {
      throw Error(ErrorKind::kBadQuery,
                  "weights must be finite and non-negative");
    }
    any_positive = any_positive || w > 0;
  }
  if (!any_positive) {
    throw Error(ErrorKind::kBadQuery, "at least one weight must be positive");
  }
  std::unordered_set<std::string> seen;
  for (const auto& p : predicates) {
    ds.index_of(p.attr);
    if (!seen.insert(p.attr).second) {
      throw Error(ErrorKind::kBadQuery,
                  "attribute '" + p.attr + "' appears in two predicates");
    }
    if (!std::isfinite(p.constant) ||
        (p.op == CompareOp::kInRange && !std::isfinite(p.constant_high))) {
      throw Error(ErrorKind::kBadQuery,
                  "predicate on '" + p.attr + "' has a non-finite constant");
    }
    if (ds.is_categorical(p.attr) && p.op != CompareOp::kEq &&
        p.op != CompareOp::kNe) {
      throw Error(ErrorKind::kBadQuery, "categorical attribute '" + p.attr +
                                            "' only supports = and !=");
    }
    if (p.op == CompareOp::kInRange && p.constant > p.constant_high) {
      throw Error(ErrorKind::kBadQuery,
                  "range on '" + p.attr + "' has low bound above high bound");
    }
  }
}

namespace {

double constant_from_json(const nlohmann::json& j, const std::string& attr,
                          const Dataset& ds) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    auto label = j.get<std::string>();
    if (!ds.is_categorical(attr)) {
      throw Error(ErrorKind::kBadQuery, "constant '" + label +
                                            "' given for numeric attribute '" +
                                            attr + "'");
    }
    if (auto code = ds.code_of(attr, label)) return *code;
    throw Error(ErrorKind::kBadQuery,
                "label '" + label + "' does not occur in '" + attr + "'");
  }
  throw Error(ErrorKind::kBadQuery,
              "constant for '" + attr + "' must be a number or a label");
}

}  // namespace

UserQuery UserQuery::from_json(const nlohmann::json& j, const Dataset& ds) {
  if (!j.is_object() || !j.contains("predicates") ||
      !j["predicates"].is_array()) {
    throw Error(ErrorKind::kBadQuery,
                "query must be an object with a \"predicates\" array");
  }
  UserQuery q;
  for (const auto& pj : j["predicates"]) {
    if (!pj.is_object() || !pj.contains("attr") || !pj.contains("op") ||
        !pj.contains("const") || !pj["attr"].is_string() ||
        !pj["op"].is_string()) {
      throw Error(ErrorKind::kBadQuery,
                  "each predicate needs string \"attr\", \"op\" and \"const\"");
    }
    Predicate p;
    p.attr = pj["attr"].get<std::string>();
    ds.index_of(p.attr);
    auto op_text = pj["op"].get<std::string>();
    auto op = parse_compare_op(op_text);
    if (!op) {
      throw Error(ErrorKind::kBadQuery, "unknown operator '" + op_text + "'");
    }
    p.op = *op;
    const auto& cj = pj["const"];
    if (p.op == CompareOp::kInRange) {
      if (!cj.is_array() || cj.size() != 2) {
        throw Error(ErrorKind::kBadQuery,
                    "\"in\" needs a [low, high] constant pair");
      }
      p.constant = constant_from_json(cj[0], p.attr, ds);
      p.constant_high = constant_from_json(cj[1], p.attr, ds);
    } else {
      p.constant = constant_from_json(cj, p.attr, ds);
    }
    q.predicates.push_back(std::move(p));
  }
  if (j.contains("weights")) {
    if (!j["weights"].is_array()) {
      throw Error(ErrorKind::kBadQuery, "\"weights\" must be an array");
    }
    for (const auto& w : j["weights"]) {
      if (!w.is_number()) {
        throw Error(ErrorKind::kBadQuery, "weights must be numbers");
      }
      q.weights.push_back(w.get<double>());
    }
  } else {
    q.weights.assign(q.predicates.size(), 1.0);
  }
  q.validate(ds);
  return q;
}

nlohmann::json UserQuery::to_json() const {
  nlohmann::json preds = nlohmann::json::array();
  for (const auto& p : predicates) {
    nlohmann::json pj{{"attr", p.attr}, {"op", std::string(symbol(p.op))}};
    if (p.op == CompareOp::kInRange) {
      pj["const"] = {p.constant, p.constant_high};
    } else {
      pj["const"] = p.constant;
    }
    preds.push_back(std::move(pj));
  }
  return {{"predicates", std::move(preds)}, {"weights", weights}};
}

double predicate_distance(double original, double repaired,
                          bool is_categorical) {
  if (is_categorical) return original == repaired ? 0.0 : 1.0;
  double diff = std::fabs(repaired - original);
  if (original == 0) return diff;
  return diff / std::fabs(original);
}

bool ranks_before(const ScoredCandidate& a, const ScoredCandidate& b) {
  if (a.distance != b.distance) return a.distance < b.distance;
  return a.candidate.constants < b.candidate.constants;
}

bool CandidateSet::all_singleton() const {
  return std::all_of(ranges.begin(), ranges.end(),
                     [](const IndexRange& r) { return r.is_singleton(); });
}

// ---------------------------------------------------------------------------
// CandidateSpace

CandidateSpace::CandidateSpace(const Dataset& ds, const UserQuery& query)
    : query_(query) {
  query_.validate(ds);
  for (std::size_t i = 0; i < query_.predicates.size(); ++i) {
    const auto& p = query_.predicates[i];
    std::size_t col = ds.index_of(p.attr);
    predicate_columns_.push_back(col);
    auto domain = active_domain(ds, p.attr).values;
    if (domain.empty()) {
      throw Error(ErrorKind::kEmptyDomain,
                  "attribute '" + p.attr + "' has an empty active domain");
    }
    Slot slot;
    slot.predicate = i;
    slot.column = col;
    slot.categorical = ds.is_categorical(col);
    slot.labels = ds.labels(p.attr);
    slot.domain = std::move(domain);
    if (p.op == CompareOp::kInRange) {
      slot.weight = query_.weights[i] / 2;
      slot.original = p.constant;
      slots_.push_back(slot);
      slot.original = p.constant_high;
      slots_.push_back(std::move(slot));
    } else {
      slot.weight = query_.weights[i];
      slot.original = p.constant;
      slots_.push_back(std::move(slot));
    }
  }
}

double CandidateSpace::term(std::size_t slot, double value) const {
  const Slot& s = slots_[slot];
  return s.weight * predicate_distance(s.original, value, s.categorical);
}

double CandidateSpace::distance(const RepairCandidate& cand) const {
  double total = 0;
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    total += term(s, cand.constants[s]);
  }
  return total;
}

double CandidateSpace::lower_bound(const CandidateSet& set) const {
  // The nearest value of the closed value interval to the original constant
  // minimizes each slot's term; summing in slot order keeps the bound below
  // every member's distance even after rounding.
  double total = 0;
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    const Slot& slot = slots_[s];
    const IndexRange& r = set.ranges[s];
    double lo = slot.domain[r.lo];
    double hi = slot.domain[r.hi];
    double nearest = std::clamp(slot.original, lo, hi);
    total += term(s, nearest);
  }
  return total;
}

CandidateSet CandidateSpace::full_set() const {
  CandidateSet set;
  for (const auto& slot : slots_) {
    set.ranges.push_back(
        {0, static_cast<std::uint32_t>(slot.domain.size() - 1)});
  }
  return set;
}

std::uint64_t CandidateSpace::size(const CandidateSet& set) const {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 1;
  for (const auto& r : set.ranges) {
    std::uint64_t n = r.size();
    if (n == 0) return 0;
    if (total > kMax / n) {
      total = kMax;
    } else {
      total *= n;
    }
  }
  return total;
}

bool CandidateSpace::contains(const CandidateSet& set,
                              const RepairCandidate& cand) const {
  if (cand.constants.size() != slots_.size()) return false;
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    const auto& dom = slots_[s].domain;
    const IndexRange& r = set.ranges[s];
    if (r.empty()) return false;
    auto it = std::lower_bound(dom.begin(), dom.end(), cand.constants[s]);
    if (it == dom.end() || *it != cand.constants[s]) return false;
    auto idx = static_cast<std::uint32_t>(it - dom.begin());
    if (idx < r.lo || idx > r.hi) return false;
  }
  return true;
}

RepairCandidate CandidateSpace::at(
    std::span<const std::uint32_t> indices) const {
  RepairCandidate cand;
  cand.constants.reserve(slots_.size());
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    cand.constants.push_back(slots_[s].domain.at(indices[s]));
  }
  return cand;
}

std::vector<Comparison> CandidateSpace::conditions(
    const RepairCandidate& cand) const {
  std::vector<Comparison> out;
  out.reserve(query_.predicates.size());
  std::size_t s = 0;
  for (const auto& p : query_.predicates) {
    Comparison c{p.op, cand.constants[s], 0};
    if (p.op == CompareOp::kInRange) c.value_high = cand.constants[s + 1];
    s += p.slot_count();
    out.push_back(c);
  }
  return out;
}

std::vector<RangeComparison> CandidateSpace::range_conditions(
    const CandidateSet& set) const {
  std::vector<RangeComparison> out;
  out.reserve(query_.predicates.size());
  auto value_range = [&](std::size_t s) {
    const auto& dom = slots_[s].domain;
    return Interval{dom[set.ranges[s].lo], dom[set.ranges[s].hi]};
  };
  std::size_t s = 0;
  for (const auto& p : query_.predicates) {
    RangeComparison c{p.op, value_range(s), {}};
    if (p.op == CompareOp::kInRange) c.value_high = value_range(s + 1);
    s += p.slot_count();
    out.push_back(c);
  }
  return out;
}

CandidateSet CandidateSpace::from_value_ranges(
    std::span<const Interval> ranges) const {
  CandidateSet set;
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    const auto& dom = slots_[s].domain;
    auto first = std::lower_bound(dom.begin(), dom.end(), ranges[s].lo);
    auto last = std::upper_bound(dom.begin(), dom.end(), ranges[s].hi);
    if (first >= last) {
      set.ranges.push_back({1, 0});
    } else {
      set.ranges.push_back({static_cast<std::uint32_t>(first - dom.begin()),
                            static_cast<std::uint32_t>(last - dom.begin() - 1)});
    }
  }
  return set;
}

nlohmann::json CandidateSpace::candidate_to_json(
    const RepairCandidate& cand) const {
  auto show = [&](std::size_t s) -> std::string {
    const Slot& slot = slots_[s];
    double v = cand.constants[s];
    if (slot.categorical) {
      auto code = static_cast<std::size_t>(v);
      if (code < slot.labels.size()) return "'" + slot.labels[code] + "'";
    }
    return format_double(v);
  };
  std::string condition;
  std::size_t s = 0;
  for (const auto& p : query_.predicates) {
    if (!condition.empty()) condition += " AND ";
    if (p.op == CompareOp::kInRange) {
      condition += p.attr + " IN [" + show(s) + ", " + show(s + 1) + "]";
    } else {
      condition += p.attr + " " + std::string(symbol(p.op)) + " " + show(s);
    }
    s += p.slot_count();
  }
  return {{"constants", cand.constants}, {"condition", condition}};
}

double repair_distance(const CandidateSpace& space,
                       const RepairCandidate& cand) {
  return space.distance(cand);
}

double candidate_set_distance_lb(const CandidateSpace& space,
                                 const CandidateSet& set) {
  return space.lower_bound(set);
}

// ---------------------------------------------------------------------------
// DistanceEnumerator

DistanceEnumerator::DistanceEnumerator(const CandidateSpace& space) {
  init(space, space.full_set());
}

DistanceEnumerator::DistanceEnumerator(const CandidateSpace& space,
                                       const CandidateSet& set) {
  init(space, set);
}

std::size_t DistanceEnumerator::PosHash::operator()(
    const std::vector<std::uint32_t>& v) const noexcept {
  std::size_t h = 1469598103934665603ULL;
  for (auto x : v) {
    h ^= x;
    h *= 1099511628211ULL;
  }
  return h;
}

bool DistanceEnumerator::later(const State& a, const State& b) const {
  if (a.distance != b.distance) return a.distance > b.distance;
  for (std::size_t s = 0; s < a.pos.size(); ++s) {
    double va = lists_[s][a.pos[s]].value;
    double vb = lists_[s][b.pos[s]].value;
    if (va != vb) return va > vb;
  }
  return false;
}

void DistanceEnumerator::init(const CandidateSpace& space,
                              const CandidateSet& set) {
  if (set.ranges.size() != space.slot_count()) {
    throw Error(ErrorKind::kBadQuery, "candidate set has wrong arity");
  }
  lists_.resize(space.slot_count());
  for (std::size_t s = 0; s < space.slot_count(); ++s) {
    const IndexRange& r = set.ranges[s];
    if (r.empty()) {
      throw Error(ErrorKind::kEmptyDomain,
                  "candidate set has an empty range in slot " +
                      std::to_string(s));
    }
    const auto& dom = space.slots()[s].domain;
    auto& list = lists_[s];
    list.reserve(r.size());
    for (std::uint32_t i = r.lo; i <= r.hi; ++i) {
      list.push_back({space.term(s, dom[i]), dom[i]});
    }
    std::sort(list.begin(), list.end(), [](const Entry& a, const Entry& b) {
      if (a.term != b.term) return a.term < b.term;
      return a.value < b.value;
    });
  }
  push(std::vector<std::uint32_t>(lists_.size(), 0));
}

double DistanceEnumerator::distance_of(
    const std::vector<std::uint32_t>& pos) const {
  double total = 0;
  for (std::size_t s = 0; s < pos.size(); ++s) total += lists_[s][pos[s]].term;
  return total;
}

void DistanceEnumerator::push(std::vector<std::uint32_t> pos) {
  if (!seen_.insert(pos).second) return;
  double d = distance_of(pos);
  heap_.push_back({d, std::move(pos)});
  std::push_heap(heap_.begin(), heap_.end(),
                 [this](const State& a, const State& b) { return later(a, b); });
}

void DistanceEnumerator::fill_batch() {
  pending_.clear();
  pending_pos_ = 0;
  if (heap_.empty()) return;
  auto cmp = [this](const State& a, const State& b) { return later(a, b); };
  const double d = heap_.front().distance;
  while (!heap_.empty() && heap_.front().distance == d) {
    std::pop_heap(heap_.begin(), heap_.end(), cmp);
    State st = std::move(heap_.back());
    heap_.pop_back();
    ScoredCandidate sc;
    sc.distance = st.distance;
    sc.candidate.constants.reserve(st.pos.size());
    for (std::size_t s = 0; s < st.pos.size(); ++s) {
      sc.candidate.constants.push_back(lists_[s][st.pos[s]].value);
    }
    pending_.push_back(std::move(sc));
    for (std::size_t s = 0; s < st.pos.size(); ++s) {
      if (st.pos[s] + 1 < lists_[s].size()) {
        auto succ = st.pos;
        ++succ[s];
        push(std::move(succ));
      }
    }
  }
  std::sort(pending_.begin(), pending_.end(), ranks_before);
}

std::optional<ScoredCandidate> DistanceEnumerator::next() {
  if (pending_pos_ >= pending_.size()) fill_batch();
  if (pending_pos_ >= pending_.size()) return std::nullopt;
  ++yielded_;
  return std::move(pending_[pending_pos_++]);
}

}  // namespace repairkit
