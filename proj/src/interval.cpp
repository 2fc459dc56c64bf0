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

#include "repairkit/interval.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "repairkit/format.hpp"

namespace repairkit {

std::string_view symbol(ArithOp op) {
  switch (op) {
    case ArithOp::kAdd: return "+";
    case ArithOp::kSub: return "-";
    case ArithOp::kMul: return "*";
    case ArithOp::kDiv: return "/";
  }
  return "?";
}

std::string to_string(const Interval& iv) {
  return "[" + format_double(iv.lo) + ", " + format_double(iv.hi) + "]";
}

std::optional<double> scalar_apply(ArithOp op, double a, double b) {
  switch (op) {
    case ArithOp::kAdd: return a + b;
    case ArithOp::kSub: return a - b;
    case ArithOp::kMul: return a * b;
    case ArithOp::kDiv:
      if (b == 0) {
        if (a == 0) return 0.0;
        return std::nullopt;
      }
      return a / b;
  }
  return std::nullopt;
}

namespace {

double mul_corner(double x, double y) {
  if (x == 0 || y == 0) return 0;
  return x * y;
}

Interval hull(const std::array<double, 4>& corners) {
  for (double c : corners) {
    if (std::isnan(c)) return Interval::entire();
  }
  auto [mn, mx] = std::minmax_element(corners.begin(), corners.end());
  return {*mn, *mx};
}

}  // namespace

Interval interval_apply(ArithOp op, const Interval& a, const Interval& b) {
  switch (op) {
    case ArithOp::kAdd: {
      Interval r{a.lo + b.lo, a.hi + b.hi};
      if (std::isnan(r.lo) || std::isnan(r.hi)) return Interval::entire();
      return r;
    }
    case ArithOp::kSub: {
      // Lower end pairs the smallest minuend with the largest subtrahend.
      Interval r{a.lo - b.hi, a.hi - b.lo};
      if (std::isnan(r.lo) || std::isnan(r.hi)) return Interval::entire();
      return r;
    }
    case ArithOp::kMul:
      return hull({mul_corner(a.lo, b.lo), mul_corner(a.lo, b.hi),
                   mul_corner(a.hi, b.lo), mul_corner(a.hi, b.hi)});
    case ArithOp::kDiv:
      if (b.is_zero() && a.is_zero()) return Interval::point(0);
      if (b.contains(0.0)) return Interval::entire();
      return hull({a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi});
  }
  return Interval::entire();
}

}  // namespace repairkit
