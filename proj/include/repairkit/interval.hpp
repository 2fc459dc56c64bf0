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

#ifndef REPAIRKIT_INTERVAL_HPP
#define REPAIRKIT_INTERVAL_HPP

#include <limits>
#include <optional>
#include <string>
#include <string_view>

namespace repairkit {

enum class ArithOp { kAdd, kSub, kMul, kDiv };

std::string_view symbol(ArithOp op);

// Closed interval over the extended reals. Default-constructs to [0, 0].
struct Interval {
  double lo = 0;
  double hi = 0;

  static constexpr Interval point(double v) noexcept { return {v, v}; }
  static constexpr Interval entire() noexcept {
    return {-std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
  }

  constexpr bool contains(double v) const noexcept {
    return lo <= v && v <= hi;
  }
  constexpr bool contains(const Interval& other) const noexcept {
    return lo <= other.lo && other.hi <= hi;
  }
  constexpr bool intersects(const Interval& other) const noexcept {
    return lo <= other.hi && other.lo <= hi;
  }
  constexpr bool is_point() const noexcept { return lo == hi; }
  constexpr bool is_zero() const noexcept { return lo == 0 && hi == 0; }

  friend constexpr bool operator==(const Interval&, const Interval&) = default;
};

std::string to_string(const Interval& iv);

// Scalar semantics shared by every evaluation path: 0/0 is 0 and x/0 with
// x != 0 is undefined (nullopt).
std::optional<double> scalar_apply(ArithOp op, double a, double b);

// Sound enclosure of {x op y : x in a, y in b, x op y defined}.
//   [0,0] / [0,0]          -> [0,0]
//   denominator holds 0    -> [-inf, +inf]
// Corner products of the form 0 * inf count as 0.
Interval interval_apply(ArithOp op, const Interval& a, const Interval& b);

}  // namespace repairkit

#endif  // REPAIRKIT_INTERVAL_HPP
