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

#ifndef REPAIRKIT_DATAGEN_HPP
#define REPAIRKIT_DATAGEN_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "repairkit/dataset.hpp"

namespace repairkit {

// Deterministic generator on top of mt19937_64. The standard distributions
// are implementation-defined, so the transforms are spelled out here to
// keep output identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer in [lo, hi] without modulo bias.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  // Standard normal (Box-Muller, second variate cached).
  double normal();

 private:
  std::mt19937_64 engine_;
  double cached_ = 0;
  bool has_cached_ = false;
};

struct AttrSpec {
  enum class Kind { kUniformInt, kCategorical, kNormal, kLabel };

  std::string name;
  Kind kind = Kind::kUniformInt;
  // kUniformInt
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  // kNormal: N(mean, stddev) clipped to [clip_lo, clip_hi], rounded to
  // `precision` decimals.
  double mean = 0;
  double stddev = 1;
  double clip_lo = -1e300;
  double clip_hi = 1e300;
  int precision = 2;
  // kCategorical
  std::vector<std::string> labels;
  std::vector<double> weights;
  // kLabel: binary outcome with P(1) = rates[group label]
  //                                   + trend_slope * (trend_attr - center).
  std::string group;
  std::map<std::string, double> rates;
  std::string trend_attr;
  double trend_slope = 0;
  double trend_center = 0;
};

struct Correlation {
  std::string a;
  std::string b;
  double rho = 0;
};

struct GenSpec {
  std::size_t rows = 0;
  std::uint64_t seed = 0;
  std::vector<AttrSpec> attributes;
  std::vector<Correlation> correlations;  // pairs must be disjoint

  // Throws Error{kBadSpec}.
  void validate() const;
  static GenSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// Columns are generated one after another (a correlated pair together,
// through a Gaussian copula). Categorical codes follow first appearance,
// matching what load_csv assigns to the written file.
Dataset generate(const GenSpec& spec);

}  // namespace repairkit

#endif  // REPAIRKIT_DATAGEN_HPP
