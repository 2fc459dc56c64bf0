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

#include "repairkit/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <unordered_map>

#include "repairkit/error.hpp"

namespace repairkit {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  const std::uint64_t span =
      static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
  if (span == std::numeric_limits<std::uint64_t>::max()) {
    return static_cast<std::int64_t>(engine_());
  }
  const std::uint64_t range = span + 1;
  // Reject the tail that would bias the modulo.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + x % range);
}

double Rng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  double u1;
  do {
    u1 = uniform();
  } while (u1 == 0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  cached_ = r * std::sin(theta);
  has_cached_ = true;
  return r * std::cos(theta);
}

// ---------------------------------------------------------------------------
// GenSpec

namespace {

[[noreturn]] void bad_spec(const std::string& what) {
  throw Error(ErrorKind::kBadSpec, what);
}

std::string_view kind_name(AttrSpec::Kind kind) {
  switch (kind) {
    case AttrSpec::Kind::kUniformInt: return "uniform_int";
    case AttrSpec::Kind::kCategorical: return "categorical";
    case AttrSpec::Kind::kNormal: return "normal";
    case AttrSpec::Kind::kLabel: return "label";
  }
  return "?";
}

const AttrSpec* find_attr(const GenSpec& spec, const std::string& name) {
  for (const auto& a : spec.attributes) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

template <typename T>
T field(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) bad_spec(where + ": missing \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    bad_spec(where + ": \"" + key + "\" has the wrong type");
  }
}

template <typename T>
T field_or(const nlohmann::json& j, const char* key, T fallback,
           const std::string& where) {
  if (!j.contains(key)) return fallback;
  return field<T>(j, key, where);
}

}  // namespace

void GenSpec::validate() const {
  if (rows < 1) bad_spec("rows must be at least 1");
  if (attributes.empty()) bad_spec("at least one attribute is required");
  std::set<std::string> names;
  for (const auto& a : attributes) {
    if (a.name.empty()) bad_spec("attribute names must be non-empty");
    if (!names.insert(a.name).second) {
      bad_spec("duplicate attribute '" + a.name + "'");
    }
    const std::string where = "attribute '" + a.name + "'";
    switch (a.kind) {
      case AttrSpec::Kind::kUniformInt:
        if (a.lo > a.hi) bad_spec(where + ": lo exceeds hi");
        break;
      case AttrSpec::Kind::kNormal:
        if (!(a.stddev > 0) || !std::isfinite(a.mean)) {
          bad_spec(where + ": needs finite mean and positive stddev");
        }
        if (a.clip_lo > a.clip_hi) bad_spec(where + ": clip lo exceeds hi");
        if (a.precision < 0 || a.precision > 12) {
          bad_spec(where + ": precision must lie in [0, 12]");
        }
        break;
      case AttrSpec::Kind::kCategorical: {
        if (a.labels.empty() || a.labels.size() != a.weights.size()) {
          bad_spec(where + ": needs labels with one weight each");
        }
        std::set<std::string> distinct(a.labels.begin(), a.labels.end());
        if (distinct.size() != a.labels.size()) {
          bad_spec(where + ": labels must be distinct");
        }
        double total = 0;
        for (double w : a.weights) {
          if (!(w >= 0)) bad_spec(where + ": weights must be non-negative");
          total += w;
        }
        if (std::fabs(total - 1.0) > 1e-9) {
          bad_spec(where + ": weights must sum to 1");
        }
        break;
      }
      case AttrSpec::Kind::kLabel: {
        const AttrSpec* g = find_attr(*this, a.group);
        if (!g || g->kind != AttrSpec::Kind::kCategorical) {
          bad_spec(where + ": group must name a categorical attribute");
        }
        for (const auto& label : g->labels) {
          auto it = a.rates.find(label);
          if (it == a.rates.end()) {
            bad_spec(where + ": no rate for group '" + label + "'");
          }
          if (!(it->second >= 0 && it->second <= 1)) {
            bad_spec(where + ": rates must lie in [0, 1]");
          }
        }
        if (!a.trend_attr.empty()) {
          const AttrSpec* t = find_attr(*this, a.trend_attr);
          if (!t || t->kind == AttrSpec::Kind::kLabel ||
              t->kind == AttrSpec::Kind::kCategorical) {
            bad_spec(where + ": trend must name a numeric attribute");
          }
        }
        break;
      }
    }
  }
  std::set<std::string> paired;
  for (const auto& c : correlations) {
    for (const auto* name : {&c.a, &c.b}) {
      const AttrSpec* a = find_attr(*this, *name);
      if (!a) bad_spec("correlation names unknown attribute '" + *name + "'");
      if (a->kind == AttrSpec::Kind::kLabel) {
        bad_spec("label attribute '" + *name + "' cannot be correlated");
      }
      if (!paired.insert(*name).second) {
        bad_spec("attribute '" + *name + "' is in two correlation pairs");
      }
    }
    if (c.a == c.b) bad_spec("correlation pair needs two attributes");
    if (!(std::fabs(c.rho) <= 0.95)) bad_spec("|rho| must not exceed 0.95");
  }
}

GenSpec GenSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object()) bad_spec("spec must be a JSON object");
  GenSpec spec;
  spec.rows = field<std::size_t>(j, "rows", "spec");
  spec.seed = field_or<std::uint64_t>(j, "seed", 0, "spec");
  if (!j.contains("attributes") || !j["attributes"].is_array()) {
    bad_spec("spec needs an \"attributes\" array");
  }
  for (const auto& aj : j["attributes"]) {
    AttrSpec a;
    a.name = field<std::string>(aj, "name", "attribute");
    const std::string where = "attribute '" + a.name + "'";
    auto type = field<std::string>(aj, "type", where);
    if (type == "uniform_int") {
      a.kind = AttrSpec::Kind::kUniformInt;
      a.lo = field<std::int64_t>(aj, "lo", where);
      a.hi = field<std::int64_t>(aj, "hi", where);
    } else if (type == "normal") {
      a.kind = AttrSpec::Kind::kNormal;
      a.mean = field<double>(aj, "mean", where);
      a.stddev = field<double>(aj, "stddev", where);
      a.clip_lo = field_or<double>(aj, "lo", a.clip_lo, where);
      a.clip_hi = field_or<double>(aj, "hi", a.clip_hi, where);
      a.precision = field_or<int>(aj, "precision", a.precision, where);
    } else if (type == "categorical") {
      a.kind = AttrSpec::Kind::kCategorical;
      a.labels = field<std::vector<std::string>>(aj, "labels", where);
      a.weights = field<std::vector<double>>(aj, "weights", where);
    } else if (type == "label") {
      a.kind = AttrSpec::Kind::kLabel;
      a.group = field<std::string>(aj, "group", where);
      a.rates = field<std::map<std::string, double>>(aj, "rates", where);
      if (aj.contains("trend")) {
        const auto& tj = aj["trend"];
        a.trend_attr = field<std::string>(tj, "attr", where + " trend");
        a.trend_slope = field<double>(tj, "slope", where + " trend");
        a.trend_center = field_or<double>(tj, "center", 0.0, where + " trend");
      }
    } else {
      bad_spec(where + ": unknown type '" + type + "'");
    }
    spec.attributes.push_back(std::move(a));
  }
  if (j.contains("correlations")) {
    for (const auto& cj : j["correlations"]) {
      Correlation c;
      c.a = field<std::string>(cj, "a", "correlation");
      c.b = field<std::string>(cj, "b", "correlation");
      c.rho = field<double>(cj, "rho", "correlation");
      spec.correlations.push_back(std::move(c));
    }
  }
  spec.validate();
  return spec;
}

nlohmann::json GenSpec::to_json() const {
  nlohmann::json attrs = nlohmann::json::array();
  for (const auto& a : attributes) {
    nlohmann::json aj{{"name", a.name}, {"type", std::string(kind_name(a.kind))}};
    switch (a.kind) {
      case AttrSpec::Kind::kUniformInt:
        aj["lo"] = a.lo;
        aj["hi"] = a.hi;
        break;
      case AttrSpec::Kind::kNormal:
        aj["mean"] = a.mean;
        aj["stddev"] = a.stddev;
        aj["lo"] = a.clip_lo;
        aj["hi"] = a.clip_hi;
        aj["precision"] = a.precision;
        break;
      case AttrSpec::Kind::kCategorical:
        aj["labels"] = a.labels;
        aj["weights"] = a.weights;
        break;
      case AttrSpec::Kind::kLabel:
        aj["group"] = a.group;
        aj["rates"] = a.rates;
        if (!a.trend_attr.empty()) {
          aj["trend"] = {{"attr", a.trend_attr},
                         {"slope", a.trend_slope},
                         {"center", a.trend_center}};
        }
        break;
    }
    attrs.push_back(std::move(aj));
  }
  nlohmann::json corr = nlohmann::json::array();
  for (const auto& c : correlations) {
    corr.push_back({{"a", c.a}, {"b", c.b}, {"rho", c.rho}});
  }
  return {{"rows", rows},
          {"seed", seed},
          {"attributes", std::move(attrs)},
          {"correlations", std::move(corr)}};
}

// ---------------------------------------------------------------------------
// Generation

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double round_to(double x, int precision) {
  const double scale = std::pow(10.0, precision);
  return std::round(x * scale) / scale;
}

std::size_t pick_category(const AttrSpec& a, double u) {
  double acc = 0;
  for (std::size_t i = 0; i < a.weights.size(); ++i) {
    acc += a.weights[i];
    if (u < acc) return i;
  }
  // Rounding left u above the total: take the last positive weight.
  for (std::size_t i = a.weights.size(); i-- > 0;) {
    if (a.weights[i] > 0) return i;
  }
  return 0;
}

// Value of a non-label attribute from a standard-normal latent.
double from_latent(const AttrSpec& a, double z) {
  const double u = normal_cdf(z);
  switch (a.kind) {
    case AttrSpec::Kind::kUniformInt: {
      const double range = static_cast<double>(a.hi - a.lo) + 1.0;
      auto offset = static_cast<std::int64_t>(std::floor(u * range));
      offset = std::clamp<std::int64_t>(offset, 0, a.hi - a.lo);
      return static_cast<double>(a.lo + offset);
    }
    case AttrSpec::Kind::kNormal:
      return round_to(std::clamp(a.mean + a.stddev * z, a.clip_lo, a.clip_hi),
                      a.precision);
    case AttrSpec::Kind::kCategorical:
      return static_cast<double>(pick_category(a, u));
    case AttrSpec::Kind::kLabel: break;
  }
  return 0;
}

double direct_sample(const AttrSpec& a, Rng& rng) {
  switch (a.kind) {
    case AttrSpec::Kind::kUniformInt:
      return static_cast<double>(rng.uniform_int(a.lo, a.hi));
    case AttrSpec::Kind::kNormal:
      return round_to(
          std::clamp(a.mean + a.stddev * rng.normal(), a.clip_lo, a.clip_hi),
          a.precision);
    case AttrSpec::Kind::kCategorical:
      return static_cast<double>(pick_category(a, rng.uniform()));
    case AttrSpec::Kind::kLabel: break;
  }
  return 0;
}

}  // namespace

Dataset generate(const GenSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const std::size_t n = spec.rows;
  const std::size_t width = spec.attributes.size();
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t c = 0; c < width; ++c) index[spec.attributes[c].name] = c;

  std::vector<std::vector<double>> columns(width);
  std::vector<bool> done(width, false);
  std::unordered_map<std::string, const Correlation*> pair_of;
  for (const auto& c : spec.correlations) {
    pair_of[c.a] = &c;
    pair_of[c.b] = &c;
  }

  // Base attributes first, in declaration order; labels afterwards since
  // they read other columns.
  for (std::size_t c = 0; c < width; ++c) {
    const AttrSpec& a = spec.attributes[c];
    if (done[c] || a.kind == AttrSpec::Kind::kLabel) continue;
    auto it = pair_of.find(a.name);
    if (it == pair_of.end()) {
      columns[c].reserve(n);
      for (std::size_t r = 0; r < n; ++r) {
        columns[c].push_back(direct_sample(a, rng));
      }
      done[c] = true;
      continue;
    }
    const Correlation& pair = *it->second;
    const std::size_t ca = index.at(pair.a);
    const std::size_t cb = index.at(pair.b);
    const double rho = pair.rho;
    const double tail = std::sqrt(1.0 - rho * rho);
    columns[ca].reserve(n);
    columns[cb].reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
      const double z1 = rng.normal();
      const double z2 = rho * z1 + tail * rng.normal();
      columns[ca].push_back(from_latent(spec.attributes[ca], z1));
      columns[cb].push_back(from_latent(spec.attributes[cb], z2));
    }
    done[ca] = done[cb] = true;
  }

  for (std::size_t c = 0; c < width; ++c) {
    const AttrSpec& a = spec.attributes[c];
    if (a.kind != AttrSpec::Kind::kLabel) continue;
    const std::size_t g = index.at(a.group);
    const AttrSpec& group = spec.attributes[g];
    std::vector<double> rate_of;
    for (const auto& label : group.labels) rate_of.push_back(a.rates.at(label));
    const std::vector<double>* trend =
        a.trend_attr.empty() ? nullptr : &columns[index.at(a.trend_attr)];
    columns[c].reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
      double p = rate_of[static_cast<std::size_t>(columns[g][r])];
      if (trend) p += a.trend_slope * ((*trend)[r] - a.trend_center);
      p = std::clamp(p, 0.0, 1.0);
      columns[c].push_back(rng.uniform() < p ? 1.0 : 0.0);
    }
  }

  // Recode categoricals by first appearance.
  std::vector<std::string> schema;
  std::map<std::string, std::vector<std::string>> labels;
  for (std::size_t c = 0; c < width; ++c) {
    const AttrSpec& a = spec.attributes[c];
    schema.push_back(a.name);
    if (a.kind != AttrSpec::Kind::kCategorical) continue;
    std::vector<double> recode(a.labels.size(), -1);
    auto& names = labels[a.name];
    for (double& v : columns[c]) {
      auto code = static_cast<std::size_t>(v);
      if (recode[code] < 0) {
        recode[code] = static_cast<double>(names.size());
        names.push_back(a.labels[code]);
      }
      v = recode[code];
    }
  }
  return Dataset(std::move(schema), std::move(columns), std::move(labels));
}

}  // namespace repairkit
