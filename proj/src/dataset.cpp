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

#include "repairkit/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "repairkit/error.hpp"
#include "repairkit/format.hpp"

namespace repairkit {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo: return "IoError";
    case ErrorKind::kSchema: return "SchemaError";
    case ErrorKind::kParse: return "ParseError";
    case ErrorKind::kUnknownAttribute: return "UnknownAttribute";
    case ErrorKind::kBadQuery: return "BadQuery";
    case ErrorKind::kSyntax: return "SyntaxError";
    case ErrorKind::kEmptyRangeBound: return "EmptyRangeBound";
    case ErrorKind::kUndefinedDivision: return "UndefinedDivision";
    case ErrorKind::kUnboundAggregate: return "UnboundAggregate";
    case ErrorKind::kBadParams: return "BadParams";
    case ErrorKind::kEmptyDataset: return "EmptyDataset";
    case ErrorKind::kEmptyDomain: return "EmptyDomain";
    case ErrorKind::kAllSingleton: return "AllSingleton";
    case ErrorKind::kBadSpec: return "BadSpec";
    case ErrorKind::kSpaceTooLarge: return "SpaceTooLarge";
    case ErrorKind::kBadSweep: return "BadSweep";
  }
  return "Error";
}

Dataset::Dataset(std::vector<std::string> schema,
                 std::vector<std::vector<double>> columns,
                 std::map<std::string, std::vector<std::string>> labels)
    : schema_(std::move(schema)),
      columns_(std::move(columns)),
      labels_(std::move(labels)) {
  if (schema_.size() != columns_.size()) {
    throw Error(ErrorKind::kSchema, "schema has " +
                                        std::to_string(schema_.size()) +
                                        " attributes but " +
                                        std::to_string(columns_.size()) +
                                        " columns were supplied");
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& name : schema_) {
    if (name.empty()) {
      throw Error(ErrorKind::kSchema, "empty attribute name in header");
    }
    if (!seen.insert(name).second) {
      throw Error(ErrorKind::kSchema, "duplicate attribute '" + name + "'");
    }
  }
  row_count_ = columns_.empty() ? 0 : columns_.front().size();
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (columns_[c].size() != row_count_) {
      throw Error(ErrorKind::kSchema,
                  "column '" + schema_[c] + "' has a different length");
    }
    for (double v : columns_[c]) {
      if (std::isnan(v)) {
        throw Error(ErrorKind::kParse, "NaN in column '" + schema_[c] + "'");
      }
    }
  }
  for (const auto& [attr, _] : labels_) {
    if (!seen.contains(attr)) {
      throw Error(ErrorKind::kSchema,
                  "labels given for unknown attribute '" + attr + "'");
    }
  }
}

std::optional<std::size_t> Dataset::find(std::string_view attr) const {
  auto it = std::find(schema_.begin(), schema_.end(), attr);
  if (it == schema_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - schema_.begin());
}

std::size_t Dataset::index_of(std::string_view attr) const {
  if (auto idx = find(attr)) return *idx;
  throw Error(ErrorKind::kUnknownAttribute,
              "unknown attribute '" + std::string(attr) + "'");
}

bool Dataset::is_categorical(std::size_t col) const {
  return labels_.contains(schema_.at(col));
}

const std::vector<std::string>& Dataset::labels(std::string_view attr) const {
  static const std::vector<std::string> kNone;
  auto it = labels_.find(std::string(attr));
  return it == labels_.end() ? kNone : it->second;
}

std::optional<double> Dataset::code_of(std::string_view attr,
                                       std::string_view label) const {
  const auto& names = labels(attr);
  auto it = std::find(names.begin(), names.end(), label);
  if (it == names.end()) return std::nullopt;
  return static_cast<double>(it - names.begin());
}

nlohmann::json Dataset::category_mapping() const {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [attr, names] : labels_) {
    nlohmann::json codes = nlohmann::json::object();
    for (std::size_t i = 0; i < names.size(); ++i) codes[names[i]] = i;
    out[attr] = std::move(codes);
  }
  return out;
}

namespace {

std::vector<std::string_view> split_row(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    auto cell = line.substr(start, comma == std::string_view::npos
                                       ? std::string_view::npos
                                       : comma - start);
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) {
      cell.remove_prefix(1);
    }
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) {
      cell.remove_suffix(1);
    }
    cells.push_back(cell);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::optional<double> parse_number(std::string_view cell) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(),
                                   value);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    return std::nullopt;
  }
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

}  // namespace

Dataset read_csv(std::istream& in,
                 const std::set<std::string>& categorical_attrs) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorKind::kSchema, "missing header row");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
    line.erase(0, 3);
  }
  std::vector<std::string> schema;
  for (auto cell : split_row(line)) schema.emplace_back(cell);

  // Reject bad headers before touching the body so the error names the cause.
  {
    std::unordered_set<std::string> seen;
    for (const auto& name : schema) {
      if (name.empty()) {
        throw Error(ErrorKind::kSchema, "empty attribute name in header");
      }
      if (!seen.insert(name).second) {
        throw Error(ErrorKind::kSchema, "duplicate attribute '" + name + "'");
      }
    }
  }
  for (const auto& attr : categorical_attrs) {
    if (std::find(schema.begin(), schema.end(), attr) == schema.end()) {
      throw Error(ErrorKind::kUnknownAttribute,
                  "categorical attribute '" + attr + "' not in header");
    }
  }

  const std::size_t width = schema.size();
  std::vector<std::vector<double>> columns(width);
  std::vector<bool> is_cat(width);
  std::vector<std::unordered_map<std::string, double>> codes(width);
  std::map<std::string, std::vector<std::string>> labels;
  for (std::size_t c = 0; c < width; ++c) {
    is_cat[c] = categorical_attrs.contains(schema[c]);
    if (is_cat[c]) labels[schema[c]];
  }

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_row(line);
    if (cells.size() != width) {
      throw Error(ErrorKind::kParse,
                  "line " + std::to_string(line_no) + ": expected " +
                      std::to_string(width) + " cells, found " +
                      std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < width; ++c) {
      if (is_cat[c]) {
        std::string key(cells[c]);
        if (key.empty()) {
          throw Error(ErrorKind::kParse, "line " + std::to_string(line_no) +
                                             ": missing value for '" +
                                             schema[c] + "'");
        }
        auto [it, inserted] =
            codes[c].try_emplace(key, static_cast<double>(codes[c].size()));
        if (inserted) labels[schema[c]].push_back(key);
        columns[c].push_back(it->second);
      } else {
        auto value = parse_number(cells[c]);
        if (!value) {
          throw Error(ErrorKind::kParse,
                      "line " + std::to_string(line_no) + ": '" +
                          std::string(cells[c]) +
                          "' is not a finite number (attribute '" +
                          schema[c] + "')");
        }
        columns[c].push_back(*value);
      }
    }
  }
  return Dataset(std::move(schema), std::move(columns), std::move(labels));
}

Dataset load_csv(const std::filesystem::path& path,
                 const std::set<std::string>& categorical_attrs) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kIo, "cannot read '" + path.string() + "'");
  }
  return read_csv(in, categorical_attrs);
}

void write_csv(const Dataset& ds, std::ostream& out) {
  const auto& schema = ds.schema();
  for (std::size_t c = 0; c < schema.size(); ++c) {
    if (c) out << ',';
    out << schema[c];
  }
  out << '\n';
  for (std::size_t r = 0; r < ds.row_count(); ++r) {
    for (std::size_t c = 0; c < schema.size(); ++c) {
      if (c) out << ',';
      const auto& names = ds.labels(schema[c]);
      double v = ds.value(r, c);
      if (!names.empty()) {
        out << names.at(static_cast<std::size_t>(v));
      } else {
        out << format_double(v);
      }
    }
    out << '\n';
  }
}

void write_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorKind::kIo, "cannot write '" + path.string() + "'");
  }
  write_csv(ds, out);
}

ActiveDomain active_domain(const Dataset& ds, std::string_view attr) {
  auto col = ds.column(attr);
  std::vector<double> values(col.begin(), col.end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return {std::string(attr), std::move(values)};
}

}  // namespace repairkit
