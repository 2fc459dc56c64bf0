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

#ifndef REPAIRKIT_DATASET_HPP
#define REPAIRKIT_DATASET_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace repairkit {

// Sorted distinct values of one column; the candidate constants for a
// predicate on that column are drawn from here.
struct ActiveDomain {
  std::string attribute;
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  bool empty() const noexcept { return values.empty(); }
};

// Immutable columnar table of doubles. Categorical columns hold codes
// assigned by first appearance; `labels(attr)[code]` recovers the label.
class Dataset {
 public:
  Dataset() = default;

  // Validates the invariants (unique non-empty names, equal column lengths,
  // no NaN) and throws Error{kSchema|kParse} on violation.
  Dataset(std::vector<std::string> schema,
          std::vector<std::vector<double>> columns,
          std::map<std::string, std::vector<std::string>> labels = {});

  const std::vector<std::string>& schema() const noexcept { return schema_; }
  std::size_t row_count() const noexcept { return row_count_; }
  std::size_t column_count() const noexcept { return schema_.size(); }

  std::optional<std::size_t> find(std::string_view attr) const;
  // Throws Error{kUnknownAttribute}.
  std::size_t index_of(std::string_view attr) const;

  std::span<const double> column(std::size_t index) const {
    return columns_[index];
  }
  std::span<const double> column(std::string_view attr) const {
    return columns_[index_of(attr)];
  }
  double value(std::size_t row, std::size_t col) const {
    return columns_[col][row];
  }

  bool is_categorical(std::size_t col) const;
  bool is_categorical(std::string_view attr) const {
    return is_categorical(index_of(attr));
  }
  // Empty for numeric columns.
  const std::vector<std::string>& labels(std::string_view attr) const;
  std::optional<double> code_of(std::string_view attr,
                                std::string_view label) const;

  // {attr: {label: code}} for every categorical column.
  nlohmann::json category_mapping() const;

 private:
  std::vector<std::string> schema_;
  std::vector<std::vector<double>> columns_;
  std::map<std::string, std::vector<std::string>> labels_;
  std::size_t row_count_ = 0;
};

// Reads a header-first comma-separated file. Cells of `categorical_attrs`
// may be arbitrary labels; everything else must parse as a finite number.
Dataset load_csv(const std::filesystem::path& path,
                 const std::set<std::string>& categorical_attrs = {});
Dataset read_csv(std::istream& in,
                 const std::set<std::string>& categorical_attrs = {});

// Shortest round-trip formatting, so read_csv(write_csv(ds)) is bit-exact.
void write_csv(const Dataset& ds, std::ostream& out);
void write_csv(const Dataset& ds, const std::filesystem::path& path);

ActiveDomain active_domain(const Dataset& ds, std::string_view attr);

}  // namespace repairkit

#endif  // REPAIRKIT_DATASET_HPP
