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

#ifndef REPAIRKIT_ERROR_HPP
#define REPAIRKIT_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace repairkit {

enum class ErrorKind {
  kIo,
  kSchema,
  kParse,
  kUnknownAttribute,
  kBadQuery,
  kSyntax,
  kEmptyRangeBound,
  kUndefinedDivision,
  kUnboundAggregate,
  kBadParams,
  kEmptyDataset,
  kEmptyDomain,
  kAllSingleton,
  kBadSpec,
  kSpaceTooLarge,
  kBadSweep,
};

std::string_view to_string(ErrorKind kind);

// Every failure surfaced by the library carries a kind so the CLI can map it
// to a structured message without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace repairkit

#endif  // REPAIRKIT_ERROR_HPP
