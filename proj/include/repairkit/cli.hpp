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

#ifndef REPAIRKIT_CLI_HPP
#define REPAIRKIT_CLI_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace repairkit {

// Exit codes shared by the subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNoRepair = 2;
inline constexpr int kExitDivergence = 3;

struct RunConfig {
  std::string dataset;
  std::vector<std::string> categoricals;
  std::string query;  // inline JSON object or path to a JSON file
  std::vector<std::string> constraints;
  std::string algo = "rp";
  std::size_t k = 7;
  std::size_t branching = 5;
  std::size_t bucket = 15;
  std::size_t split = 2;
  std::uint64_t seed = 0;
  std::string out;  // empty: stdout
  bool tree_stats = false;
  std::uint64_t max_space = 1000000;  // verify guard
  bool corrupt_summaries = false;     // verify test hook

  // Fields of a run-config JSON file; absent fields keep current values.
  void merge_json(const nlohmann::json& j);
  // Throws Error{kBadParams} on out-of-range values or missing inputs.
  void validate() const;
};

struct SweepConfig {
  RunConfig base;
  std::optional<nlohmann::json> gen;  // generator spec instead of a dataset
  std::vector<std::string> algos{"bf", "ff", "rp"};
  std::size_t repetitions = 5;
  std::vector<std::size_t> rows;       // empty: dataset as is
  std::vector<std::size_t> branching;  // empty: base value
  std::vector<std::size_t> bucket;
  std::vector<std::size_t> k;
  // Each entry replaces the constraint set of the base config.
  std::vector<std::vector<std::string>> constraint_sets;

  // Throws Error{kBadSweep}.
  static SweepConfig from_json(const nlohmann::json& j);
};

int cmd_repair(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_bench(const SweepConfig& config, std::ostream& out, std::ostream& err);
int cmd_gen(const std::string& spec_path, const std::string& out_path,
            std::optional<std::uint64_t> seed,
            std::optional<std::size_t> rows, std::ostream& out,
            std::ostream& err);

// Full command line (argv[0] is the program name).
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace repairkit

#endif  // REPAIRKIT_CLI_HPP
