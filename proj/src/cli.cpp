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

#include "repairkit/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "repairkit/constraint.hpp"
#include "repairkit/datagen.hpp"
#include "repairkit/dataset.hpp"
#include "repairkit/error.hpp"
#include "repairkit/format.hpp"
#include "repairkit/kdtree.hpp"
#include "repairkit/oracle.hpp"
#include "repairkit/query.hpp"
#include "repairkit/search.hpp"

namespace repairkit {

namespace {

std::shared_ptr<spdlog::logger> logger() {
  static std::shared_ptr<spdlog::logger> log = [] {
    auto l = spdlog::stderr_logger_mt("repairkit");
    l->set_pattern("[%l] %v");
    auto level = spdlog::level::err;
    if (const char* env = std::getenv("REPAIRKIT_LOG")) {
      std::string v = env;
      if (v == "info") level = spdlog::level::info;
      if (v == "debug") level = spdlog::level::debug;
    }
    l->set_level(level);
    return l;
  }();
  return log;
}

void report_error(std::ostream& err, std::string_view kind,
                  const std::string& message) {
  nlohmann::json j{{"error", std::string(kind)}, {"message", message}};
  err << j.dump() << '\n';
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot read '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::kParse, "'" + path + "': " + e.what());
  }
}

nlohmann::json load_query_json(const std::string& text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorKind::kParse, std::string("inline query: ") + e.what());
    }
  }
  return read_json_file(text);
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    report_error(err, to_string(e.kind()), e.what());
  } catch (const nlohmann::json::exception& e) {
    report_error(err, "ParseError", e.what());
  } catch (const std::exception& e) {
    report_error(err, "Error", e.what());
  }
  return kExitError;
}

void write_output(const std::string& path, const std::string& text,
                  std::ostream& out) {
  if (path.empty()) {
    out << text << '\n';
    return;
  }
  std::ofstream file(path);
  if (!file) throw Error(ErrorKind::kIo, "cannot write '" + path + "'");
  file << text << '\n';
}

struct Instance {
  Dataset ds;
  UserQuery query;
  ConstraintSet constraints;
};

// The candidate space keeps a copy of the query, so the instance only has
// to outlive the tree (which points at the dataset).
Instance load_instance(const RunConfig& config) {
  std::set<std::string> cats(config.categoricals.begin(),
                             config.categoricals.end());
  Instance inst{load_csv(config.dataset, cats), {}, {}};
  inst.query = UserQuery::from_json(load_query_json(config.query), inst.ds);
  inst.constraints = ConstraintSet::parse(config.constraints, inst.ds.schema());
  logger()->info("loaded {} rows, {} predicates, {} constraints",
                 inst.ds.row_count(), inst.query.predicates.size(),
                 inst.constraints.constraints().size());
  return inst;
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) out.push_back(part);
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Configs

void RunConfig::merge_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw Error(ErrorKind::kBadParams, "run config must be a JSON object");
  }
  if (j.contains("dataset")) dataset = j["dataset"].get<std::string>();
  if (j.contains("categoricals")) {
    categoricals = j["categoricals"].get<std::vector<std::string>>();
  }
  if (j.contains("query")) {
    query = j["query"].is_string() ? j["query"].get<std::string>()
                                   : j["query"].dump();
  }
  if (j.contains("constraint")) {
    constraints = {j["constraint"].get<std::string>()};
  }
  if (j.contains("constraints")) {
    constraints = j["constraints"].get<std::vector<std::string>>();
  }
  if (j.contains("algo")) algo = j["algo"].get<std::string>();
  if (j.contains("k")) k = j["k"].get<std::size_t>();
  if (j.contains("branching")) branching = j["branching"].get<std::size_t>();
  if (j.contains("bucket")) bucket = j["bucket"].get<std::size_t>();
  if (j.contains("split")) split = j["split"].get<std::size_t>();
  if (j.contains("seed")) seed = j["seed"].get<std::uint64_t>();
  if (j.contains("out")) out = j["out"].get<std::string>();
  if (j.contains("max_space")) max_space = j["max_space"].get<std::uint64_t>();
}

void RunConfig::validate() const {
  if (dataset.empty()) throw Error(ErrorKind::kBadParams, "no dataset given");
  if (query.empty()) throw Error(ErrorKind::kBadParams, "no query given");
  if (constraints.empty()) {
    throw Error(ErrorKind::kBadParams, "at least one --constraint is needed");
  }
  if (algo != "bf" && algo != "ff" && algo != "rp") {
    throw Error(ErrorKind::kBadParams,
                "--algo must be bf, ff or rp (got '" + algo + "')");
  }
  if (k < 1) throw Error(ErrorKind::kBadParams, "--k must be at least 1");
  if (branching < 2) {
    throw Error(ErrorKind::kBadParams, "--branching must be at least 2");
  }
  if (bucket < 1) throw Error(ErrorKind::kBadParams, "--bucket must be >= 1");
  if (split < 2) throw Error(ErrorKind::kBadParams, "--split must be >= 2");
}

SweepConfig SweepConfig::from_json(const nlohmann::json& j) {
  auto bad = [](const std::string& what) {
    throw Error(ErrorKind::kBadSweep, what);
  };
  if (!j.is_object()) bad("sweep config must be a JSON object");
  SweepConfig s;
  try {
    s.base.merge_json(j);
    if (j.contains("gen")) s.gen = j["gen"];
    if (j.contains("algos")) s.algos = j["algos"].get<std::vector<std::string>>();
    if (j.contains("repetitions")) {
      s.repetitions = j["repetitions"].get<std::size_t>();
    }
    if (j.contains("axes")) {
      const auto& axes = j["axes"];
      if (!axes.is_object()) bad("\"axes\" must be an object");
      for (const auto& [key, value] : axes.items()) {
        if (key == "rows") {
          s.rows = value.get<std::vector<std::size_t>>();
        } else if (key == "branching") {
          s.branching = value.get<std::vector<std::size_t>>();
        } else if (key == "bucket") {
          s.bucket = value.get<std::vector<std::size_t>>();
        } else if (key == "k") {
          s.k = value.get<std::vector<std::size_t>>();
        } else if (key == "constraints") {
          for (const auto& entry : value) {
            if (entry.is_string()) {
              s.constraint_sets.push_back({entry.get<std::string>()});
            } else {
              s.constraint_sets.push_back(
                  entry.get<std::vector<std::string>>());
            }
          }
        } else {
          bad("unknown sweep axis '" + key + "'");
        }
        if (value.empty()) bad("sweep axis '" + key + "' is empty");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("malformed sweep config: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kBadSweep) throw;
    bad(e.what());
  }
  if (s.repetitions < 1) bad("repetitions must be at least 1");
  if (s.algos.empty()) bad("no algorithms selected");
  for (const auto& a : s.algos) {
    if (a != "bf" && a != "ff" && a != "rp") bad("unknown algorithm '" + a + "'");
  }
  if (s.base.dataset.empty() && !s.gen) {
    bad("sweep needs a \"dataset\" path or a \"gen\" spec");
  }
  if (s.base.query.empty()) bad("sweep needs a \"query\"");
  if (s.base.constraints.empty() && s.constraint_sets.empty()) {
    bad("sweep needs at least one constraint");
  }
  for (auto v : s.branching) {
    if (v < 2) bad("branching values must be at least 2");
  }
  for (auto v : s.bucket) {
    if (v < 1) bad("bucket values must be at least 1");
  }
  for (auto v : s.k) {
    if (v < 1) bad("k values must be at least 1");
  }
  for (auto v : s.rows) {
    if (v < 1) bad("rows values must be at least 1");
  }
  return s;
}

// ---------------------------------------------------------------------------
// Commands

int cmd_repair(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.validate();
    Instance inst = load_instance(config);
    CandidateSpace space(inst.ds, inst.query);
    logger()->info("candidate space holds {} candidates", space.size());

    RepairResult result;
    std::optional<KdTree> tree;
    double build_s = 0;
    if (config.algo == "bf") {
      result = bf_topk(inst.ds, space, inst.constraints, config.k);
    } else {
      auto start = std::chrono::steady_clock::now();
      tree.emplace(build_tree(inst.ds, space, inst.constraints,
                              config.branching, config.bucket));
      build_s = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count();
      logger()->info("built tree: {} nodes, depth {}", tree->node_count(),
                     tree->depth());
      result = config.algo == "ff"
                   ? ff_topk(*tree, space, inst.constraints, config.k)
                   : rp_topk(*tree, space, inst.constraints, config.k,
                             config.split);
    }
    nlohmann::json j = result.to_json(space);
    j["k"] = config.k;
    j["constraints"] = nlohmann::json::array();
    for (const auto& c : inst.constraints.constraints()) {
      j["constraints"].push_back(to_string(c));
    }
    if (!inst.ds.category_mapping().empty()) {
      j["categories"] = inst.ds.category_mapping();
    }
    if (tree) {
      j["params"] = {{"branching", config.branching},
                     {"bucket", config.bucket},
                     {"split", config.split}};
      j["stats"]["build_time_s"] = build_s;
      if (config.tree_stats) j["tree"] = tree->stats_json();
    }
    write_output(config.out, j.dump(2), out);
    logger()->info("{} repairs, nce={}, nca={}", result.repairs.size(),
                   result.stats.nce, result.stats.nca);
    return result.repairs.empty() ? kExitNoRepair : kExitOk;
  });
}

namespace {

std::string describe_candidate(const CandidateSpace& space,
                               const ScoredCandidate* c) {
  if (!c) return "(none)";
  return space.candidate_to_json(c->candidate)["condition"].get<std::string>() +
         " @ " + format_double(c->distance);
}

}  // namespace

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.validate();
    Instance inst = load_instance(config);
    CandidateSpace space(inst.ds, inst.query);
    if (space.size() > config.max_space) {
      throw Error(ErrorKind::kSpaceTooLarge,
                  "candidate space has " + std::to_string(space.size()) +
                      " candidates; the limit is " +
                      std::to_string(config.max_space));
    }
    KdTree tree = build_tree(inst.ds, space, inst.constraints,
                             config.branching, config.bucket);
    if (config.corrupt_summaries) tree.corrupt_summaries();

    std::vector<RepairResult> results;
    results.push_back(bf_topk(inst.ds, space, inst.constraints, config.k));
    results.push_back(ff_topk(tree, space, inst.constraints, config.k));
    results.push_back(
        rp_topk(tree, space, inst.constraints, config.k, config.split));

    nlohmann::json j{{"schema_version", 1}, {"k", config.k}};
    nlohmann::json per = nlohmann::json::object();
    for (const auto& r : results) per[r.algorithm] = r.to_json(space);
    j["results"] = std::move(per);

    const auto& truth = results.front().repairs;
    for (std::size_t a = 1; a < results.size(); ++a) {
      const auto& other = results[a].repairs;
      if (other == truth) continue;
      std::size_t i = 0;
      while (i < truth.size() && i < other.size() && truth[i] == other[i]) ++i;
      const ScoredCandidate* want = i < truth.size() ? &truth[i] : nullptr;
      const ScoredCandidate* got = i < other.size() ? &other[i] : nullptr;
      j["agree"] = false;
      j["divergence"] = {{"algorithm", results[a].algorithm},
                         {"position", i},
                         {"bf", describe_candidate(space, want)},
                         {results[a].algorithm, describe_candidate(space, got)}};
      write_output(config.out, j.dump(2), out);
      err << "divergence: " << results[a].algorithm << " differs from bf at "
          << "position " << i << ": expected "
          << describe_candidate(space, want) << ", got "
          << describe_candidate(space, got) << '\n';
      return kExitDivergence;
    }
    j["agree"] = true;
    write_output(config.out, j.dump(2), out);
    return kExitOk;
  });
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

Dataset prefix_rows(const Dataset& ds, std::size_t rows) {
  rows = std::min(rows, ds.row_count());
  std::vector<std::vector<double>> columns;
  std::map<std::string, std::vector<std::string>> labels;
  for (std::size_t c = 0; c < ds.column_count(); ++c) {
    auto col = ds.column(c);
    columns.emplace_back(col.begin(), col.begin() + rows);
    if (ds.is_categorical(c)) {
      labels[ds.schema()[c]] = ds.labels(ds.schema()[c]);
    }
  }
  return Dataset(ds.schema(), std::move(columns), std::move(labels));
}

}  // namespace

int cmd_bench(const SweepConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig& base = config.base;
    std::optional<Dataset> loaded;
    std::optional<GenSpec> spec;
    if (config.gen) {
      spec = GenSpec::from_json(*config.gen);
    } else {
      std::set<std::string> cats(base.categoricals.begin(),
                                 base.categoricals.end());
      loaded = load_csv(base.dataset, cats);
    }
    auto axis = [](const std::vector<std::size_t>& v, std::size_t fallback) {
      return v.empty() ? std::vector<std::size_t>{fallback} : v;
    };
    const auto rows_axis =
        axis(config.rows, spec ? spec->rows : loaded->row_count());
    const auto branching_axis = axis(config.branching, base.branching);
    const auto bucket_axis = axis(config.bucket, base.bucket);
    const auto k_axis = axis(config.k, base.k);
    auto constraint_axis = config.constraint_sets;
    if (constraint_axis.empty()) constraint_axis.push_back(base.constraints);
    const auto query_json = load_query_json(base.query);

    out << "rows,branching,bucket,k,constraints,algo,wall_time_s,"
           "build_time_s,nce,nca,tuple_accesses,repairs_found\n";
    for (auto rows : rows_axis) {
      Dataset ds;
      if (spec) {
        GenSpec s = *spec;
        s.rows = rows;
        ds = generate(s);
      } else {
        ds = prefix_rows(*loaded, rows);
      }
      UserQuery query = UserQuery::from_json(query_json, ds);
      CandidateSpace space(ds, query);
      for (std::size_t ci = 0; ci < constraint_axis.size(); ++ci) {
        ConstraintSet constraints =
            ConstraintSet::parse(constraint_axis[ci], ds.schema());
        for (auto branching : branching_axis) {
          for (auto bucket : bucket_axis) {
            for (auto k : k_axis) {
              for (const auto& algo : config.algos) {
                std::vector<double> times;
                std::vector<double> builds;
                RepairResult last;
                for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
                  if (algo == "bf") {
                    last = bf_topk(ds, space, constraints, k);
                    builds.push_back(0);
                  } else {
                    auto start = std::chrono::steady_clock::now();
                    KdTree tree =
                        build_tree(ds, space, constraints, branching, bucket);
                    builds.push_back(std::chrono::duration<double>(
                                         std::chrono::steady_clock::now() -
                                         start)
                                         .count());
                    last = algo == "ff"
                               ? ff_topk(tree, space, constraints, k)
                               : rp_topk(tree, space, constraints, k,
                                         base.split);
                  }
                  times.push_back(last.stats.wall_time_s);
                }
                out << rows << ',' << branching << ',' << bucket << ',' << k
                    << ',' << ci << ',' << algo << ','
                    << format_double(median(times)) << ','
                    << format_double(median(builds)) << ','
                    << last.stats.nce << ',' << last.stats.nca << ','
                    << last.stats.tuple_accesses << ','
                    << last.stats.repairs_found << '\n';
                logger()->info("cell rows={} B={} S={} k={} c={} {} done",
                               rows, branching, bucket, k, ci, algo);
              }
            }
          }
        }
      }
    }
    return kExitOk;
  });
}

int cmd_gen(const std::string& spec_path, const std::string& out_path,
            std::optional<std::uint64_t> seed, std::optional<std::size_t> rows,
            std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    GenSpec spec = GenSpec::from_json(read_json_file(spec_path));
    if (seed) spec.seed = *seed;
    if (rows) spec.rows = *rows;
    Dataset ds = generate(spec);
    if (out_path.empty()) {
      write_csv(ds, out);
    } else {
      write_csv(ds, std::filesystem::path(out_path));
    }
    logger()->info("generated {} rows", ds.row_count());
    return kExitOk;
  });
}

// ---------------------------------------------------------------------------
// Command line

namespace {

void add_run_options(CLI::App* cmd, RunConfig& cfg, std::string& config_path,
                     std::vector<std::string>& positionals) {
  cmd->add_option("--config", config_path, "Run-config JSON file");
  cmd->add_option("--algo", cfg.algo, "Algorithm: bf, ff or rp")
      ->check(CLI::IsMember({"bf", "ff", "rp"}));
  cmd->add_option("--k", cfg.k, "Number of repairs");
  cmd->add_option("--branching", cfg.branching, "kd-tree branching factor");
  cmd->add_option("--bucket", cfg.bucket, "kd-tree bucket size");
  cmd->add_option("--split", cfg.split, "Range split factor");
  cmd->add_option("--seed", cfg.seed, "Random seed");
  cmd->add_option("--constraint", cfg.constraints,
                  "Aggregate constraint (repeatable; all must hold)")
      ->allow_extra_args(false);
  cmd->add_option("--query", cfg.query, "Query JSON (inline or file)");
  cmd->add_option("--out", cfg.out, "Output file (default: stdout)");
  cmd->add_option("--categoricals", cfg.categoricals,
                  "Categorical attributes (comma-separated or repeated)")
      ->allow_extra_args(false);
  cmd->add_option("inputs", positionals, "DATA.csv [QUERY.json]");
}

// CLI flags win over the config file, which wins over defaults.
RunConfig resolve(const CLI::App* cmd, const RunConfig& flags,
                  const std::string& config_path,
                  const std::vector<std::string>& positionals) {
  RunConfig cfg;
  if (!config_path.empty()) cfg.merge_json(read_json_file(config_path));
  auto given = [&](const char* name) {
    const CLI::Option* opt = cmd->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--algo")) cfg.algo = flags.algo;
  if (given("--k")) cfg.k = flags.k;
  if (given("--branching")) cfg.branching = flags.branching;
  if (given("--bucket")) cfg.bucket = flags.bucket;
  if (given("--split")) cfg.split = flags.split;
  if (given("--seed")) cfg.seed = flags.seed;
  if (given("--constraint")) cfg.constraints = flags.constraints;
  if (given("--query")) cfg.query = flags.query;
  if (given("--out")) cfg.out = flags.out;
  if (given("--categoricals")) cfg.categoricals = split_list(flags.categoricals);
  if (given("--tree-stats")) cfg.tree_stats = true;
  if (given("--max-space")) cfg.max_space = flags.max_space;
  if (given("--corrupt-summaries")) cfg.corrupt_summaries = true;
  if (positionals.size() > 2) {
    throw Error(ErrorKind::kBadParams, "expected DATA.csv [QUERY.json]");
  }
  if (!positionals.empty()) cfg.dataset = positionals[0];
  if (positionals.size() == 2) cfg.query = positionals[1];
  return cfg;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Top-k repairs of query constants under aggregate constraints",
               "repairkit"};
  app.require_subcommand(1);

  RunConfig repair_flags;
  std::string repair_config;
  std::vector<std::string> repair_inputs;
  auto* repair = app.add_subcommand("repair", "Compute the top-k repairs");
  add_run_options(repair, repair_flags, repair_config, repair_inputs);
  repair->add_flag("--tree-stats", repair_flags.tree_stats,
                   "Include kd-tree level statistics in the output");

  RunConfig verify_flags;
  std::string verify_config;
  std::vector<std::string> verify_inputs;
  auto* verify =
      app.add_subcommand("verify", "Check that bf, ff and rp agree");
  add_run_options(verify, verify_flags, verify_config, verify_inputs);
  verify->add_option("--max-space", verify_flags.max_space,
                     "Largest candidate space to verify");
  verify->add_flag("--corrupt-summaries", verify_flags.corrupt_summaries)
      ->group("");  // test hook, hidden from help

  std::string bench_config;
  auto* bench = app.add_subcommand("bench", "Run a benchmark sweep");
  bench->add_option("config", bench_config, "Sweep config JSON")->required();

  std::string gen_spec;
  std::string gen_out;
  std::uint64_t gen_seed = 0;
  std::size_t gen_rows = 0;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset");
  gen->add_option("spec", gen_spec, "Generator spec JSON")->required();
  gen->add_option("--out", gen_out, "Output CSV (default: stdout)");
  gen->add_option("--seed", gen_seed, "Override the spec seed");
  gen->add_option("--rows", gen_rows, "Override the row count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  if (repair->parsed()) {
    RunConfig cfg;
    int code = guarded(err, [&] {
      cfg = resolve(repair, repair_flags, repair_config, repair_inputs);
      return kExitOk;
    });
    return code != kExitOk ? code : cmd_repair(cfg, out, err);
  }
  if (verify->parsed()) {
    RunConfig cfg;
    int code = guarded(err, [&] {
      cfg = resolve(verify, verify_flags, verify_config, verify_inputs);
      return kExitOk;
    });
    return code != kExitOk ? code : cmd_verify(cfg, out, err);
  }
  if (bench->parsed()) {
    SweepConfig sweep;
    int code = guarded(err, [&] {
      sweep = SweepConfig::from_json(read_json_file(bench_config));
      return kExitOk;
    });
    return code != kExitOk ? code : cmd_bench(sweep, out, err);
  }
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> rows;
  if (gen->count("--seed")) seed = gen_seed;
  if (gen->count("--rows")) rows = gen_rows;
  return cmd_gen(gen_spec, gen_out, seed, rows, out, err);
}

}  // namespace repairkit
