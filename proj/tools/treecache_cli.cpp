/*
 * Copyright 2026 The treecache Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// treecache command-line tool. Uses the C API only.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "treecache/treecache.h"

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

/// Carries a tc_status out of nested helpers.
struct Failure {
  tc_status status;
  std::string message;
};

void check(tc_status s, const std::string& context) {
  if (s == TC_OK) return;
  std::string msg = context + ": " + tc_last_error();
  if (s == TC_ERR_RESOURCE && tc_last_error_estimate() != 0) {
    msg += " (estimate " + std::to_string(tc_last_error_estimate()) + ")";
  }
  throw Failure{s, msg};
}

struct TreeDel {
  void operator()(tc_tree* t) const { tc_tree_free(t); }
};
struct TraceDel {
  void operator()(tc_trace* t) const { tc_trace_free(t); }
};
struct OptDel {
  void operator()(tc_opt_result* r) const { tc_opt_result_free(r); }
};
using TreePtr = std::unique_ptr<tc_tree, TreeDel>;
using TracePtr = std::unique_ptr<tc_trace, TraceDel>;
using OptPtr = std::unique_ptr<tc_opt_result, OptDel>;

std::string take_string(char* s) {
  std::string out = s ? s : "";
  tc_string_free(s);
  return out;
}

TreePtr load_tree(const std::string& path) {
  tc_tree* t = nullptr;
  check(tc_tree_load(path.c_str(), &t), "loading tree");
  return TreePtr(t);
}

TracePtr load_trace(const std::string& path, const tc_tree* tree) {
  tc_trace* t = nullptr;
  check(tc_trace_load(path.c_str(), tree, &t), "loading trace");
  return TracePtr(t);
}

struct Provenance {
  std::vector<std::string> argv;
  json flags = json::object();
};

json envelope(const std::string& command, const Provenance& prov, double seconds) {
  return {{"schema_version", kSchemaVersion},
          {"command", command},
          {"provenance",
           {{"tool", "treecache"}, {"library_version", tc_version()}, {"argv", prov.argv},
            {"flags", prov.flags}}},
          {"wall_clock_seconds", seconds}};
}

void write_json(const std::string& path, const json& j) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw Failure{TC_ERR_INPUT, "cannot write report " + path};
  out << j.dump(2) << '\n';
  if (!out) throw Failure{TC_ERR_INPUT, "cannot write report " + path};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{TC_ERR_INPUT, "cannot write " + path};
  out << text;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt_ratio(double x) {
  if (std::isinf(x)) return "inf";
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << x;
  return os.str();
}

// ---------------------------------------------------------------------------
// Commands

struct RunArgs {
  std::string tree, trace, report;
  long long alpha = 2;
  std::size_t k = 1;
  std::string backend = "fast";
  std::string assert_level = "lemma51";
  bool steps = false;
};

tc_engine_config engine_config(long long alpha, std::size_t k, const std::string& backend,
                               const std::string& level) {
  tc_engine_config c;
  tc_engine_config_default(&c);
  c.alpha = alpha;
  c.k_onl = k;
  if (backend == "naive") c.backend = TC_BACKEND_NAIVE;
  else if (backend == "fast") c.backend = TC_BACKEND_FAST;
  else if (backend == "both-checked" || backend == "both") c.backend = TC_BACKEND_BOTH;
  else throw Failure{TC_ERR_INPUT, "unknown backend " + backend};
  if (level == "off") c.assert_level = TC_ASSERT_OFF;
  else if (level == "lemma51") c.assert_level = TC_ASSERT_LEMMA51;
  else if (level == "full") c.assert_level = TC_ASSERT_FULL;
  else throw Failure{TC_ERR_INPUT, "unknown assert level " + level};
  return c;
}

int cmd_run(const RunArgs& a, Provenance prov) {
  const auto t0 = std::chrono::steady_clock::now();
  auto tree = load_tree(a.tree);
  auto trace = load_trace(a.trace, tree.get());
  const tc_engine_config cfg = engine_config(a.alpha, a.k, a.backend, a.assert_level);
  char* raw = nullptr;
  check(tc_run_report_json(tree.get(), trace.get(), &cfg, a.steps ? 1 : 0, &raw), "run");
  json run = json::parse(take_string(raw));

  prov.flags = {{"tree", a.tree}, {"trace", a.trace}, {"alpha", a.alpha}, {"k", a.k},
                {"backend", a.backend}, {"assert", a.assert_level}, {"steps", a.steps}};
  json rep = envelope("run", prov, seconds_since(t0));
  rep["tc"] = run;

  const json& l = run["ledger"];
  std::cout << "requests " << run["requests"] << "  charged " << run["charged_requests"]
            << "  fetches " << run["fetches"] << "  evictions " << run["evictions"] << '\n';
  std::cout << "serve " << l["serve"] << "  move " << l["move"] << "  total " << l["total"] << '\n';
  if (run.contains("backends_agree")) std::cout << "backends agree\n";
  std::cout << std::left << std::setw(8) << "phase" << std::setw(10) << "begin" << std::setw(10)
            << "end" << std::setw(10) << "serve" << std::setw(10) << "move" << std::setw(8)
            << "k_P" << "finished\n";
  for (const json& p : l["phases"]) {
    std::cout << std::setw(8) << p["phase"].get<long long>() << std::setw(10)
              << p["begin"].get<long long>() << std::setw(10) << p["end"].get<long long>()
              << std::setw(10) << p["serve"].get<long long>() << std::setw(10)
              << p["move"].get<long long>() << std::setw(8) << p["k_p"].get<long long>()
              << (p["finished"].get<bool>() ? "yes" : "no") << '\n';
  }
  write_json(a.report, rep);
  return 0;
}

struct OptArgs {
  std::string tree, trace, report;
  long long alpha = 2;
  std::size_t k_opt = 1;
  std::size_t state_limit = 0;
  bool schedule = false;
};

int cmd_opt(const OptArgs& a, Provenance prov) {
  const auto t0 = std::chrono::steady_clock::now();
  auto tree = load_tree(a.tree);
  auto trace = load_trace(a.trace, tree.get());
  tc_opt_config cfg;
  tc_opt_config_default(&cfg);
  cfg.alpha = a.alpha;
  cfg.k_opt = a.k_opt;
  cfg.state_limit = a.state_limit;
  cfg.keep_schedule = a.schedule ? 1 : 0;
  tc_opt_result* raw = nullptr;
  check(tc_opt_solve(tree.get(), trace.get(), &cfg, &raw), "opt");
  OptPtr res(raw);

  const long long cost = tc_opt_result_cost(res.get());
  std::cout << cost << '\n';
  json schedule = json::array();
  if (a.schedule) {
    const std::size_t rounds = tc_opt_result_schedule_length(res.get());
    for (std::size_t i = 0; i < rounds; ++i) {
      std::size_t len = 0;
      check(tc_opt_result_cache_at(res.get(), i, nullptr, 0, &len), "schedule");
      std::vector<uint32_t> ids(len);
      check(tc_opt_result_cache_at(res.get(), i, ids.data(), ids.size(), &len), "schedule");
      schedule.push_back(ids);
      std::cout << "round " << i + 1 << ": {";
      for (std::size_t j = 0; j < ids.size(); ++j) std::cout << (j ? "," : "") << ids[j];
      std::cout << "}\n";
    }
  }
  prov.flags = {{"tree", a.tree}, {"trace", a.trace}, {"alpha", a.alpha},
                {"k_opt", a.k_opt}, {"state_limit", a.state_limit}, {"schedule", a.schedule}};
  json rep = envelope("opt", prov, seconds_since(t0));
  rep["opt"] = {{"cost", cost}};
  if (a.schedule) rep["opt"]["schedule"] = schedule;
  write_json(a.report, rep);
  return 0;
}

struct RatioArgs {
  std::string tree, report;
  std::vector<std::string> traces;
  long long alpha = 2;
  std::size_t k_onl = 1;
  std::vector<std::size_t> k_opt{1};
  std::size_t state_limit = 0;
  unsigned jobs = 1;
};

json ratio_json(const tc_ratio_result& r) {
  auto num = [](double x) { return std::isfinite(x) ? json(x) : json("inf"); };
  return {{"tc_cost", r.tc_cost},       {"opt_cost", r.opt_cost},
          {"ratio", num(r.ratio)},      {"adjusted_ratio", num(r.adjusted_ratio)},
          {"additive_term", r.additive_term}, {"bound", num(r.bound)}};
}

int cmd_ratio(const RatioArgs& a, Provenance prov) {
  const auto t0 = std::chrono::steady_clock::now();
  auto tree = load_tree(a.tree);
  std::vector<TracePtr> traces;
  for (const auto& path : a.traces) traces.push_back(load_trace(path, tree.get()));

  // Independent (trace, k_opt) cells; each runs its own engine and solver.
  struct Cell {
    std::size_t trace = 0;
    std::size_t k_opt = 0;
    tc_ratio_result result{};
    tc_status status = TC_OK;
    std::string error;
    std::uint64_t estimate = 0;
  };
  std::vector<Cell> cells;
  for (std::size_t t = 0; t < traces.size(); ++t) {
    for (std::size_t k : a.k_opt) {
      Cell c;
      c.trace = t;
      c.k_opt = k;
      cells.push_back(std::move(c));
    }
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      Cell& c = cells[i];
      c.status = tc_competitive_ratio(tree.get(), traces[c.trace].get(), a.alpha, a.k_onl,
                                      c.k_opt, a.state_limit, &c.result);
      if (c.status != TC_OK) {
        c.error = tc_last_error();
        c.estimate = tc_last_error_estimate();
      }
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(a.jobs, cells.size()));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (const Cell& c : cells) {
    if (c.status != TC_OK) {
      std::string msg = "ratio (" + a.traces[c.trace] + ", k_opt=" + std::to_string(c.k_opt) +
                        "): " + c.error;
      if (c.estimate) msg += " (estimate " + std::to_string(c.estimate) + ")";
      throw Failure{c.status, msg};
    }
  }

  json rows = json::array();
  std::cout << std::left << std::setw(24) << "trace" << std::setw(7) << "k_opt" << std::setw(10)
            << "tc_cost" << std::setw(10) << "opt_cost" << std::setw(10) << "ratio"
            << std::setw(10) << "adjusted" << "bound\n";
  for (const Cell& c : cells) {
    json row = ratio_json(c.result);
    row["trace"] = a.traces[c.trace];
    row["k_onl"] = a.k_onl;
    row["k_opt"] = c.k_opt;
    rows.push_back(row);
    std::cout << std::setw(24) << a.traces[c.trace] << std::setw(7) << c.k_opt << std::setw(10)
              << c.result.tc_cost << std::setw(10) << c.result.opt_cost << std::setw(10)
              << fmt_ratio(c.result.ratio) << std::setw(10) << fmt_ratio(c.result.adjusted_ratio)
              << fmt_ratio(c.result.bound) << '\n';
  }
  prov.flags = {{"tree", a.tree}, {"traces", a.traces}, {"alpha", a.alpha}, {"k_onl", a.k_onl},
                {"k_opt", a.k_opt}, {"state_limit", a.state_limit}, {"jobs", a.jobs}};
  json rep = envelope("ratio", prov, seconds_since(t0));
  rep["cells"] = rows;
  write_json(a.report, rep);
  return 0;
}

struct VerifyArgs {
  std::string tree, trace, report;
  long long alpha = 2;
  std::size_t k = 1;
  std::string suite = "all";
};

int cmd_verify(const VerifyArgs& a, Provenance prov) {
  const auto t0 = std::chrono::steady_clock::now();
  unsigned suites = 0;
  if (a.suite == "lemma51") suites = TC_SUITE_LEMMA51;
  else if (a.suite == "fields") suites = TC_SUITE_FIELDS;
  else if (a.suite == "over-requested") suites = TC_SUITE_OVER_REQUESTED;
  else if (a.suite == "all") suites = TC_SUITE_ALL;
  else throw Failure{TC_ERR_INPUT, "unknown suite " + a.suite};
  auto tree = load_tree(a.tree);
  auto trace = load_trace(a.trace, tree.get());
  int passed = 0;
  char* raw = nullptr;
  check(tc_verify_json(tree.get(), trace.get(), a.alpha, a.k, suites, &passed, &raw), "verify");
  json v = json::parse(take_string(raw));

  std::cout << std::left << std::setw(46) << "check" << std::setw(10) << "checked"
            << std::setw(8) << "failed" << "result\n";
  for (const json& c : v["checks"]) {
    std::cout << std::setw(46) << c["name"].get<std::string>() << std::setw(10)
              << c["checked"].get<unsigned long long>() << std::setw(8)
              << c["failed"].get<unsigned long long>() << (c["passed"].get<bool>() ? "PASS" : "FAIL")
              << '\n';
    if (c.contains("first_counterexample")) {
      std::cout << "  first counterexample: " << c["first_counterexample"].get<std::string>()
                << '\n';
    }
  }
  if (v.contains("phases")) {
    std::cout << "\n" << std::setw(8) << "phase" << std::setw(10) << "end" << std::setw(10)
              << "kind" << std::setw(8) << "size" << std::setw(8) << "req" << "size*alpha\n";
    for (const json& p : v["phases"]) {
      for (const json& f : p["fields"]) {
        const long long size = f["size"].get<long long>();
        std::cout << std::setw(8) << p["phase"].get<long long>() << std::setw(10)
                  << f["end_time"].get<long long>() << std::setw(10)
                  << (f["kind"].get<std::string>() + (f["artificial"].get<bool>() ? "*" : ""))
                  << std::setw(8) << size << std::setw(8) << f["req"].get<long long>()
                  << size * a.alpha << '\n';
      }
    }
  }
  prov.flags = {{"tree", a.tree}, {"trace", a.trace}, {"alpha", a.alpha}, {"k", a.k},
                {"suite", a.suite}};
  json rep = envelope("verify", prov, seconds_since(t0));
  rep["verify"] = v;
  write_json(a.report, rep);
  std::cout << (passed ? "all checks passed" : "CHECKS FAILED") << '\n';
  return passed ? 0 : 1;
}

struct GenArgs {
  std::string kind, out_prefix, tree;
  std::size_t k = 2, chunks = 10, s = 2, ell = 1, prefixes = 16, lookups = 1000, length = 100;
  long long alpha = 2, stage4 = -1;
  double zipf_s = 1.0, update_rate = 0.0, bias = 0.9;
  std::uint64_t seed = 1;
};

int cmd_gen(const GenArgs& a, Provenance prov) {
  tc_tree* tree_raw = nullptr;
  tc_trace* trace_raw = nullptr;
  char* meta_raw = nullptr;
  TreePtr input;
  if (a.kind == "adversary") {
    check(tc_gen_adversary(a.k, a.alpha, a.chunks, &tree_raw, &trace_raw, &meta_raw), "gen");
    prov.flags = {{"k", a.k}, {"alpha", a.alpha}, {"chunks", a.chunks}};
  } else if (a.kind == "appendix-d") {
    check(tc_gen_appendix_d(a.s, a.ell, a.alpha, a.stage4, &tree_raw, &trace_raw, &meta_raw),
          "gen");
    prov.flags = {{"s", a.s}, {"ell", a.ell}, {"alpha", a.alpha}, {"stage4", a.stage4}};
  } else if (a.kind == "zipf-trie") {
    check(tc_gen_zipf_trie(a.prefixes, a.zipf_s, a.lookups, a.update_rate, a.seed, a.alpha,
                           &tree_raw, &trace_raw, &meta_raw),
          "gen");
    prov.flags = {{"prefixes", a.prefixes}, {"zipf_s", a.zipf_s},   {"lookups", a.lookups},
                  {"update_rate", a.update_rate}, {"seed", a.seed}, {"alpha", a.alpha}};
  } else if (a.kind == "uniform") {
    if (a.tree.empty()) throw Failure{TC_ERR_INPUT, "gen uniform needs --tree"};
    input = load_tree(a.tree);
    check(tc_gen_uniform(input.get(), a.length, a.bias, a.seed, a.alpha, a.k, &trace_raw), "gen");
    prov.flags = {{"tree", a.tree}, {"length", a.length}, {"bias", a.bias},
                  {"seed", a.seed}, {"alpha", a.alpha},   {"k", a.k}};
  } else {
    throw Failure{TC_ERR_INPUT, "unknown generator " + a.kind};
  }
  TreePtr tree(tree_raw);
  TracePtr trace(trace_raw);
  json meta = meta_raw ? json::parse(take_string(meta_raw)) : json{{"generator", a.kind}};
  if (a.kind == "uniform") meta["requests"] = tc_trace_length(trace.get());

  const tc_tree* out_tree = tree ? tree.get() : input.get();
  const std::string tree_path = a.out_prefix + ".tree";
  const std::string trace_path = a.out_prefix + ".trace";
  const std::string meta_path = a.out_prefix + ".json";
  check(tc_tree_save(out_tree, tree_path.c_str()), "writing tree");
  check(tc_trace_save(trace.get(), trace_path.c_str()), "writing trace");

  // No timings in generator metadata so identical flags give identical files.
  json doc = {{"schema_version", kSchemaVersion},
              {"command", "gen"},
              {"provenance", {{"tool", "treecache"}, {"library_version", tc_version()},
                              {"kind", a.kind}, {"flags", prov.flags}}},
              {"tree_file", tree_path},
              {"trace_file", trace_path},
              {"metadata", meta}};
  write_text(meta_path, doc.dump(2) + "\n");
  std::cout << "wrote " << tree_path << " (" << tc_tree_size(out_tree) << " nodes), " << trace_path
            << " (" << tc_trace_length(trace.get()) << " requests), " << meta_path << '\n';
  if (meta.contains("expected_fetch_round")) {
    std::cout << "expected_fetch_round " << meta["expected_fetch_round"] << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Provenance prov;
  prov.argv.assign(argv, argv + argc);

  CLI::App app{"Online tree caching: run, optimum, ratio, verification and workload generation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tc_version()));

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run TC over a trace and report costs");
  run_cmd->add_option("tree", run.tree, "Tree file")->required();
  run_cmd->add_option("trace", run.trace, "Trace file")->required();
  run_cmd->add_option("--alpha", run.alpha, "Fetch/evict cost per node")->check(CLI::PositiveNumber);
  run_cmd->add_option("--k", run.k, "Online cache capacity");
  run_cmd->add_option("--backend", run.backend, "naive | fast | both-checked");
  run_cmd->add_option("--assert", run.assert_level, "off | lemma51 | full");
  run_cmd->add_option("--report", run.report, "Write a JSON report here");
  run_cmd->add_flag("--steps", run.steps, "Include per-request step reports in the JSON");

  OptArgs opt;
  auto* opt_cmd = app.add_subcommand("opt", "Compute the offline optimum");
  opt_cmd->add_option("tree", opt.tree, "Tree file")->required();
  opt_cmd->add_option("trace", opt.trace, "Trace file")->required();
  opt_cmd->add_option("--alpha", opt.alpha, "Fetch/evict cost per node")->check(CLI::PositiveNumber);
  opt_cmd->add_option("--k-opt", opt.k_opt, "Offline cache capacity");
  opt_cmd->add_option("--state-limit", opt.state_limit, "Maximum number of cache states");
  opt_cmd->add_flag("--schedule", opt.schedule, "Print the optimal cache per round");
  opt_cmd->add_option("--report", opt.report, "Write a JSON report here");

  RatioArgs ratio;
  auto* ratio_cmd = app.add_subcommand("ratio", "Measure TC cost over the optimum");
  ratio_cmd->add_option("tree", ratio.tree, "Tree file")->required();
  ratio_cmd->add_option("traces", ratio.traces, "Trace files")->required();
  ratio_cmd->add_option("--alpha", ratio.alpha, "Fetch/evict cost per node")->check(CLI::PositiveNumber);
  ratio_cmd->add_option("--k-onl", ratio.k_onl, "Online cache capacity");
  ratio_cmd->add_option("--k-opt", ratio.k_opt, "Offline capacities (one cell per value)")
      ->delimiter(',');
  ratio_cmd->add_option("--state-limit", ratio.state_limit, "Maximum number of cache states");
  ratio_cmd->add_option("--jobs", ratio.jobs, "Parallel cells")->check(CLI::PositiveNumber);
  ratio_cmd->add_option("--report", ratio.report, "Write a JSON report here");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run invariant suites");
  verify_cmd->add_option("tree", verify.tree, "Tree file")->required();
  verify_cmd->add_option("trace", verify.trace, "Trace file")->required();
  verify_cmd->add_option("--alpha", verify.alpha, "Fetch/evict cost per node")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--k", verify.k, "Online cache capacity");
  verify_cmd->add_option("--suite", verify.suite, "lemma51 | fields | over-requested | all");
  verify_cmd->add_option("--report", verify.report, "Write a JSON report here");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a workload");
  gen_cmd->add_option("kind", gen.kind, "adversary | appendix-d | zipf-trie | uniform")->required();
  gen_cmd->add_option("--out-prefix", gen.out_prefix, "Output prefix for .tree/.trace/.json")
      ->required();
  gen_cmd->add_option("--k", gen.k, "adversary: online capacity; uniform: replay capacity");
  gen_cmd->add_option("--alpha", gen.alpha, "Fetch/evict cost per node")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--chunks", gen.chunks, "adversary: number of chunks");
  gen_cmd->add_option("--s", gen.s, "appendix-d: subtree size");
  gen_cmd->add_option("--ell", gen.ell, "appendix-d: leaves per subtree");
  gen_cmd->add_option("--stage4", gen.stage4, "appendix-d: stage-4 count (default s*alpha-1)");
  gen_cmd->add_option("--prefixes", gen.prefixes, "zipf-trie: number of prefixes (leaves)");
  gen_cmd->add_option("--zipf-s", gen.zipf_s, "zipf-trie: Zipf exponent");
  gen_cmd->add_option("--lookups", gen.lookups, "zipf-trie: number of lookups");
  gen_cmd->add_option("--update-rate", gen.update_rate, "zipf-trie: update probability per event");
  gen_cmd->add_option("--tree", gen.tree, "uniform: tree file");
  gen_cmd->add_option("--length", gen.length, "uniform: trace length");
  gen_cmd->add_option("--bias", gen.bias, "uniform: probability a request is chargeable");
  gen_cmd->add_option("--seed", gen.seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*run_cmd) return cmd_run(run, prov);
    if (*opt_cmd) return cmd_opt(opt, prov);
    if (*ratio_cmd) return cmd_ratio(ratio, prov);
    if (*verify_cmd) return cmd_verify(verify, prov);
    if (*gen_cmd) return cmd_gen(gen, prov);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return static_cast<int>(f.status);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
