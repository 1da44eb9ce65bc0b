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

#include "treecache/treecache.h"

#include <cstring>
#include <limits>
#include <new>
#include <sstream>

#include "report.hpp"
#include "treecache/engine.hpp"
#include "treecache/io.hpp"
#include "treecache/opt.hpp"
#include "treecache/workloads.hpp"

using namespace treecache;

struct tc_tree {
  std::shared_ptr<const TreeTopology> topo;
};

struct tc_trace {
  Trace requests;
};

struct tc_engine {
  Engine engine;
  std::optional<StepReport> last;
};

struct tc_opt_result {
  OptSolution solution;
};

namespace {

thread_local std::string g_error;
thread_local std::uint64_t g_estimate = 0;

tc_status fail(tc_status s, const std::string& msg, std::uint64_t estimate = 0) {
  g_error = msg;
  g_estimate = estimate;
  return s;
}

// Maps library exceptions onto status codes.
template <typename F>
tc_status guarded(F&& f) {
  try {
    g_error.clear();
    g_estimate = 0;
    f();
    return TC_OK;
  } catch (const SizeLimit& e) {
    return fail(TC_ERR_RESOURCE, e.what(), e.estimate());
  } catch (const InvariantViolation& e) {
    std::string msg = e.what();
    if (e.round() != 0) msg = "round " + std::to_string(e.round()) + ": " + msg;
    if (!e.changeset().empty()) msg += " (changeset " + NodeSet(e.changeset()).to_string() + ")";
    return fail(TC_ERR_INTERNAL, msg);
  } catch (const InvalidInput& e) {
    return fail(TC_ERR_INPUT, e.what());
  } catch (const ContractViolation& e) {
    return fail(TC_ERR_INPUT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(TC_ERR_RESOURCE, "out of memory");
  } catch (const std::exception& e) {
    return fail(TC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(TC_ERR_INTERNAL, "unknown error");
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw InvalidInput(std::string(what) + " must not be null");
}

Sign to_sign(int s) {
  if (s == TC_POSITIVE) return Sign::kPositive;
  if (s == TC_NEGATIVE) return Sign::kNegative;
  throw InvalidInput("sign must be +1 or -1, got " + std::to_string(s));
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void copy_ids(const std::vector<NodeId>& ids, uint32_t* buf, size_t capacity, size_t* len) {
  require(len, "len");
  *len = ids.size();
  if (buf != nullptr) std::copy_n(ids.begin(), std::min(capacity, ids.size()), buf);
}

EngineConfig engine_config(const tc_engine_config* c) {
  require(c, "config");
  if (c->alpha < 1) throw InvalidInput("alpha must be >= 1");
  EngineConfig out;
  out.alpha = c->alpha;
  out.k_onl = c->k_onl;
  switch (c->backend) {
    case TC_BACKEND_NAIVE: out.backend = Backend::kNaive; break;
    case TC_BACKEND_FAST: out.backend = Backend::kFast; break;
    case TC_BACKEND_BOTH: out.backend = Backend::kBothChecked; break;
    default: throw InvalidInput("unknown backend");
  }
  switch (c->assert_level) {
    case TC_ASSERT_OFF: out.assert_level = AssertLevel::kOff; break;
    case TC_ASSERT_LEMMA51: out.assert_level = AssertLevel::kLemma51; break;
    case TC_ASSERT_FULL: out.assert_level = AssertLevel::kFull; break;
    default: throw InvalidInput("unknown assert level");
  }
  return out;
}

void emit_workload(Workload&& w, tc_tree** tree, tc_trace** trace) {
  require(tree, "tree");
  require(trace, "trace");
  auto t = std::make_unique<tc_tree>(tc_tree{std::move(w.topo)});
  auto r = std::make_unique<tc_trace>(tc_trace{std::move(w.trace)});
  *tree = t.release();
  *trace = r.release();
}

}  // namespace

extern "C" {

const char* tc_version(void) { return "1.0.0"; }
const char* tc_last_error(void) { return g_error.c_str(); }
uint64_t tc_last_error_estimate(void) { return g_estimate; }
void tc_string_free(char* s) { std::free(s); }

// ---------------------------------------------------------------------------
// Trees

tc_status tc_tree_load(const char* path, tc_tree** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new tc_tree{std::make_shared<const TreeTopology>(load_tree_file(path))};
  });
}

tc_status tc_tree_parse(const char* text, tc_tree** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    std::istringstream in(text);
    *out = new tc_tree{std::make_shared<const TreeTopology>(parse_tree(in))};
  });
}

tc_status tc_tree_from_parents(const int64_t* parents, size_t n, tc_tree** out) {
  return guarded([&] {
    require(parents, "parents");
    require(out, "out");
    *out = new tc_tree{std::make_shared<const TreeTopology>(
        TreeTopology::from_parents(std::span<const std::int64_t>(parents, n)))};
  });
}

tc_status tc_tree_save(const tc_tree* tree, const char* path) {
  return guarded([&] {
    require(tree, "tree");
    require(path, "path");
    write_text_file(path, format_tree(*tree->topo));
  });
}

size_t tc_tree_size(const tc_tree* tree) { return tree ? tree->topo->size() : 0; }
uint32_t tc_tree_height(const tc_tree* tree) { return tree ? tree->topo->height() : 0; }
uint32_t tc_tree_max_degree(const tc_tree* tree) { return tree ? tree->topo->max_degree() : 0; }

tc_status tc_tree_parent(const tc_tree* tree, uint32_t node, int64_t* parent) {
  return guarded([&] {
    require(tree, "tree");
    require(parent, "parent");
    tree->topo->check_node(node);
    const NodeId p = tree->topo->parent(node);
    *parent = p == kNoNode ? -1 : static_cast<int64_t>(p);
  });
}

void tc_tree_free(tc_tree* tree) { delete tree; }

// ---------------------------------------------------------------------------
// Traces

tc_status tc_trace_load(const char* path, const tc_tree* tree, tc_trace** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new tc_trace{load_trace_file(path, tree ? tree->topo.get() : nullptr)};
  });
}

tc_status tc_trace_parse(const char* text, const tc_tree* tree, tc_trace** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    std::istringstream in(text);
    *out = new tc_trace{parse_trace(in, "<trace>", tree ? tree->topo.get() : nullptr)};
  });
}

tc_status tc_trace_create(const uint32_t* nodes, const int8_t* signs, size_t n, tc_trace** out) {
  return guarded([&] {
    require(out, "out");
    if (n > 0) {
      require(nodes, "nodes");
      require(signs, "signs");
    }
    Trace t;
    t.reserve(n);
    for (size_t i = 0; i < n; ++i) t.push_back({nodes[i], to_sign(signs[i])});
    *out = new tc_trace{std::move(t)};
  });
}

tc_status tc_trace_save(const tc_trace* trace, const char* path) {
  return guarded([&] {
    require(trace, "trace");
    require(path, "path");
    write_text_file(path, format_trace(trace->requests));
  });
}

size_t tc_trace_length(const tc_trace* trace) { return trace ? trace->requests.size() : 0; }

tc_status tc_trace_get(const tc_trace* trace, size_t index, uint32_t* node, int* sign) {
  return guarded([&] {
    require(trace, "trace");
    if (index >= trace->requests.size()) throw InvalidInput("trace index out of range");
    const Request& r = trace->requests[index];
    if (node) *node = r.node;
    if (sign) *sign = r.sign == Sign::kPositive ? TC_POSITIVE : TC_NEGATIVE;
  });
}

void tc_trace_free(tc_trace* trace) { delete trace; }

// ---------------------------------------------------------------------------
// Engine

void tc_engine_config_default(tc_engine_config* config) {
  if (config == nullptr) return;
  config->alpha = 2;
  config->k_onl = 1;
  config->backend = TC_BACKEND_FAST;
  config->assert_level = TC_ASSERT_LEMMA51;
}

tc_status tc_engine_create(const tc_tree* tree, const tc_engine_config* config, tc_engine** out) {
  return guarded([&] {
    require(tree, "tree");
    require(out, "out");
    *out = new tc_engine{Engine(tree->topo, engine_config(config)), std::nullopt};
  });
}

tc_status tc_engine_process(tc_engine* engine, uint32_t node, int sign, tc_step* step) {
  return guarded([&] {
    require(engine, "engine");
    const StepReport s = engine->engine.process_request({node, to_sign(sign)});
    if (step != nullptr) {
      *step = tc_step{};
      step->round = s.round;
      step->charged = s.charged ? 1 : 0;
      if (s.applied) {
        step->applied_sign = s.applied->sign == Sign::kPositive ? TC_POSITIVE : TC_NEGATIVE;
        step->applied_size = s.applied->nodes.size();
      }
      step->phase_ended = s.phase_ended ? 1 : 0;
      step->k_p_at_end = s.k_p_at_end.value_or(0);
      step->overflow_size = s.overflow_fetch ? s.overflow_fetch->size() : 0;
      step->final_evicted = s.final_evicted;
      step->ops = engine->engine.last_decision_ops();
    }
    engine->last = s;
  });
}

tc_status tc_engine_run(tc_engine* engine, const tc_trace* trace) {
  return guarded([&] {
    require(engine, "engine");
    require(trace, "trace");
    for (const Request& r : trace->requests) engine->last = engine->engine.process_request(r);
  });
}

tc_status tc_engine_last_changeset(const tc_engine* engine, uint32_t* buf, size_t capacity,
                                   size_t* len) {
  return guarded([&] {
    require(engine, "engine");
    std::vector<NodeId> ids;
    if (engine->last) {
      if (engine->last->applied) ids = engine->last->applied->nodes.ids();
      if (engine->last->overflow_fetch) ids = engine->last->overflow_fetch->ids();
    }
    copy_ids(ids, buf, capacity, len);
  });
}

tc_status tc_engine_cache(const tc_engine* engine, uint32_t* buf, size_t capacity, size_t* len) {
  return guarded([&] {
    require(engine, "engine");
    copy_ids(engine->engine.cache().ids(), buf, capacity, len);
  });
}

tc_status tc_engine_counter(const tc_engine* engine, uint32_t node, int64_t* counter) {
  return guarded([&] {
    require(engine, "engine");
    require(counter, "counter");
    engine->engine.topology().check_node(node);
    *counter = engine->engine.counter(node);
  });
}

tc_status tc_engine_ledger(const tc_engine* engine, tc_ledger* out) {
  return guarded([&] {
    require(engine, "engine");
    require(out, "out");
    const CostLedger& l = engine->engine.ledger();
    *out = tc_ledger{l.serve_cost, l.move_cost, l.total(), l.phases.size()};
  });
}

tc_status tc_engine_phase(const tc_engine* engine, size_t index, tc_phase* out) {
  return guarded([&] {
    require(engine, "engine");
    require(out, "out");
    const auto& phases = engine->engine.ledger().phases;
    if (index >= phases.size()) throw InvalidInput("phase index out of range");
    const PhaseCost& p = phases[index];
    *out = tc_phase{p.phase_index, p.begin_round, p.end_round, p.serve,
                    p.move,        p.k_p,         p.finished ? 1 : 0};
  });
}

uint64_t tc_engine_round(const tc_engine* engine) { return engine ? engine->engine.round() : 0; }
void tc_engine_free(tc_engine* engine) { delete engine; }

tc_status tc_run_report_json(const tc_tree* tree, const tc_trace* trace,
                             const tc_engine_config* config, int include_steps, char** json_out) {
  return guarded([&] {
    require(tree, "tree");
    require(trace, "trace");
    require(json_out, "json_out");
    const auto j =
        report::run_report(tree->topo, engine_config(config), trace->requests, include_steps != 0);
    *json_out = dup_string(j.dump());
  });
}

// ---------------------------------------------------------------------------
// Offline optimum

void tc_opt_config_default(tc_opt_config* config) {
  if (config == nullptr) return;
  config->alpha = 2;
  config->k_opt = 1;
  config->state_limit = kDefaultStateLimit;
  config->allow_time_zero_reorg = 1;
  config->keep_schedule = 1;
}

tc_status tc_opt_solve(const tc_tree* tree, const tc_trace* trace, const tc_opt_config* config,
                       tc_opt_result** out) {
  return guarded([&] {
    require(tree, "tree");
    require(trace, "trace");
    require(config, "config");
    require(out, "out");
    if (config->alpha < 1) throw InvalidInput("alpha must be >= 1");
    OptConfig c;
    c.alpha = config->alpha;
    c.k_opt = config->k_opt;
    c.state_limit = config->state_limit == 0 ? kDefaultStateLimit : config->state_limit;
    c.allow_time_zero_reorg = config->allow_time_zero_reorg != 0;
    c.keep_schedule = config->keep_schedule != 0;
    *out = new tc_opt_result{optimal_cost(*tree->topo, c, trace->requests)};
  });
}

int64_t tc_opt_result_cost(const tc_opt_result* result) {
  return result ? result->solution.total_cost : 0;
}

size_t tc_opt_result_schedule_length(const tc_opt_result* result) {
  return result ? result->solution.schedule.size() : 0;
}

tc_status tc_opt_result_cache_at(const tc_opt_result* result, size_t round_index, uint32_t* buf,
                                 size_t capacity, size_t* len) {
  return guarded([&] {
    require(result, "result");
    if (round_index >= result->solution.schedule.size()) {
      throw InvalidInput("schedule index out of range");
    }
    copy_ids(result->solution.schedule[round_index].ids(), buf, capacity, len);
  });
}

void tc_opt_result_free(tc_opt_result* result) { delete result; }

tc_status tc_count_subforests(const tc_tree* tree, size_t k, uint64_t cap, uint64_t* out) {
  return guarded([&] {
    require(tree, "tree");
    require(out, "out");
    *out = count_subforests(*tree->topo, k, cap);
  });
}

tc_status tc_competitive_ratio(const tc_tree* tree, const tc_trace* trace, int64_t alpha,
                               size_t k_onl, size_t k_opt, size_t state_limit,
                               tc_ratio_result* out) {
  return guarded([&] {
    require(tree, "tree");
    require(trace, "trace");
    require(out, "out");
    if (alpha < 1) throw InvalidInput("alpha must be >= 1");
    const RatioResult r =
        competitive_ratio(*tree->topo, trace->requests, alpha, k_onl, k_opt,
                          state_limit == 0 ? kDefaultStateLimit : state_limit);
    *out = tc_ratio_result{r.tc_cost,        r.opt_cost,      r.ratio,
                           r.adjusted_ratio, r.additive_term, r.bound};
  });
}

// ---------------------------------------------------------------------------
// Invariant suites

tc_status tc_verify_json(const tc_tree* tree, const tc_trace* trace, int64_t alpha, size_t k,
                         unsigned suites, int* passed, char** json_out) {
  return guarded([&] {
    require(tree, "tree");
    require(trace, "trace");
    if (alpha < 1) throw InvalidInput("alpha must be >= 1");
    if (suites == 0 || (suites & ~TC_SUITE_ALL) != 0) throw InvalidInput("bad suite selection");
    EngineConfig c;
    c.alpha = alpha;
    c.k_onl = k;
    const report::VerifySuites sel{(suites & TC_SUITE_LEMMA51) != 0,
                                   (suites & TC_SUITE_FIELDS) != 0,
                                   (suites & TC_SUITE_OVER_REQUESTED) != 0};
    const auto j = report::verify_report(tree->topo, c, trace->requests, sel);
    if (passed) *passed = j["passed"].get<bool>() ? 1 : 0;
    if (json_out) *json_out = dup_string(j.dump());
  });
}

// ---------------------------------------------------------------------------
// Generators

tc_status tc_gen_adversary(size_t k_onl, int64_t alpha, size_t chunks, tc_tree** tree,
                           tc_trace** trace, char** meta_json) {
  return guarded([&] {
    Workload w = gen_adversary_paging(k_onl, alpha, chunks);
    const report::json meta = {{"generator", "adversary"},
                               {"k_onl", k_onl},
                               {"alpha", alpha},
                               {"chunks", chunks},
                               {"requests", w.trace.size()},
                               {"chunk_bounds", report::chunks_json(w.chunks)}};
    if (meta_json) *meta_json = dup_string(meta.dump());
    emit_workload(std::move(w), tree, trace);
  });
}

tc_status tc_gen_appendix_d(size_t s, size_t ell, int64_t alpha, int64_t stage4_count,
                            tc_tree** tree, tc_trace** trace, char** meta_json) {
  return guarded([&] {
    AppendixDParams p{s, ell, alpha, std::nullopt};
    if (stage4_count >= 0) p.stage4_count = stage4_count;
    AppendixDWorkload w = gen_appendix_d(p);
    const report::json meta = {
        {"generator", "appendix-d"},
        {"s", s},
        {"ell", ell},
        {"alpha", alpha},
        {"stage4_count", p.stage4_count.value_or(static_cast<int64_t>(s) * alpha - 1)},
        {"k_onl", w.k_onl},
        {"root", w.root},
        {"t1_root", w.t1_root},
        {"t2_root", w.t2_root},
        {"t1", report::to_json(w.t1)},
        {"t2", report::to_json(w.t2)},
        {"stage_begin", w.stage_begin},
        {"expected_fetch_round", w.expected_fetch_round},
        {"full_tree_fetch", w.full_tree_fetch},
        {"requests", w.trace.size()}};
    if (meta_json) *meta_json = dup_string(meta.dump());
    emit_workload(std::move(w), tree, trace);
  });
}

tc_status tc_gen_zipf_trie(size_t num_prefixes, double zipf_s, size_t lookups, double update_rate,
                           uint64_t seed, int64_t alpha, tc_tree** tree, tc_trace** trace,
                           char** meta_json) {
  return guarded([&] {
    const ZipfTrieParams p{num_prefixes, zipf_s, lookups, update_rate, seed, alpha};
    Workload w = gen_zipf_trie(p);
    const report::json meta = {{"generator", "zipf-trie"},
                               {"num_prefixes", num_prefixes},
                               {"zipf_s", zipf_s},
                               {"lookups", lookups},
                               {"update_rate", update_rate},
                               {"seed", seed},
                               {"alpha", alpha},
                               {"nodes", w.topo->size()},
                               {"requests", w.trace.size()},
                               {"leaf_ranking", zipf_trie_leaf_ranking(p)},
                               {"chunk_bounds", report::chunks_json(w.chunks)}};
    if (meta_json) *meta_json = dup_string(meta.dump());
    emit_workload(std::move(w), tree, trace);
  });
}

tc_status tc_gen_uniform(const tc_tree* tree, size_t length, double positive_bias, uint64_t seed,
                         int64_t alpha, size_t k, tc_trace** trace) {
  return guarded([&] {
    require(tree, "tree");
    require(trace, "trace");
    *trace = new tc_trace{
        gen_uniform_random(*tree->topo, UniformParams{length, positive_bias, seed, alpha, k})};
  });
}

tc_status tc_gen_random_tree(size_t n, uint64_t seed, tc_tree** tree) {
  return guarded([&] {
    require(tree, "tree");
    *tree = new tc_tree{std::make_shared<const TreeTopology>(random_tree(n, seed))};
  });
}

}  // extern "C"
