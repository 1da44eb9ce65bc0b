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

/**
 * @file treecache.h
 * @brief C interface of the tree-caching library.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every fallible call returns a tc_status; on failure tc_last_error() holds a
 * message for the calling thread. Strings returned through char** are
 * allocated by the library and released with tc_string_free.
 */

#ifndef TREECACHE_TREECACHE_H_
#define TREECACHE_TREECACHE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(TREECACHE_BUILDING_LIBRARY)
#define TC_API __declspec(dllexport)
#else
#define TC_API __declspec(dllimport)
#endif
#else
#define TC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tc_status {
  TC_OK = 0,
  TC_ERR_INTERNAL = 1, /* invariant or assertion failure */
  TC_ERR_INPUT = 2,    /* malformed file, bad parameter, broken precondition */
  TC_ERR_RESOURCE = 3  /* size guard or allocation failure */
} tc_status;

typedef enum tc_backend { TC_BACKEND_NAIVE = 0, TC_BACKEND_FAST = 1, TC_BACKEND_BOTH = 2 } tc_backend;

typedef enum tc_assert_level {
  TC_ASSERT_OFF = 0,
  TC_ASSERT_LEMMA51 = 1,
  TC_ASSERT_FULL = 2
} tc_assert_level;

/* Request signs. */
#define TC_POSITIVE 1
#define TC_NEGATIVE (-1)

typedef struct tc_tree tc_tree;
typedef struct tc_trace tc_trace;
typedef struct tc_engine tc_engine;
typedef struct tc_opt_result tc_opt_result;

TC_API const char* tc_version(void);
/* Message of the last failed call on this thread; empty if none. */
TC_API const char* tc_last_error(void);
/* For TC_ERR_RESOURCE from a size guard: the estimate that tripped it, else 0. */
TC_API uint64_t tc_last_error_estimate(void);
TC_API void tc_string_free(char* s);

/* ---- Trees ---- */

TC_API tc_status tc_tree_load(const char* path, tc_tree** out);
TC_API tc_status tc_tree_parse(const char* text, tc_tree** out);
/* parents[i] is the parent of node i, -1 for the root. */
TC_API tc_status tc_tree_from_parents(const int64_t* parents, size_t n, tc_tree** out);
TC_API tc_status tc_tree_save(const tc_tree* tree, const char* path);
TC_API size_t tc_tree_size(const tc_tree* tree);
TC_API uint32_t tc_tree_height(const tc_tree* tree);
TC_API uint32_t tc_tree_max_degree(const tc_tree* tree);
TC_API tc_status tc_tree_parent(const tc_tree* tree, uint32_t node, int64_t* parent);
TC_API void tc_tree_free(tc_tree* tree);

/* ---- Traces ---- */

/* tree may be NULL; when given, node ids are range-checked. */
TC_API tc_status tc_trace_load(const char* path, const tc_tree* tree, tc_trace** out);
TC_API tc_status tc_trace_parse(const char* text, const tc_tree* tree, tc_trace** out);
TC_API tc_status tc_trace_create(const uint32_t* nodes, const int8_t* signs, size_t n,
                                 tc_trace** out);
TC_API tc_status tc_trace_save(const tc_trace* trace, const char* path);
TC_API size_t tc_trace_length(const tc_trace* trace);
TC_API tc_status tc_trace_get(const tc_trace* trace, size_t index, uint32_t* node, int* sign);
TC_API void tc_trace_free(tc_trace* trace);

/* ---- Engine ---- */

typedef struct tc_engine_config {
  int64_t alpha;
  size_t k_onl;
  tc_backend backend;
  tc_assert_level assert_level;
} tc_engine_config;

typedef struct tc_step {
  uint64_t round;
  int charged;
  int applied_sign;   /* TC_POSITIVE, TC_NEGATIVE, or 0 when nothing was applied */
  size_t applied_size;
  int phase_ended;
  size_t k_p_at_end;  /* valid when phase_ended */
  size_t overflow_size;
  size_t final_evicted;
  uint64_t ops;       /* index operations spent on this request */
} tc_step;

typedef struct tc_ledger {
  int64_t serve_cost;
  int64_t move_cost;
  int64_t total;
  size_t phases;
} tc_ledger;

typedef struct tc_phase {
  uint64_t phase_index;
  uint64_t begin_round;
  uint64_t end_round;
  int64_t serve;
  int64_t move;
  size_t k_p;
  int finished;
} tc_phase;

TC_API void tc_engine_config_default(tc_engine_config* config);
TC_API tc_status tc_engine_create(const tc_tree* tree, const tc_engine_config* config,
                                  tc_engine** out);
/* step may be NULL. */
TC_API tc_status tc_engine_process(tc_engine* engine, uint32_t node, int sign, tc_step* step);
TC_API tc_status tc_engine_run(tc_engine* engine, const tc_trace* trace);
/* Nodes of the changeset applied (or overflowing) at the last request. Copies at most
   capacity ids and stores the full count in *len. */
TC_API tc_status tc_engine_last_changeset(const tc_engine* engine, uint32_t* buf, size_t capacity,
                                          size_t* len);
TC_API tc_status tc_engine_cache(const tc_engine* engine, uint32_t* buf, size_t capacity,
                                 size_t* len);
TC_API tc_status tc_engine_counter(const tc_engine* engine, uint32_t node, int64_t* counter);
TC_API tc_status tc_engine_ledger(const tc_engine* engine, tc_ledger* out);
TC_API tc_status tc_engine_phase(const tc_engine* engine, size_t index, tc_phase* out);
TC_API uint64_t tc_engine_round(const tc_engine* engine);
TC_API void tc_engine_free(tc_engine* engine);

/* Runs a fresh engine over the trace and returns a JSON summary. Backend "both"
   adds "backends_agree": true; disagreement is reported as TC_ERR_INTERNAL. */
TC_API tc_status tc_run_report_json(const tc_tree* tree, const tc_trace* trace,
                                    const tc_engine_config* config, int include_steps,
                                    char** json_out);

/* ---- Offline optimum ---- */

typedef struct tc_opt_config {
  int64_t alpha;
  size_t k_opt;
  size_t state_limit;  /* 0 selects the default */
  int allow_time_zero_reorg;
  int keep_schedule;
} tc_opt_config;

TC_API void tc_opt_config_default(tc_opt_config* config);
TC_API tc_status tc_opt_solve(const tc_tree* tree, const tc_trace* trace,
                              const tc_opt_config* config, tc_opt_result** out);
TC_API int64_t tc_opt_result_cost(const tc_opt_result* result);
/* Number of rounds in the kept schedule (0 when not kept). */
TC_API size_t tc_opt_result_schedule_length(const tc_opt_result* result);
TC_API tc_status tc_opt_result_cache_at(const tc_opt_result* result, size_t round_index,
                                        uint32_t* buf, size_t capacity, size_t* len);
TC_API void tc_opt_result_free(tc_opt_result* result);
TC_API tc_status tc_count_subforests(const tc_tree* tree, size_t k, uint64_t cap, uint64_t* out);

typedef struct tc_ratio_result {
  int64_t tc_cost;
  int64_t opt_cost;
  double ratio;          /* +inf when OPT is 0 and TC is not */
  double adjusted_ratio;
  int64_t additive_term;
  double bound;
} tc_ratio_result;

TC_API tc_status tc_competitive_ratio(const tc_tree* tree, const tc_trace* trace, int64_t alpha,
                                      size_t k_onl, size_t k_opt, size_t state_limit,
                                      tc_ratio_result* out);

/* ---- Invariant suites ---- */

#define TC_SUITE_LEMMA51 1u
#define TC_SUITE_FIELDS 2u
#define TC_SUITE_OVER_REQUESTED 4u
#define TC_SUITE_ALL 7u

/* *passed is 1 iff every selected check passed. */
TC_API tc_status tc_verify_json(const tc_tree* tree, const tc_trace* trace, int64_t alpha,
                                size_t k, unsigned suites, int* passed, char** json_out);

/* ---- Generators ----
   meta_json (may be NULL) receives generator parameters and chunk boundaries. */

TC_API tc_status tc_gen_adversary(size_t k_onl, int64_t alpha, size_t chunks, tc_tree** tree,
                                  tc_trace** trace, char** meta_json);
/* stage4_count < 0 selects the default s * alpha - 1. */
TC_API tc_status tc_gen_appendix_d(size_t s, size_t ell, int64_t alpha, int64_t stage4_count,
                                   tc_tree** tree, tc_trace** trace, char** meta_json);
TC_API tc_status tc_gen_zipf_trie(size_t num_prefixes, double zipf_s, size_t lookups,
                                  double update_rate, uint64_t seed, int64_t alpha,
                                  tc_tree** tree, tc_trace** trace, char** meta_json);
/* k = 0 replays with capacity |T|. */
TC_API tc_status tc_gen_uniform(const tc_tree* tree, size_t length, double positive_bias,
                                uint64_t seed, int64_t alpha, size_t k, tc_trace** trace);
TC_API tc_status tc_gen_random_tree(size_t n, uint64_t seed, tc_tree** tree);

#ifdef __cplusplus
}
#endif

#endif /* TREECACHE_TREECACHE_H_ */
