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

// Exercises the shared library through its C header only.

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "treecache/treecache.h"

namespace {

using json = nlohmann::json;

struct Free {
  void operator()(tc_tree* p) const { tc_tree_free(p); }
  void operator()(tc_trace* p) const { tc_trace_free(p); }
  void operator()(tc_engine* p) const { tc_engine_free(p); }
  void operator()(tc_opt_result* p) const { tc_opt_result_free(p); }
  void operator()(char* p) const { tc_string_free(p); }
};
template <typename T>
using Owned = std::unique_ptr<T, Free>;

Owned<tc_tree> parse_tree(const char* text) {
  tc_tree* t = nullptr;
  EXPECT_EQ(tc_tree_parse(text, &t), TC_OK) << tc_last_error();
  return Owned<tc_tree>(t);
}

Owned<tc_trace> parse_trace(const char* text, const tc_tree* tree) {
  tc_trace* t = nullptr;
  EXPECT_EQ(tc_trace_parse(text, tree, &t), TC_OK) << tc_last_error();
  return Owned<tc_trace>(t);
}

json take_json(char* s) {
  Owned<char> owned(s);
  return json::parse(s);
}

Owned<tc_tree> path3() {
  const int64_t parents[] = {-1, 0, 1};
  tc_tree* t = nullptr;
  EXPECT_EQ(tc_tree_from_parents(parents, 3, &t), TC_OK);
  return Owned<tc_tree>(t);
}

tc_engine_config config(int64_t alpha, size_t k) {
  tc_engine_config c;
  tc_engine_config_default(&c);
  c.alpha = alpha;
  c.k_onl = k;
  return c;
}

TEST(CApi, Version) { EXPECT_STREQ(tc_version(), "1.0.0"); }

TEST(CApi, TreeAccessors) {
  auto t = path3();
  EXPECT_EQ(tc_tree_size(t.get()), 3u);
  EXPECT_EQ(tc_tree_height(t.get()), 3u);
  EXPECT_EQ(tc_tree_max_degree(t.get()), 1u);
  int64_t p = 0;
  EXPECT_EQ(tc_tree_parent(t.get(), 2, &p), TC_OK);
  EXPECT_EQ(p, 1);
  EXPECT_EQ(tc_tree_parent(t.get(), 0, &p), TC_OK);
  EXPECT_EQ(p, -1);
  EXPECT_EQ(tc_tree_parent(t.get(), 3, &p), TC_ERR_INPUT);
}

TEST(CApi, InputErrors) {
  tc_tree* t = nullptr;
  const int64_t bad[] = {-1, 5};
  EXPECT_EQ(tc_tree_from_parents(bad, 2, &t), TC_ERR_INPUT);
  EXPECT_NE(std::string(tc_last_error()), "");
  EXPECT_EQ(t, nullptr);
  EXPECT_EQ(tc_tree_load("/nonexistent/x.tree", &t), TC_ERR_INPUT);
  auto tree = path3();
  tc_trace* tr = nullptr;
  EXPECT_EQ(tc_trace_parse("+7\n", tree.get(), &tr), TC_ERR_INPUT);
  EXPECT_EQ(tc_trace_parse("*1\n", nullptr, &tr), TC_ERR_INPUT);
  EXPECT_EQ(tc_tree_parse(nullptr, &t), TC_ERR_INPUT);
  tc_engine* e = nullptr;
  tc_engine_config c = config(0, 1);
  EXPECT_EQ(tc_engine_create(tree.get(), &c, &e), TC_ERR_INPUT);
}

TEST(CApi, TraceRoundTrip) {
  const uint32_t nodes[] = {2, 1};
  const int8_t signs[] = {TC_POSITIVE, TC_NEGATIVE};
  tc_trace* raw = nullptr;
  ASSERT_EQ(tc_trace_create(nodes, signs, 2, &raw), TC_OK);
  Owned<tc_trace> tr(raw);
  const std::string path = ::testing::TempDir() + "capi_roundtrip.trace";
  ASSERT_EQ(tc_trace_save(tr.get(), path.c_str()), TC_OK);
  tc_trace* back = nullptr;
  ASSERT_EQ(tc_trace_load(path.c_str(), nullptr, &back), TC_OK);
  Owned<tc_trace> loaded(back);
  ASSERT_EQ(tc_trace_length(loaded.get()), 2u);
  uint32_t v = 0;
  int s = 0;
  ASSERT_EQ(tc_trace_get(loaded.get(), 1, &v, &s), TC_OK);
  EXPECT_EQ(v, 1u);
  EXPECT_EQ(s, TC_NEGATIVE);
  EXPECT_EQ(tc_trace_get(loaded.get(), 2, &v, &s), TC_ERR_INPUT);
  std::remove(path.c_str());
}

TEST(CApi, EngineStepsOnPath) {
  auto tree = path3();
  tc_engine_config c = config(2, 3);
  tc_engine* raw = nullptr;
  ASSERT_EQ(tc_engine_create(tree.get(), &c, &raw), TC_OK);
  Owned<tc_engine> e(raw);
  tc_step st;
  ASSERT_EQ(tc_engine_process(e.get(), 2, TC_POSITIVE, &st), TC_OK);
  EXPECT_EQ(st.round, 1u);
  EXPECT_EQ(st.charged, 1);
  EXPECT_EQ(st.applied_sign, 0);
  ASSERT_EQ(tc_engine_process(e.get(), 2, TC_POSITIVE, &st), TC_OK);
  EXPECT_EQ(st.applied_sign, TC_POSITIVE);
  EXPECT_EQ(st.applied_size, 1u);
  uint32_t buf[3];
  size_t len = 0;
  ASSERT_EQ(tc_engine_last_changeset(e.get(), buf, 3, &len), TC_OK);
  ASSERT_EQ(len, 1u);
  EXPECT_EQ(buf[0], 2u);
  ASSERT_EQ(tc_engine_cache(e.get(), nullptr, 0, &len), TC_OK);
  EXPECT_EQ(len, 1u);
  int64_t cnt = -1;
  ASSERT_EQ(tc_engine_counter(e.get(), 2, &cnt), TC_OK);
  EXPECT_EQ(cnt, 0);
  tc_ledger l;
  ASSERT_EQ(tc_engine_ledger(e.get(), &l), TC_OK);
  EXPECT_EQ(l.serve_cost, 2);
  EXPECT_EQ(l.move_cost, 2);
  EXPECT_EQ(l.total, 4);
  EXPECT_EQ(l.phases, 1u);
  EXPECT_EQ(tc_engine_round(e.get()), 2u);
  EXPECT_EQ(tc_engine_process(e.get(), 2, 0, nullptr), TC_ERR_INPUT);
  EXPECT_EQ(tc_engine_process(e.get(), 9, TC_POSITIVE, nullptr), TC_ERR_INPUT);
}

TEST(CApi, FinalEvictionOnStar) {
  auto tree = parse_tree("3\n-1\n0\n0\n");
  auto trace = parse_trace("+1\n+1\n+2\n+2\n", tree.get());
  tc_engine_config c = config(2, 1);
  tc_engine* raw = nullptr;
  ASSERT_EQ(tc_engine_create(tree.get(), &c, &raw), TC_OK);
  Owned<tc_engine> e(raw);
  ASSERT_EQ(tc_engine_run(e.get(), trace.get()), TC_OK);
  tc_phase p;
  ASSERT_EQ(tc_engine_phase(e.get(), 0, &p), TC_OK);
  EXPECT_EQ(p.finished, 1);
  EXPECT_EQ(p.k_p, 2u);
  EXPECT_EQ(p.end_round, 4u);
  ASSERT_EQ(tc_engine_phase(e.get(), 1, &p), TC_OK);
  EXPECT_EQ(p.begin_round, 4u);
  EXPECT_EQ(tc_engine_phase(e.get(), 2, &p), TC_ERR_INPUT);
}

TEST(CApi, RunReportBothBackends) {
  auto tree = path3();
  auto trace = parse_trace("+2\n+2\n-2\n-2\n", tree.get());
  tc_engine_config c = config(2, 3);
  c.backend = TC_BACKEND_BOTH;
  char* out = nullptr;
  ASSERT_EQ(tc_run_report_json(tree.get(), trace.get(), &c, 1, &out), TC_OK) << tc_last_error();
  const json j = take_json(out);
  EXPECT_EQ(j["backends_agree"], true);
  EXPECT_EQ(j["ledger"]["total"], 8);
  EXPECT_EQ(j["fetches"], 1);
  EXPECT_EQ(j["evictions"], 1);
  EXPECT_EQ(j["steps"].size(), 4u);
}

TEST(CApi, OptAndRatio) {
  auto tree = parse_tree("1\n-1\n");
  auto trace = parse_trace("+0\n+0\n+0\n+0\n", tree.get());
  tc_opt_config oc;
  tc_opt_config_default(&oc);
  oc.alpha = 2;
  oc.k_opt = 1;
  tc_opt_result* raw = nullptr;
  ASSERT_EQ(tc_opt_solve(tree.get(), trace.get(), &oc, &raw), TC_OK);
  Owned<tc_opt_result> r(raw);
  EXPECT_EQ(tc_opt_result_cost(r.get()), 2);
  ASSERT_EQ(tc_opt_result_schedule_length(r.get()), 4u);
  size_t len = 0;
  uint32_t v = 9;
  ASSERT_EQ(tc_opt_result_cache_at(r.get(), 0, &v, 1, &len), TC_OK);
  EXPECT_EQ(len, 1u);
  EXPECT_EQ(v, 0u);

  auto two = parse_trace("+0\n+0\n", tree.get());
  tc_ratio_result rr;
  ASSERT_EQ(tc_competitive_ratio(tree.get(), two.get(), 2, 1, 1, 0, &rr), TC_OK);
  EXPECT_EQ(rr.tc_cost, 4);
  EXPECT_EQ(rr.opt_cost, 2);
  EXPECT_DOUBLE_EQ(rr.ratio, 2.0);
}

TEST(CApi, SizeGuardReportsEstimate) {
  std::vector<int64_t> parents(40, 0);
  parents[0] = -1;
  tc_tree* raw = nullptr;
  ASSERT_EQ(tc_tree_from_parents(parents.data(), parents.size(), &raw), TC_OK);
  Owned<tc_tree> tree(raw);
  auto trace = parse_trace("+1\n", tree.get());
  tc_opt_config oc;
  tc_opt_config_default(&oc);
  oc.k_opt = 20;
  oc.state_limit = 1000;
  tc_opt_result* r = nullptr;
  EXPECT_EQ(tc_opt_solve(tree.get(), trace.get(), &oc, &r), TC_ERR_RESOURCE);
  EXPECT_GT(tc_last_error_estimate(), 1000u);
  uint64_t count = 0;
  ASSERT_EQ(tc_count_subforests(tree.get(), 2, 1u << 20, &count), TC_OK);
  EXPECT_EQ(count, 1u + 39u + 39u * 38u / 2u);
}

TEST(CApi, VerifyAllSuites) {
  tc_tree* t = nullptr;
  ASSERT_EQ(tc_gen_random_tree(8, 5, &t), TC_OK);
  Owned<tc_tree> tree(t);
  tc_trace* tr = nullptr;
  ASSERT_EQ(tc_gen_uniform(tree.get(), 200, 0.85, 3, 2, 4, &tr), TC_OK);
  Owned<tc_trace> trace(tr);
  int passed = 0;
  char* out = nullptr;
  ASSERT_EQ(tc_verify_json(tree.get(), trace.get(), 2, 4, TC_SUITE_ALL, &passed, &out), TC_OK)
      << tc_last_error();
  const json j = take_json(out);
  EXPECT_EQ(passed, 1);
  EXPECT_EQ(j["passed"], true);
  EXPECT_EQ(j["lemma51_level"], "full");
  EXPECT_FALSE(j["checks"].empty());
}

TEST(CApi, Generators) {
  tc_tree* t = nullptr;
  tc_trace* tr = nullptr;
  char* meta = nullptr;
  ASSERT_EQ(tc_gen_adversary(2, 2, 5, &t, &tr, &meta), TC_OK);
  Owned<tc_tree> at(t);
  Owned<tc_trace> atr(tr);
  EXPECT_EQ(tc_trace_length(atr.get()), 10u);
  EXPECT_EQ(take_json(meta)["chunk_bounds"].size(), 5u);

  ASSERT_EQ(tc_gen_appendix_d(2, 1, 2, -1, &t, &tr, &meta), TC_OK);
  Owned<tc_tree> dt(t);
  Owned<tc_trace> dtr(tr);
  const json d = take_json(meta);
  EXPECT_EQ(d["expected_fetch_round"], tc_trace_length(dtr.get()));
  EXPECT_EQ(d["full_tree_fetch"], true);
  EXPECT_EQ(tc_gen_appendix_d(2, 2, 2, -1, &t, &tr, nullptr), TC_ERR_INPUT);

  ASSERT_EQ(tc_gen_zipf_trie(8, 1.0, 100, 0.1, 7, 2, &t, &tr, &meta), TC_OK);
  Owned<tc_tree> zt(t);
  Owned<tc_trace> ztr(tr);
  EXPECT_EQ(tc_tree_size(zt.get()), 15u);
  EXPECT_EQ(take_json(meta)["leaf_ranking"].size(), 8u);
}

TEST(CApi, ErrorIsPerCall) {
  tc_tree* t = nullptr;
  EXPECT_EQ(tc_tree_parse("x", &t), TC_ERR_INPUT);
  EXPECT_NE(std::string(tc_last_error()), "");
  auto ok = path3();
  EXPECT_EQ(std::string(tc_last_error()), "");
}

}  // namespace
