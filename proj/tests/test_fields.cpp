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

#include <gtest/gtest.h>

#include "common.hpp"
#include "treecache/error.hpp"
#include "treecache/fields.hpp"

using namespace treecache;
using namespace testing_util;

namespace {

const EngineConfig kPathConfig{2, 3, Backend::kFast, AssertLevel::kLemma51};

TEST(BuildFields, SingleFetch) {
  const auto phases = build_fields(*path3(), kPathConfig, {pos(2), pos(2)});
  ASSERT_EQ(phases.size(), 1u);
  ASSERT_EQ(phases[0].fields.size(), 1u);
  const FieldRecord& f = phases[0].fields[0];
  EXPECT_EQ(f.end_time, 2u);
  EXPECT_EQ(f.kind, FieldKind::kPositive);
  ASSERT_EQ(f.members.size(), 1u);
  EXPECT_EQ(f.members[0].node, 2u);
  EXPECT_EQ(f.members[0].first, 1u);
  EXPECT_EQ(f.members[0].last, 2u);
  EXPECT_EQ(f.req(), 2);
  EXPECT_EQ(f.size(), 1u);
  EXPECT_TRUE(phases[0].open_field.members.empty());
}

TEST(BuildFields, FetchThenEvict) {
  const auto phases = build_fields(*path3(), kPathConfig, {pos(2), pos(2), neg(2), neg(2)});
  ASSERT_EQ(phases[0].fields.size(), 2u);
  const FieldRecord& f = phases[0].fields[1];
  EXPECT_EQ(f.end_time, 4u);
  EXPECT_EQ(f.kind, FieldKind::kNegative);
  EXPECT_EQ(f.members[0].first, 3u);
  EXPECT_EQ(f.members[0].last, 4u);
  EXPECT_EQ(f.req(), 2);
}

TEST(BuildFields, EmptyTrace) {
  const auto phases = build_fields(*path3(), kPathConfig, {});
  ASSERT_EQ(phases.size(), 1u);
  EXPECT_TRUE(phases[0].fields.empty());
  EXPECT_TRUE(phases[0].open_field.members.empty());
}

TEST(BuildFields, OverflowMakesArtificialField) {
  const auto phases = build_fields(*tree({-1, 0, 0}), EngineConfig{2, 1},
                                   {pos(1), pos(1), pos(2), pos(2)});
  ASSERT_EQ(phases.size(), 2u);
  EXPECT_TRUE(phases[0].finished);
  EXPECT_EQ(phases[0].k_p, 2u);
  ASSERT_EQ(phases[0].fields.size(), 2u);
  EXPECT_TRUE(phases[0].fields[1].artificial);
  EXPECT_EQ(phases[0].fields[1].nodes(), NodeSet{2});
}

TEST(CheckFieldInvariants, PathExample) {
  const auto phases = build_fields(*path3(), kPathConfig, {pos(2), pos(2)});
  const CheckReport r = check_field_invariants(phases, 2);
  EXPECT_TRUE(r.passed());
  ASSERT_NE(r.find("phase_cost_bound"), nullptr);
  EXPECT_EQ(r.find("phase_cost_bound")->checked, 1u);
  EXPECT_EQ(phases[0].tc_cost, 4);
}

TEST(CheckFieldInvariants, NoChangesetsMeansCostEqualsOpenRequests) {
  const Trace t{pos(0), pos(1), neg(2), pos(0)};
  const auto phases = build_fields(*path3(), kPathConfig, t);
  EXPECT_TRUE(phases[0].fields.empty());
  EXPECT_EQ(phases[0].tc_cost, phases[0].open_field.req());
  EXPECT_TRUE(check_field_invariants(phases, 2).passed());
}

TEST(CheckFieldInvariants, DetectsCorruptedField) {
  auto phases = build_fields(*path3(), kPathConfig, {pos(2), pos(2)});
  phases[0].fields[0].members[0].positive_rounds.push_back(2);
  const CheckReport r = check_field_invariants(phases, 2);
  EXPECT_FALSE(r.passed());
  EXPECT_FALSE(r.find("field_req_equals_size_alpha")->passed());
  EXPECT_TRUE(r.find("field_req_equals_size_alpha")->first_counterexample.has_value());
}

TEST(NotOverRequested, Examples) {
  const auto single = build_fields(*tree({-1}), EngineConfig{2, 1}, {pos(0), pos(0)});
  EXPECT_TRUE(check_not_over_requested(*tree({-1}), single, 2).passed());
  const auto phases = build_fields(*path3(), kPathConfig, {pos(2), pos(2)});
  const CheckReport r = check_not_over_requested(*path3(), phases, 2);
  EXPECT_TRUE(r.passed());
  EXPECT_GT(r.find("positive_field_subtrees_not_over_requested")->checked, 0u);
}

TEST(NotOverRequested, SizeGuard) {
  std::vector<std::int64_t> p(13, 0);
  p[0] = -1;
  EXPECT_THROW(check_not_over_requested(*tree(p), EngineConfig{2, 1}, {}), SizeLimit);
}

// Closed fields against an oracle built from the brute-force TC run.
TEST(BuildFields, MatchesOracleFields) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Instance in = fuzz_instance(seed, 8, 120);
    const auto parents = parents_of(*in.topo);
    const auto tr = to_oracle(in.trace);
    const auto run = oracle::run_tc(parents, in.alpha, static_cast<int>(in.k), tr);
    const auto expect = oracle::fields(parents, tr, run);
    std::vector<const FieldRecord*> got;
    const auto phases = build_fields(*in.topo, EngineConfig{in.alpha, in.k}, in.trace);
    for (const auto& p : phases) {
      for (const auto& f : p.fields) got.push_back(&f);
    }
    ASSERT_EQ(got.size(), expect.size()) << "seed " << seed;
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i]->end_time, static_cast<std::uint64_t>(expect[i].end)) << "seed " << seed;
      EXPECT_EQ(to_mask(got[i]->nodes()), expect[i].nodes) << "seed " << seed;
      EXPECT_EQ(got[i]->req(), expect[i].req) << "seed " << seed;
      EXPECT_EQ(got[i]->artificial, expect[i].artificial) << "seed " << seed;
      EXPECT_EQ(got[i]->kind == FieldKind::kPositive, expect[i].positive) << "seed " << seed;
    }
  }
}

TEST(FieldSuites, PassOnFuzz) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Instance in = fuzz_instance(seed, 10, 200);
    const auto phases = build_fields(*in.topo, EngineConfig{in.alpha, in.k}, in.trace);
    const CheckReport a = check_field_invariants(phases, in.alpha);
    const CheckReport b = check_not_over_requested(*in.topo, phases, in.alpha);
    for (const auto& r : a.results) EXPECT_TRUE(r.passed()) << r.name << ": " << r.first_counterexample.value_or("");
    for (const auto& r : b.results) EXPECT_TRUE(r.passed()) << r.name << ": " << r.first_counterexample.value_or("");
  }
}

}  // namespace
