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

using namespace treecache;
using namespace testing_util;

namespace {

NodeSet to_mask_set(oracle::Mask m, int n) {
  std::vector<NodeId> ids;
  for (int v = 0; v < n; ++v) {
    if (oracle::in(m, v)) ids.push_back(static_cast<NodeId>(v));
  }
  return NodeSet(ids);
}

// Star: r=0 with leaves x=1, y=2, z=3.
std::shared_ptr<const TreeTopology> star3() { return tree({-1, 0, 0, 0}); }

TEST(TreeTopology, PathBasics) {
  const auto t = path3();
  EXPECT_EQ(t->size(), 3u);
  EXPECT_EQ(t->root(), 0u);
  EXPECT_EQ(t->height(), 3u);
  EXPECT_EQ(t->max_degree(), 1u);
  EXPECT_EQ(t->depth(2), 2u);
  EXPECT_EQ(t->subtree_size(0), 3u);
  EXPECT_TRUE(t->is_ancestor(0, 2));
  EXPECT_FALSE(t->is_ancestor(2, 0));
  EXPECT_TRUE(t->is_ancestor(1, 1));
}

TEST(TreeTopology, StarBasics) {
  const auto t = star3();
  EXPECT_EQ(t->height(), 2u);
  EXPECT_EQ(t->max_degree(), 3u);
  ASSERT_EQ(t->children(0).size(), 3u);
  EXPECT_EQ(t->children(0)[2], 3u);
  EXPECT_EQ(t->parent_array(), (std::vector<std::int64_t>{-1, 0, 0, 0}));
}

TEST(TreeTopology, SingleNode) {
  const auto t = tree({-1});
  EXPECT_EQ(t->height(), 1u);
  EXPECT_EQ(t->max_degree(), 0u);
}

TEST(TreeTopology, RejectsMalformedParents) {
  EXPECT_THROW(tree({}), InvalidInput);
  EXPECT_THROW(tree({-1, -1}), InvalidInput);
  EXPECT_THROW(tree({0, 0}), InvalidInput);
  EXPECT_THROW(tree({-1, 5}), InvalidInput);
  EXPECT_THROW(tree({-1, 2, 1}), InvalidInput);  // cycle 1 <-> 2
  EXPECT_THROW(tree({-1, 1}), InvalidInput);     // self loop
}

TEST(NodeSetTest, SortedUniqueAndFormatting) {
  const NodeSet s{3, 1, 3, 2};
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(s.to_string(), "{1,2,3}");
  EXPECT_TRUE(s.contains(2));
  EXPECT_FALSE(s.contains(0));
  EXPECT_EQ(set_union(NodeSet{1}, NodeSet{0, 2}), (NodeSet{0, 1, 2}));
  EXPECT_EQ(set_difference(NodeSet{0, 1, 2}, NodeSet{1}), (NodeSet{0, 2}));
  EXPECT_TRUE(disjoint(NodeSet{0}, NodeSet{1}));
  EXPECT_TRUE(is_subset(NodeSet{1}, NodeSet{0, 1}));
}

TEST(Subforest, SpecExamples) {
  EXPECT_TRUE(is_subforest(*path3(), NodeSet{2}));
  EXPECT_FALSE(is_subforest(*path3(), NodeSet{1}));
  EXPECT_TRUE(is_subforest(*star3(), NodeSet{1, 3}));
  EXPECT_TRUE(is_subforest(*path3(), NodeSet{}));
  EXPECT_THROW(is_subforest(*path3(), NodeSet{7}), InvalidInput);
}

TEST(TreeCap, SpecExamples) {
  EXPECT_TRUE(is_tree_cap(*path3(), NodeSet{0, 1}, 0));
  EXPECT_FALSE(is_tree_cap(*path3(), NodeSet{0, 2}, 0));
  EXPECT_TRUE(is_tree_cap(*tree({-1, 0, 0}), NodeSet{0, 1}, 0));
  EXPECT_FALSE(is_tree_cap(*path3(), NodeSet{1, 2}, 0));
}

TEST(ValidChangeset, SpecExamples) {
  EXPECT_TRUE(validate_changeset(*path3(), NodeSet{2}, NodeSet{0, 1}, Sign::kPositive));
  EXPECT_FALSE(validate_changeset(*path3(), NodeSet{1, 2}, NodeSet{2}, Sign::kNegative));
  EXPECT_TRUE(validate_changeset(*star3(), NodeSet{}, NodeSet{2}, Sign::kPositive));
  EXPECT_FALSE(validate_changeset(*path3(), NodeSet{}, NodeSet{}, Sign::kPositive));
  EXPECT_THROW(validate_changeset(*path3(), NodeSet{1}, NodeSet{2}, Sign::kPositive),
               ContractViolation);
}

TEST(Enumerate, SpecExamples) {
  using V = std::vector<NodeSet>;
  EXPECT_EQ(enumerate_valid_changesets(*path3(), {}, Sign::kPositive, 2),
            (V{NodeSet{2}, NodeSet{1, 2}, NodeSet{0, 1, 2}}));
  EXPECT_EQ(enumerate_valid_changesets(*path3(), NodeSet{0, 1, 2}, Sign::kNegative, 0),
            (V{NodeSet{0}, NodeSet{0, 1}, NodeSet{0, 1, 2}}));
  EXPECT_EQ(enumerate_valid_changesets(*tree({-1}), NodeSet{0}, Sign::kNegative, 0),
            (V{NodeSet{0}}));
  EXPECT_TRUE(enumerate_valid_changesets(*path3(), NodeSet{2}, Sign::kPositive, 2).empty());
}

TEST(Enumerate, SizeGuard) {
  std::vector<std::int64_t> p(25, 0);
  p[0] = -1;
  EXPECT_THROW(enumerate_valid_changesets(*tree(p), {}, Sign::kPositive, 1), SizeLimit);
}

// Cap enumeration against the power set on random trees and caches.
TEST(Enumerate, MatchesBruteForce) {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 300; ++iter) {
    const int n = 1 + static_cast<int>(rng() % 9);
    const auto parents = oracle::random_parents(n, rng);
    std::vector<std::int64_t> p(parents.begin(), parents.end());
    const auto t = tree(p);
    // A random subforest: close a random set under descendants.
    oracle::Mask c = 0;
    for (int v = 0; v < n; ++v) {
      if (rng() % 3 == 0) c |= 1u << v;
    }
    for (int v = 0; v < n; ++v) {
      for (int a = parents[v]; a >= 0; a = parents[a]) {
        if (oracle::in(c, a)) c |= 1u << v;
      }
    }
    std::vector<NodeId> ids;
    for (int v = 0; v < n; ++v) {
      if (oracle::in(c, v)) ids.push_back(v);
    }
    const NodeSet cache(ids);
    ASSERT_EQ(is_subforest(*t, cache), oracle::is_subforest(parents, c));
    const auto v = static_cast<NodeId>(rng() % n);
    for (Sign s : {Sign::kPositive, Sign::kNegative}) {
      EXPECT_EQ(enumerate_valid_changesets(*t, cache, s, v),
                enumerate_valid_changesets_bruteforce(*t, cache, s, v));
    }
  }
}

TEST(Subforest, MatchesOracle) {
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 200; ++iter) {
    const int n = 1 + static_cast<int>(rng() % 10);
    const auto parents = oracle::random_parents(n, rng);
    const auto t = tree(std::vector<std::int64_t>(parents.begin(), parents.end()));
    const oracle::Mask s = static_cast<oracle::Mask>(rng() % (1u << n));
    EXPECT_EQ(is_subforest(*t, to_mask_set(s, n)), oracle::is_subforest(parents, s));
  }
}

}  // namespace
