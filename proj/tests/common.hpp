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

// Shared fixtures for the unit tests.

#pragma once

#include <algorithm>
#include <memory>
#include <random>
#include <vector>

#include "oracle.hpp"
#include "treecache/tree.hpp"
#include "treecache/workloads.hpp"

namespace testing_util {

using namespace treecache;

inline std::shared_ptr<const TreeTopology> tree(std::vector<std::int64_t> parents) {
  return std::make_shared<const TreeTopology>(TreeTopology::from_parents(parents));
}

/// r=0 -> a=1 -> b=2.
inline std::shared_ptr<const TreeTopology> path3() { return tree({-1, 0, 1}); }

inline Request pos(NodeId v) { return {v, Sign::kPositive}; }
inline Request neg(NodeId v) { return {v, Sign::kNegative}; }

inline std::vector<int> parents_of(const TreeTopology& t) {
  std::vector<int> out;
  for (auto p : t.parent_array()) out.push_back(static_cast<int>(p));
  return out;
}

inline std::vector<oracle::Req> to_oracle(const Trace& trace) {
  std::vector<oracle::Req> out;
  for (const Request& r : trace) out.push_back({static_cast<int>(r.node), r.sign == Sign::kPositive});
  return out;
}

inline oracle::Mask to_mask(const NodeSet& s) {
  oracle::Mask m = 0;
  for (NodeId v : s) m |= oracle::Mask{1} << v;
  return m;
}

/// One fuzz instance: random recursive tree, alpha in {1,2,4}, k in 1..|T|, trace <= max_len.
struct Instance {
  std::shared_ptr<const TreeTopology> topo;
  std::int64_t alpha = 2;
  std::size_t k = 1;
  Trace trace;
};

inline Instance fuzz_instance(std::uint64_t seed, std::size_t max_nodes = 12,
                              std::size_t max_len = 200) {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 1);
  Instance in;
  const std::size_t n = 1 + rng() % max_nodes;
  in.topo = std::make_shared<const TreeTopology>(random_tree(n, rng()));
  in.alpha = std::vector<std::int64_t>{1, 2, 4}[rng() % 3];
  in.k = 1 + rng() % n;
  const std::size_t len = rng() % (max_len + 1);
  in.trace = gen_uniform_random(*in.topo, UniformParams{len, 0.85, rng(), in.alpha, in.k});
  return in;
}

/// Random subforest: random nodes closed under descendants.
inline NodeSet random_subforest(const TreeTopology& t, std::mt19937_64& rng, double p) {
  std::bernoulli_distribution coin(p);
  std::vector<bool> chosen(t.size());
  for (NodeId v = 0; v < t.size(); ++v) chosen[v] = coin(rng);
  std::vector<NodeId> ids;
  for (NodeId v = 0; v < t.size(); ++v) {
    for (NodeId a = v; a != kNoNode; a = t.parent(a)) {
      if (chosen[a]) {
        ids.push_back(v);
        break;
      }
    }
  }
  return NodeSet(std::move(ids));
}

/// Action moving `from` to `to` at `time`: evict the difference, then fetch the rest.
inline CacheAction move_action(std::uint64_t time, const NodeSet& from, const NodeSet& to) {
  return {time, set_difference(to, from), set_difference(from, to)};
}

/// Random valid solution over a trace of `len` rounds with about `count` actions.
inline std::vector<CacheAction> random_solution(const TreeTopology& t, std::size_t len,
                                                std::size_t count, std::mt19937_64& rng) {
  std::vector<std::uint64_t> times;
  for (std::size_t i = 0; i < count; ++i) times.push_back(rng() % (len + 1));
  std::sort(times.begin(), times.end());
  std::vector<CacheAction> out;
  NodeSet cache;
  for (std::uint64_t time : times) {
    const NodeSet next = random_subforest(t, rng, 0.3);
    if (next == cache) continue;
    out.push_back(move_action(time, cache, next));
    cache = next;
  }
  return out;
}

}  // namespace testing_util
