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
 * @file workloads.hpp
 * @brief Trace generators: the paging adversary, the two-subtree fixture,
 *        rule-update streams with canonicalisation, Zipf prefix tries and
 *        uniform fuzz traces.
 *
 * Every generator is a pure function of its parameters and seed.
 */

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "treecache/tree.hpp"

namespace treecache {

/// A run of trace indices [begin, end) that stands for one rule update.
struct Chunk {
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const Chunk&, const Chunk&) = default;
};

struct Workload {
  std::shared_ptr<const TreeTopology> topo;
  Trace trace;
  std::vector<Chunk> chunks;
};

/// Star with k_onl + 1 leaves (root 0, leaves 1..k_onl+1). Each chunk sends alpha positive
/// requests to the lowest-id leaf outside the co-simulated engine's cache.
Workload gen_adversary_paging(std::size_t k_onl, std::int64_t alpha, std::size_t num_chunks);

struct AppendixDParams {
  std::size_t s = 2;
  std::size_t ell = 1;
  std::int64_t alpha = 2;
  /// Requests at the root of T1 in stage 4; defaults to s * alpha - 1.
  std::optional<std::int64_t> stage4_count;
};

struct AppendixDWorkload : Workload {
  NodeId root = 0;
  NodeId t1_root = 0;
  NodeId t2_root = 0;
  NodeSet t1;
  NodeSet t2;
  std::size_t k_onl = 0;
  /// Trace index where warm-up, stages 1..5 begin (6 entries).
  std::vector<std::size_t> stage_begin;
  /// Round of the last fetch of stage 5, after which the whole tree is cached.
  std::uint64_t expected_fetch_round = 0;
  /// Whether that fetch brought in the entire tree at once.
  bool full_tree_fetch = false;
};

/// Root r with subtrees T1 and T2 of s nodes and ell leaves each. Starting from a warm-up
/// that caches the whole tree, evicts T1 + r, sends (s+1)*alpha - ell positives to r,
/// evicts T2, sends stage4_count positives to T1's root, then positives to r until the
/// whole tree is cached again.
AppendixDWorkload gen_appendix_d(const AppendixDParams& params);

struct RuleEvent {
  enum class Kind : std::uint8_t { kLookup, kUpdate };
  Kind kind = Kind::kLookup;
  NodeId node = 0;
};

/// Lookups become one positive request; updates a chunk of alpha negative requests.
Workload rule_stream_to_trace(const std::vector<RuleEvent>& events, std::int64_t alpha);

/// Cache modification right after round `time` (0 = before the first round);
/// the eviction is applied before the fetch.
struct CacheAction {
  std::uint64_t time = 0;
  NodeSet fetch;
  NodeSet evict;

  friend bool operator==(const CacheAction&, const CacheAction&) = default;
};

/// Cost of serving `trace` from an initially empty cache while applying `actions`
/// (sorted by time). Throws InvalidInput when an action is not a valid changeset at its
/// application point or the cache exceeds `k` (0 = unbounded).
std::int64_t solution_cost(const TreeTopology& topo, const Trace& trace,
                           const std::vector<CacheAction>& actions, std::int64_t alpha,
                           std::size_t k = 0);

/// Postpones every action taken strictly inside a chunk to the end of that chunk.
/// Throws InvariantViolation if the result costs more than twice the input.
std::vector<CacheAction> canonicalize_solution(const TreeTopology& topo, const Trace& trace,
                                               const std::vector<Chunk>& chunks,
                                               const std::vector<CacheAction>& actions,
                                               std::int64_t alpha);

struct ZipfTrieParams {
  std::size_t num_prefixes = 16;
  double zipf_s = 1.0;
  std::size_t lookups = 1000;
  double update_rate = 0.0;
  std::uint64_t seed = 1;
  std::int64_t alpha = 2;
};

/// Random binary trie with num_prefixes leaves; Zipf-distributed lookups over the leaves,
/// each preceded by an update of a uniform node with probability update_rate.
Workload gen_zipf_trie(const ZipfTrieParams& params);

/// Leaf ids of a zipf-trie workload by popularity rank (most popular first).
std::vector<NodeId> zipf_trie_leaf_ranking(const ZipfTrieParams& params);

struct UniformParams {
  std::size_t length = 100;
  double positive_bias = 0.9;  ///< probability a request is chargeable when issued
  std::uint64_t seed = 1;
  std::int64_t alpha = 2;
  std::size_t k = 0;  ///< capacity of the replayed engine; 0 means |T|
};

/// Uniform node choice; the sign makes the request chargeable with probability
/// positive_bias given the node's status in a replayed engine.
Trace gen_uniform_random(const TreeTopology& topo, const UniformParams& params);

/// Random recursive tree: parent of node i is uniform in [0, i).
TreeTopology random_tree(std::size_t n, std::uint64_t seed);

}  // namespace treecache
