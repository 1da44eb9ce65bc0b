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
 * @file opt.hpp
 * @brief Exact offline optimum by dynamic programming over subforest caches.
 *
 * The state is the cache content. Between rounds any state may move to any
 * other at alpha per node in the symmetric difference; this is relaxed in
 * two sweeps per round (evictions top-down, then fetches bottom-up), which
 * reaches every pair through valid single-node steps.
 */

#pragma once

#include <cstdint>
#include <vector>

#include "treecache/tree.hpp"

namespace treecache {

inline constexpr std::size_t kDefaultStateLimit = 100000;

struct OptConfig {
  std::size_t k_opt = 1;
  std::int64_t alpha = 2;
  NodeSet initial_cache;
  bool allow_time_zero_reorg = true;
  std::size_t state_limit = kDefaultStateLimit;
  bool keep_schedule = true;
};

struct OptSolution {
  std::int64_t total_cost = 0;
  /// schedule[i] is the cache during round i + 1; empty when not kept.
  std::vector<NodeSet> schedule;
};

/// Number of subforests of size <= k, saturating at `cap` + 1.
std::uint64_t count_subforests(const TreeTopology& topo, std::size_t k, std::uint64_t cap);

/// All subforests of size <= k ordered by size, then lexicographically.
/// Throws SizeLimit (with the count estimate) when there are more than `limit`.
std::vector<NodeSet> enumerate_subforests(const TreeTopology& topo, std::size_t k,
                                          std::size_t limit = kDefaultStateLimit);

OptSolution optimal_cost(const TreeTopology& topo, const OptConfig& config, const Trace& trace);

/// Replays a per-round cache schedule and returns its cost; throws InvalidInput when a
/// cache in it is not a subforest or exceeds `k`.
std::int64_t schedule_cost(const TreeTopology& topo, std::int64_t alpha, std::size_t k,
                           const NodeSet& initial_cache, bool allow_time_zero_reorg,
                           const Trace& trace, const std::vector<NodeSet>& schedule);

struct RatioResult {
  std::int64_t tc_cost = 0;
  std::int64_t opt_cost = 0;
  double ratio = 0;
  /// TC cost minus the additive term h(T) * k_onl * alpha (floored at 0), over OPT.
  double adjusted_ratio = 0;
  std::int64_t additive_term = 0;
  /// h(T) * k_onl / (k_onl - k_opt + 1), for comparison.
  double bound = 0;
};

RatioResult competitive_ratio(const TreeTopology& topo, const Trace& trace, std::int64_t alpha,
                              std::size_t k_onl, std::size_t k_opt,
                              std::size_t state_limit = kDefaultStateLimit);

}  // namespace treecache
