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
 * @file fast_index.hpp
 * @brief Incremental aggregates that let the engine find its changeset in
 *        O(h + max{h, deg} * |X|) work per request.
 *
 * Non-cached node u keeps the counter sum and size of P(u), the cap of all
 * non-cached nodes of T(u). Cached node u keeps
 *
 *     scaled_val(u) = (cnt(H) - |H| * alpha) * (|T| + 1) + |H|
 *
 * for the value-maximising cap H(u) rooted at u, i.e. the value with its
 * fractional tie-breaker |H| / (|T| + 1) scaled to an exact integer. It obeys
 *
 *     scaled_val(u) = (counter(u) - alpha) * (|T| + 1) + 1
 *                     + sum over cached children w of max(scaled_val(w), 0).
 *
 * A phase reset (final eviction) is O(1): every slot carries an epoch stamp
 * and stale slots read as "non-cached, counter 0, P(u) = T(u)".
 */

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "treecache/tree.hpp"

namespace treecache {

class FastIndex {
 public:
  FastIndex(const TreeTopology& topo, std::int64_t alpha);

  /// Index for an explicit state. `counters` has one entry per node.
  static FastIndex from_state(const TreeTopology& topo, std::int64_t alpha, const NodeSet& cache,
                              std::span<const std::int64_t> counters);

  /// A chargeable request at `v`; `sign` must match v's cache status.
  void on_charged_request(NodeId v, Sign sign);

  /// `x` was just applied. Counters of `x` are reset here.
  void on_cache_change(const NodeSet& x, Sign sign);

  /// Final eviction: empty cache, all counters zero.
  void on_phase_reset();

  /// First saturated P(u) scanning the ancestors of `v` from the top down.
  std::optional<NodeSet> find_positive_candidate(NodeId v);

  /// H(u) for the root u of the cached tree holding `v`, if it has positive value.
  std::optional<NodeSet> find_negative_candidate(NodeId v);

  bool cached(NodeId v) const { return view(v).cached; }
  std::int64_t counter(NodeId v) const { return view(v).counter; }
  /// cnt(P(v)) / |P(v)|; meaningful for non-cached v only.
  std::int64_t agg_cnt(NodeId v) const { return view(v).agg_cnt; }
  std::int64_t agg_size(NodeId v) const { return view(v).agg_size; }
  /// Meaningful for cached v only.
  std::int64_t scaled_val(NodeId v) const { return view(v).scaled_val; }
  std::int64_t scale() const noexcept { return scale_; }

  /// Basic-operation counter (nodes visited, children scanned, nodes materialised).
  std::uint64_t ops() const noexcept { return ops_; }

  /// Recomputes every aggregate from scratch and throws InvariantViolation on mismatch.
  void check_consistency() const;

  /// Words of per-node storage; constant in |T|.
  static constexpr std::size_t words_per_node() { return sizeof(Slot) / sizeof(std::uint64_t); }

 private:
  struct Slot {
    std::int64_t counter = 0;
    std::int64_t agg_cnt = 0;
    std::int64_t agg_size = 0;
    std::int64_t scaled_val = 0;
    std::int64_t child_sum = 0;
    std::uint32_t epoch = 0;
    bool cached = false;
  };

  Slot fresh(NodeId v) const;
  const Slot view(NodeId v) const { return slots_[v].epoch == epoch_ ? slots_[v] : fresh(v); }
  Slot& at(NodeId v) {
    if (slots_[v].epoch != epoch_) slots_[v] = fresh(v);
    return slots_[v];
  }
  std::int64_t base_val(std::int64_t counter) const { return (counter - alpha_) * scale_ + 1; }

  void fetch(std::vector<NodeId>& order);
  void evict(std::vector<NodeId>& order);

  const TreeTopology* topo_;
  std::int64_t alpha_;
  std::int64_t scale_;
  std::uint32_t epoch_ = 1;
  std::vector<Slot> slots_;
  std::vector<NodeId> scratch_;
  std::uint64_t ops_ = 0;
};

}  // namespace treecache
