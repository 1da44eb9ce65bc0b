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
 * @file engine.hpp
 * @brief The counter-based online tree-caching engine.
 *
 * Every node keeps a counter of the requests it paid for since its last state
 * flip. After a chargeable request the engine looks for a valid changeset X
 * with cnt(X) >= |X| * alpha (saturated) such that no valid superset is
 * saturated (maximal) and applies it. A fetch that would overflow the cache
 * empties the cache instead and starts a new phase with all counters at zero.
 */

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "treecache/fast_index.hpp"
#include "treecache/tree.hpp"

namespace treecache {

enum class Backend : std::uint8_t { kNaive, kFast, kBothChecked };
enum class AssertLevel : std::uint8_t { kOff, kLemma51, kFull };

const char* to_string(Backend b);
const char* to_string(AssertLevel a);
Backend parse_backend(const std::string& s);
AssertLevel parse_assert_level(const std::string& s);

/// Exhaustive per-step checks at AssertLevel::kFull only run up to this size.
inline constexpr std::size_t kExhaustiveCheckLimit = 12;

struct EngineConfig {
  std::int64_t alpha = 2;
  std::size_t k_onl = 1;
  Backend backend = Backend::kFast;
  AssertLevel assert_level = AssertLevel::kLemma51;
  std::size_t naive_limit = kDefaultEnumerationLimit;
};

struct PhaseCost {
  std::uint64_t phase_index = 1;
  std::uint64_t begin_round = 0;  ///< time the phase started
  std::uint64_t end_round = 0;    ///< time of the final eviction, or the last round seen
  std::int64_t serve = 0;
  std::int64_t move = 0;
  /// Cache size after the overflowing fetch (finished) or current size (unfinished).
  std::size_t k_p = 0;
  bool finished = false;

  friend bool operator==(const PhaseCost&, const PhaseCost&) = default;
};

struct CostLedger {
  std::int64_t serve_cost = 0;
  std::int64_t move_cost = 0;
  std::vector<PhaseCost> phases;

  std::int64_t total() const noexcept { return serve_cost + move_cost; }
  friend bool operator==(const CostLedger&, const CostLedger&) = default;
};

struct Changeset {
  NodeSet nodes;
  Sign sign = Sign::kPositive;

  friend bool operator==(const Changeset&, const Changeset&) = default;
};

struct StepReport {
  std::uint64_t round = 0;
  Request request;
  bool charged = false;
  /// Fetched or evicted set; absent when nothing was applied or the phase ended.
  std::optional<Changeset> applied;
  bool phase_ended = false;
  std::optional<std::size_t> k_p_at_end;
  /// The fetch that did not fit, when the phase ended.
  std::optional<NodeSet> overflow_fetch;
  std::size_t final_evicted = 0;

  friend bool operator==(const StepReport&, const StepReport&) = default;
};

/// Reference decision by enumerating every single-cap valid changeset containing the
/// requested node. `counters` already include this round's charge.
std::optional<Changeset> decide_changeset_naive(const TreeTopology& topo, const NodeSet& cache,
                                                std::span<const std::int64_t> counters,
                                                std::int64_t alpha, const Request& req,
                                                std::size_t limit = kDefaultEnumerationLimit);

/// Decision through the incremental index; must agree with the naive one.
std::optional<Changeset> decide_changeset_fast(FastIndex& index, const Request& req);

class Engine {
 public:
  Engine(std::shared_ptr<const TreeTopology> topo, EngineConfig config);

  StepReport process_request(const Request& req);

  const TreeTopology& topology() const noexcept { return *topo_; }
  const EngineConfig& config() const noexcept { return config_; }
  const CostLedger& ledger() const noexcept { return ledger_; }
  std::uint64_t round() const noexcept { return round_; }
  std::uint64_t phase_index() const noexcept { return ledger_.phases.back().phase_index; }
  std::uint64_t phase_start() const noexcept { return ledger_.phases.back().begin_round; }

  bool cached(NodeId v) const { return view(v).cached; }
  std::int64_t counter(NodeId v) const { return view(v).counter; }
  std::size_t cache_size() const noexcept { return cache_size_; }
  NodeSet cache() const;
  std::vector<std::int64_t> counters() const;

  /// Null for the naive backend.
  const FastIndex* index() const noexcept { return index_ ? &*index_ : nullptr; }
  /// Index operations spent on the most recent request.
  std::uint64_t last_decision_ops() const noexcept { return last_ops_; }

 private:
  struct Slot {
    std::int64_t counter = 0;
    std::uint32_t epoch = 0;
    bool cached = false;
  };
  Slot view(NodeId v) const {
    return slots_[v].epoch == epoch_ ? slots_[v] : Slot{0, epoch_, false};
  }
  Slot& at(NodeId v) {
    if (slots_[v].epoch != epoch_) slots_[v] = Slot{0, epoch_, false};
    return slots_[v];
  }

  std::optional<Changeset> decide(const Request& req);
  void check_applied(const Changeset& x, const Request& req) const;
  void check_no_saturated_changeset() const;

  std::shared_ptr<const TreeTopology> topo_;
  EngineConfig config_;
  std::uint64_t round_ = 0;
  std::uint32_t epoch_ = 1;
  std::vector<Slot> slots_;
  std::size_t cache_size_ = 0;
  CostLedger ledger_;
  std::optional<FastIndex> index_;
  std::uint64_t last_ops_ = 0;
};

struct RunResult {
  CostLedger ledger;
  std::vector<StepReport> steps;
};

RunResult run_trace(Engine& engine, const Trace& trace);

}  // namespace treecache
