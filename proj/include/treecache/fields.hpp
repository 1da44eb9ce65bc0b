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
 * @file fields.hpp
 * @brief Event-space instrumentation of an engine run.
 *
 * The (node, round) slots of a phase are partitioned into fields: applying
 * changeset X at time t closes the field holding, for every v in X, the slots
 * (v, r) with last_v(t) < r <= t, where last_v(t) is the previous time v
 * flipped state (or the phase start). Whatever is left over is the open field.
 * A phase that ends in a final eviction closes one more positive field for the
 * fetch that did not fit ("artificial" fetch).
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "treecache/engine.hpp"
#include "treecache/tree.hpp"

namespace treecache {

enum class FieldKind : std::uint8_t { kPositive, kNegative, kOpen };

const char* to_string(FieldKind k);

struct FieldMember {
  NodeId node = 0;
  std::uint64_t first = 0;  ///< first round of the member's slots
  std::uint64_t last = 0;   ///< last round (the field's end time)
  std::vector<std::uint64_t> positive_rounds;  ///< charged positive requests inside the slots
  std::vector<std::uint64_t> negative_rounds;  ///< charged negative requests inside the slots

  std::int64_t req() const {
    return static_cast<std::int64_t>(positive_rounds.size() + negative_rounds.size());
  }
};

struct FieldRecord {
  std::uint64_t end_time = 0;
  FieldKind kind = FieldKind::kOpen;
  bool artificial = false;  ///< the overflowing fetch at a final eviction
  std::vector<FieldMember> members;

  std::int64_t req() const;
  std::size_t size() const { return members.size(); }
  NodeSet nodes() const;
};

struct PhaseRecord {
  std::uint64_t phase_index = 1;
  std::uint64_t begin = 0;
  std::uint64_t end = 0;
  bool finished = false;
  std::vector<FieldRecord> fields;
  FieldRecord open_field;
  std::size_t k_p = 0;
  std::int64_t tc_cost = 0;  ///< serve + move cost charged inside the phase
  std::int64_t charged_requests = 0;
};

/// Replays `trace` and reconstructs the fields of every phase.
std::vector<PhaseRecord> build_fields(const TreeTopology& topo, const EngineConfig& config,
                                      const Trace& trace);

/// One assertion class: how many instances were checked and the first failure.
struct CheckResult {
  std::string name;
  std::uint64_t checked = 0;
  std::uint64_t failed = 0;
  std::optional<std::string> first_counterexample;

  bool passed() const { return failed == 0; }
  void record(bool ok, const std::string& counterexample);
};

struct CheckReport {
  std::vector<CheckResult> results;

  bool passed() const;
  const CheckResult* find(const std::string& name) const;
  void merge(const CheckReport& other);
};

/// Per closed field: req = size * alpha and sign purity. Per phase: the field cost bound
/// TC(P) <= 2 * alpha * size(closed fields) + req(open field) + k_P * alpha, and that the
/// fields partition the charged requests.
CheckReport check_field_invariants(const std::vector<PhaseRecord>& phases, std::int64_t alpha);

inline constexpr std::size_t kOverRequestedLimit = 12;

/// Every prefix snapshot of a negative field restricted to a tree cap of its changeset,
/// and of a positive field restricted to a subtree T(u), holds at most size * alpha
/// requests. Positive snapshots are checked only when they form a valid fetch for the
/// cache at that time; other snapshots are not bounded. Also checks the density consequences at the field's end time.
/// Throws SizeLimit above kOverRequestedLimit nodes.
CheckReport check_not_over_requested(const TreeTopology& topo,
                                     const std::vector<PhaseRecord>& phases, std::int64_t alpha);
CheckReport check_not_over_requested(const TreeTopology& topo, const EngineConfig& config,
                                     const Trace& trace);

}  // namespace treecache
