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

// Bitmask helpers for the exhaustive (small-tree) code paths.

#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "treecache/tree.hpp"

namespace treecache::detail {

using Mask = std::uint64_t;

inline constexpr std::size_t kMaxMaskNodes = 64;

inline constexpr Mask bit(NodeId v) { return Mask{1} << v; }

inline Mask full_mask(std::size_t n) { return n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1; }

inline Mask to_mask(const NodeSet& s) {
  Mask m = 0;
  for (NodeId v : s) m |= bit(v);
  return m;
}

inline NodeSet to_node_set(Mask m) {
  std::vector<NodeId> ids;
  ids.reserve(static_cast<std::size_t>(std::popcount(m)));
  while (m) {
    ids.push_back(static_cast<NodeId>(std::countr_zero(m)));
    m &= m - 1;
  }
  return NodeSet::from_sorted_unique(std::move(ids));
}

template <typename F>
inline void for_each_bit(Mask m, F&& f) {
  while (m) {
    f(static_cast<NodeId>(std::countr_zero(m)));
    m &= m - 1;
  }
}

/// Subforest test over masks; dense lookup table for n <= 16.
class SubforestTable {
 public:
  explicit SubforestTable(const TreeTopology& topo) : n_(topo.size()), child_mask_(topo.size(), 0) {
    for (NodeId v = 0; v < n_; ++v) {
      for (NodeId c : topo.children(v)) child_mask_[v] |= bit(c);
    }
    if (n_ <= 16) {
      dense_.resize(std::size_t{1} << n_);
      for (Mask m = 0; m < dense_.size(); ++m) dense_[m] = slow(m);
    }
  }

  bool is_subforest(Mask m) const { return dense_.empty() ? slow(m) : dense_[m] != 0; }
  Mask child_mask(NodeId v) const { return child_mask_[v]; }

 private:
  bool slow(Mask m) const {
    Mask rest = m;
    while (rest) {
      const auto v = static_cast<NodeId>(std::countr_zero(rest));
      if ((child_mask_[v] & m) != child_mask_[v]) return false;
      rest &= rest - 1;
    }
    return true;
  }

  std::size_t n_;
  std::vector<Mask> child_mask_;
  std::vector<std::uint8_t> dense_;
};

// All caps rooted at `u` drawn from `allowed`; nodes flagged in `forced` must be present.
inline void caps_rooted_at(const TreeTopology& topo, NodeId u, Mask allowed, Mask forced,
                    std::vector<Mask>& out) {
  std::vector<Mask> acc{bit(u)};
  for (NodeId c : topo.children(u)) {
    if (!(allowed & bit(c))) continue;
    std::vector<Mask> sub;
    caps_rooted_at(topo, c, allowed, forced, sub);
    const bool must = (forced & bit(c)) != 0;
    std::vector<Mask> next;
    next.reserve(acc.size() * (sub.size() + 1));
    for (Mask a : acc) {
      if (!must) next.push_back(a);
      for (Mask s : sub) next.push_back(a | s);
    }
    acc.swap(next);
  }
  out.insert(out.end(), acc.begin(), acc.end());
}

}  // namespace treecache::detail
