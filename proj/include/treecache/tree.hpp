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
 * @file tree.hpp
 * @brief Rooted-tree topology, node sets and the set-validity predicates
 *        (subforest, tree cap, valid changeset) shared by the whole library.
 */

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "treecache/error.hpp"

namespace treecache {

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

enum class Sign : std::uint8_t { kPositive, kNegative };

inline char sign_char(Sign s) { return s == Sign::kPositive ? '+' : '-'; }

struct Request {
  NodeId node = 0;
  Sign sign = Sign::kPositive;

  friend bool operator==(const Request&, const Request&) = default;
};

using Trace = std::vector<Request>;

/// Immutable rooted tree over dense ids 0..size()-1.
class TreeTopology {
 public:
  /// Builds a tree from a parent array; exactly one entry must be -1 (the root).
  static TreeTopology from_parents(std::span<const std::int64_t> parents);

  std::size_t size() const noexcept { return parent_.size(); }
  NodeId root() const noexcept { return root_; }
  NodeId parent(NodeId v) const { return parent_[v]; }
  std::span<const NodeId> children(NodeId v) const {
    return {child_list_.data() + child_begin_[v], child_begin_[v + 1] - child_begin_[v]};
  }
  std::uint32_t depth(NodeId v) const { return depth_[v]; }
  std::uint32_t subtree_size(NodeId v) const { return subtree_size_[v]; }

  /// Number of nodes on the longest root-leaf path.
  std::uint32_t height() const noexcept { return height_; }
  std::uint32_t max_degree() const noexcept { return max_degree_; }

  /// True iff `a` lies on the path from `d` to the root (a node is its own ancestor).
  bool is_ancestor(NodeId a, NodeId d) const {
    return tin_[a] <= tin_[d] && tin_[d] < tin_[a] + subtree_size_[a];
  }

  /// Nodes in DFS preorder; every parent precedes its children.
  std::span<const NodeId> preorder() const noexcept { return preorder_; }

  bool contains(NodeId v) const noexcept { return v < size(); }
  /// Throws InvalidInput when `v` is not a node of this tree.
  void check_node(NodeId v) const;

  std::vector<std::int64_t> parent_array() const;

 private:
  TreeTopology() = default;

  NodeId root_ = 0;
  std::vector<NodeId> parent_;
  std::vector<std::uint32_t> child_begin_;
  std::vector<NodeId> child_list_;
  std::vector<std::uint32_t> depth_;
  std::vector<std::uint32_t> subtree_size_;
  std::vector<std::uint32_t> tin_;
  std::vector<NodeId> preorder_;
  std::uint32_t height_ = 0;
  std::uint32_t max_degree_ = 0;
};

/// A set of nodes kept sorted by id so iteration and comparison are deterministic.
class NodeSet {
 public:
  NodeSet() = default;
  NodeSet(std::initializer_list<NodeId> ids);
  explicit NodeSet(std::vector<NodeId> ids);

  static NodeSet from_sorted_unique(std::vector<NodeId> ids);

  bool contains(NodeId v) const;
  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  void insert(NodeId v);

  auto begin() const noexcept { return ids_.begin(); }
  auto end() const noexcept { return ids_.end(); }
  const std::vector<NodeId>& ids() const noexcept { return ids_; }

  std::string to_string() const;

  friend bool operator==(const NodeSet&, const NodeSet&) = default;
  friend auto operator<=>(const NodeSet& a, const NodeSet& b) = default;

 private:
  std::vector<NodeId> ids_;
};

NodeSet set_union(const NodeSet& a, const NodeSet& b);
NodeSet set_difference(const NodeSet& a, const NodeSet& b);
bool disjoint(const NodeSet& a, const NodeSet& b);
bool is_subset(const NodeSet& sub, const NodeSet& super);

/// Deterministic ordering used for every list of sets: by size, then lexicographically.
bool size_then_lex_less(const NodeSet& a, const NodeSet& b);

/// Every child of a member is a member.
bool is_subforest(const TreeTopology& topo, const NodeSet& s);

/// `s` contains `v`, lies inside T(v), and holds the whole v-to-u path for each member u.
bool is_tree_cap(const TreeTopology& topo, const NodeSet& s, NodeId v);

/// Whether `x` may be fetched (positive) or evicted (negative) wholesale from `cache`.
/// Throws ContractViolation if `cache` itself is not a subforest.
bool validate_changeset(const TreeTopology& topo, const NodeSet& cache, const NodeSet& x,
                        Sign sign);

inline constexpr std::size_t kDefaultEnumerationLimit = 20;

/// All valid changesets of `sign` that contain `must_contain` and are single tree caps:
/// positive ones are caps of non-cached nodes rooted at an ancestor of `must_contain`;
/// negative ones are caps of the cached tree holding `must_contain`, rooted at its root.
/// Sorted with size_then_lex_less. Throws SizeLimit when the tree exceeds `max_nodes`.
std::vector<NodeSet> enumerate_valid_changesets(const TreeTopology& topo, const NodeSet& cache,
                                                Sign sign, NodeId must_contain,
                                                std::size_t max_nodes = kDefaultEnumerationLimit);

/// Power-set reference for the above (|T| <= 20); used to cross-check the cap enumeration.
std::vector<NodeSet> enumerate_valid_changesets_bruteforce(const TreeTopology& topo,
                                                           const NodeSet& cache, Sign sign,
                                                           NodeId must_contain);

}  // namespace treecache
