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

#include "treecache/tree.hpp"

#include <algorithm>
#include <sstream>

#include "mask.hpp"

namespace treecache {

TreeTopology TreeTopology::from_parents(std::span<const std::int64_t> parents) {
  const std::size_t n = parents.size();
  if (n == 0) throw InvalidInput("tree must have at least one node");
  if (n >= kNoNode) throw InvalidInput("tree too large");

  TreeTopology t;
  t.parent_.assign(n, kNoNode);
  std::size_t roots = 0;
  for (std::size_t v = 0; v < n; ++v) {
    const std::int64_t p = parents[v];
    if (p == -1) {
      ++roots;
      t.root_ = static_cast<NodeId>(v);
      continue;
    }
    if (p < 0 || static_cast<std::size_t>(p) >= n) {
      throw InvalidInput("parent of node " + std::to_string(v) + " out of range: " +
                         std::to_string(p));
    }
    if (static_cast<std::size_t>(p) == v) {
      throw InvalidInput("node " + std::to_string(v) + " is its own parent");
    }
    t.parent_[v] = static_cast<NodeId>(p);
  }
  if (roots != 1) {
    throw InvalidInput("tree must have exactly one root, found " + std::to_string(roots));
  }

  // Children in CSR form, ordered by id.
  t.child_begin_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) {
    if (t.parent_[v] != kNoNode) ++t.child_begin_[t.parent_[v] + 1];
  }
  for (std::size_t v = 0; v < n; ++v) t.child_begin_[v + 1] += t.child_begin_[v];
  t.child_list_.resize(n - 1);
  std::vector<std::uint32_t> fill(t.child_begin_.begin(), t.child_begin_.end() - 1);
  for (std::size_t v = 0; v < n; ++v) {
    if (t.parent_[v] != kNoNode) t.child_list_[fill[t.parent_[v]]++] = static_cast<NodeId>(v);
  }

  // Iterative DFS from the root; anything unreached sits on a cycle.
  t.depth_.assign(n, 0);
  t.subtree_size_.assign(n, 1);
  t.tin_.assign(n, 0);
  t.preorder_.reserve(n);
  std::vector<NodeId> stack{t.root_};
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    t.tin_[v] = static_cast<std::uint32_t>(t.preorder_.size());
    t.preorder_.push_back(v);
    const auto ch = t.children(v);
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) {
      t.depth_[*it] = t.depth_[v] + 1;
      stack.push_back(*it);
    }
  }
  if (t.preorder_.size() != n) {
    throw InvalidInput("parent array contains a cycle (" + std::to_string(n - t.preorder_.size()) +
                       " nodes unreachable from the root)");
  }
  for (auto it = t.preorder_.rbegin(); it != t.preorder_.rend(); ++it) {
    if (t.parent_[*it] != kNoNode) t.subtree_size_[t.parent_[*it]] += t.subtree_size_[*it];
  }
  for (std::size_t v = 0; v < n; ++v) {
    t.height_ = std::max(t.height_, t.depth_[v] + 1);
    t.max_degree_ =
        std::max(t.max_degree_, static_cast<std::uint32_t>(t.children(static_cast<NodeId>(v)).size()));
  }
  return t;
}

void TreeTopology::check_node(NodeId v) const {
  if (!contains(v)) {
    throw InvalidInput("node id " + std::to_string(v) + " out of range (tree has " +
                       std::to_string(size()) + " nodes)");
  }
}

std::vector<std::int64_t> TreeTopology::parent_array() const {
  std::vector<std::int64_t> out(size());
  for (std::size_t v = 0; v < size(); ++v) {
    out[v] = parent_[v] == kNoNode ? -1 : static_cast<std::int64_t>(parent_[v]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// NodeSet

NodeSet::NodeSet(std::initializer_list<NodeId> ids) : NodeSet(std::vector<NodeId>(ids)) {}

NodeSet::NodeSet(std::vector<NodeId> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

NodeSet NodeSet::from_sorted_unique(std::vector<NodeId> ids) {
  NodeSet s;
  s.ids_ = std::move(ids);
  return s;
}

bool NodeSet::contains(NodeId v) const { return std::binary_search(ids_.begin(), ids_.end(), v); }

void NodeSet::insert(NodeId v) {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
  if (it == ids_.end() || *it != v) ids_.insert(it, v);
}

std::string NodeSet::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < ids_.size(); ++i) os << (i ? "," : "") << ids_[i];
  os << '}';
  return os.str();
}

NodeSet set_union(const NodeSet& a, const NodeSet& b) {
  std::vector<NodeId> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return NodeSet::from_sorted_unique(std::move(out));
}

NodeSet set_difference(const NodeSet& a, const NodeSet& b) {
  std::vector<NodeId> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return NodeSet::from_sorted_unique(std::move(out));
}

bool disjoint(const NodeSet& a, const NodeSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return false;
    if (*i < *j) ++i; else ++j;
  }
  return true;
}

bool is_subset(const NodeSet& sub, const NodeSet& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

bool size_then_lex_less(const NodeSet& a, const NodeSet& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

// ---------------------------------------------------------------------------
// Predicates

namespace {

std::vector<char> membership(const TreeTopology& topo, const NodeSet& s) {
  std::vector<char> in(topo.size(), 0);
  for (NodeId v : s) {
    topo.check_node(v);
    in[v] = 1;
  }
  return in;
}

}  // namespace

bool is_subforest(const TreeTopology& topo, const NodeSet& s) {
  const auto in = membership(topo, s);
  for (NodeId v : s) {
    for (NodeId c : topo.children(v)) {
      if (!in[c]) return false;
    }
  }
  return true;
}

bool is_tree_cap(const TreeTopology& topo, const NodeSet& s, NodeId v) {
  topo.check_node(v);
  const auto in = membership(topo, s);
  if (!in[v]) return false;
  for (NodeId u : s) {
    if (!topo.is_ancestor(v, u)) return false;
    if (u != v && !in[topo.parent(u)]) return false;
  }
  return true;
}

bool validate_changeset(const TreeTopology& topo, const NodeSet& cache, const NodeSet& x,
                        Sign sign) {
  if (!is_subforest(topo, cache)) {
    throw ContractViolation("cache " + cache.to_string() + " is not a subforest");
  }
  for (NodeId v : x) topo.check_node(v);
  if (x.empty()) return false;
  if (sign == Sign::kPositive) {
    return disjoint(x, cache) && is_subforest(topo, set_union(cache, x));
  }
  return is_subset(x, cache) && is_subforest(topo, set_difference(cache, x));
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

std::vector<NodeSet> sorted_sets(std::vector<detail::Mask> masks) {
  std::vector<NodeSet> out;
  out.reserve(masks.size());
  for (detail::Mask m : masks) out.push_back(detail::to_node_set(m));
  std::sort(out.begin(), out.end(), size_then_lex_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::vector<NodeSet> enumerate_valid_changesets(const TreeTopology& topo, const NodeSet& cache,
                                                Sign sign, NodeId must_contain,
                                                std::size_t max_nodes) {
  const std::size_t limit = std::min<std::size_t>(max_nodes, detail::kMaxMaskNodes);
  if (topo.size() > limit) {
    throw SizeLimit("changeset enumeration limited to " + std::to_string(limit) + " nodes, tree has " +
                        std::to_string(topo.size()),
                    topo.size());
  }
  topo.check_node(must_contain);
  if (!is_subforest(topo, cache)) {
    throw ContractViolation("cache " + cache.to_string() + " is not a subforest");
  }
  const detail::SubforestTable table(topo);
  const detail::Mask c = detail::to_mask(cache);
  const detail::Mask all = detail::full_mask(topo.size());
  const bool cached = (c & detail::bit(must_contain)) != 0;

  std::vector<detail::Mask> masks;
  if (sign == Sign::kPositive) {
    if (cached) return {};
    // Forced path grows as the cap root moves up towards the tree root.
    detail::Mask forced = 0;
    for (NodeId u = must_contain; u != kNoNode; u = topo.parent(u)) {
      forced |= detail::bit(u);
      std::vector<detail::Mask> caps;
      detail::caps_rooted_at(topo, u, all & ~c, forced, caps);
      for (detail::Mask x : caps) {
        if (table.is_subforest(c | x)) masks.push_back(x);
      }
    }
  } else {
    if (!cached) return {};
    NodeId top = must_contain;
    detail::Mask forced = detail::bit(top);
    while (topo.parent(top) != kNoNode && (c & detail::bit(topo.parent(top)))) {
      top = topo.parent(top);
      forced |= detail::bit(top);
    }
    std::vector<detail::Mask> caps;
    detail::caps_rooted_at(topo, top, c, forced, caps);
    for (detail::Mask x : caps) {
      if (table.is_subforest(c & ~x)) masks.push_back(x);
    }
  }
  return sorted_sets(std::move(masks));
}

std::vector<NodeSet> enumerate_valid_changesets_bruteforce(const TreeTopology& topo,
                                                           const NodeSet& cache, Sign sign,
                                                           NodeId must_contain) {
  if (topo.size() > 20) throw SizeLimit("power-set enumeration limited to 20 nodes", topo.size());
  topo.check_node(must_contain);
  const std::size_t n = topo.size();
  std::vector<detail::Mask> masks;
  for (detail::Mask x = 1; x < (detail::Mask{1} << n); ++x) {
    if (!(x & detail::bit(must_contain))) continue;
    const NodeSet xs = detail::to_node_set(x);
    if (!validate_changeset(topo, cache, xs, sign)) continue;
    // Single tree cap: exactly one member lacks its parent in the set.
    NodeId top = kNoNode;
    std::size_t tops = 0;
    for (NodeId v : xs) {
      if (topo.parent(v) == kNoNode || !(x & detail::bit(topo.parent(v)))) {
        top = v;
        ++tops;
      }
    }
    if (tops == 1 && is_tree_cap(topo, xs, top)) masks.push_back(x);
  }
  return sorted_sets(std::move(masks));
}

}  // namespace treecache
