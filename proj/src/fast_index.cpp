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

#include "treecache/fast_index.hpp"

#include <algorithm>
#include <string>

namespace treecache {

FastIndex::FastIndex(const TreeTopology& topo, std::int64_t alpha)
    : topo_(&topo),
      alpha_(alpha),
      scale_(static_cast<std::int64_t>(topo.size()) + 1),
      slots_(topo.size()) {
  if (alpha < 1) throw InvalidInput("alpha must be >= 1");
}

FastIndex::Slot FastIndex::fresh(NodeId v) const {
  Slot s;
  s.agg_size = topo_->subtree_size(v);
  s.epoch = epoch_;
  return s;
}

FastIndex FastIndex::from_state(const TreeTopology& topo, std::int64_t alpha, const NodeSet& cache,
                                std::span<const std::int64_t> counters) {
  if (counters.size() != topo.size()) throw InvalidInput("counter vector size mismatch");
  if (!is_subforest(topo, cache)) {
    throw ContractViolation("cache " + cache.to_string() + " is not a subforest");
  }
  FastIndex idx(topo, alpha);
  const auto order = topo.preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId u = *it;
    Slot& s = idx.at(u);
    s.cached = cache.contains(u);
    s.counter = counters[u];
    if (s.cached) {
      s.child_sum = 0;
      for (NodeId w : topo.children(u)) s.child_sum += std::max<std::int64_t>(idx.slots_[w].scaled_val, 0);
      s.scaled_val = idx.base_val(s.counter) + s.child_sum;
    } else {
      s.agg_cnt = s.counter;
      s.agg_size = 1;
      for (NodeId w : topo.children(u)) {
        if (!idx.slots_[w].cached) {
          s.agg_cnt += idx.slots_[w].agg_cnt;
          s.agg_size += idx.slots_[w].agg_size;
        }
      }
    }
  }
  idx.ops_ = 0;
  return idx;
}

void FastIndex::on_charged_request(NodeId v, Sign sign) {
  topo_->check_node(v);
  Slot& s = at(v);
  if ((sign == Sign::kPositive) == s.cached) {
    throw ContractViolation("request at node " + std::to_string(v) +
                            " is not chargeable for its cache status");
  }
  ++s.counter;
  if (sign == Sign::kPositive) {
    // Every ancestor of a non-cached node is non-cached and has v in its P set.
    for (NodeId u = v; u != kNoNode; u = topo_->parent(u)) {
      ++ops_;
      ++at(u).agg_cnt;
    }
    return;
  }
  std::int64_t old_val = s.scaled_val;
  s.scaled_val += scale_;
  ++ops_;
  NodeId u = v;
  while (topo_->parent(u) != kNoNode) {
    const NodeId p = topo_->parent(u);
    Slot& ps = at(p);
    if (!ps.cached) break;
    ++ops_;
    const std::int64_t delta =
        std::max<std::int64_t>(at(u).scaled_val, 0) - std::max<std::int64_t>(old_val, 0);
    if (delta == 0) break;
    old_val = ps.scaled_val;
    ps.child_sum += delta;
    ps.scaled_val += delta;
    u = p;
  }
}

void FastIndex::on_cache_change(const NodeSet& x, Sign sign) {
  if (x.empty()) return;
  std::vector<NodeId> order(x.begin(), x.end());
  for (NodeId v : order) topo_->check_node(v);
  if (sign == Sign::kPositive) {
    fetch(order);
  } else {
    evict(order);
  }
}

void FastIndex::fetch(std::vector<NodeId>& order) {
  // Furthest from the root first, so children are in place before their parent.
  std::sort(order.begin(), order.end(),
            [&](NodeId a, NodeId b) { return topo_->depth(a) > topo_->depth(b); });
  ops_ += order.size();

  // Each component of a valid fetch is exactly P(top); its aggregates leave every ancestor.
  std::int64_t covered = 0;
  for (NodeId v : order) {
    if (at(v).cached) throw ContractViolation("fetch of cached node " + std::to_string(v));
  }
  // Tops are members whose parent is not a member.
  std::vector<NodeId> sorted_members(order.begin(), order.end());
  std::sort(sorted_members.begin(), sorted_members.end());
  auto member = [&](NodeId u) {
    return std::binary_search(sorted_members.begin(), sorted_members.end(), u);
  };
  for (NodeId t : order) {
    const NodeId p = topo_->parent(t);
    if (p != kNoNode && member(p)) continue;
    const std::int64_t size = at(t).agg_size;
    const std::int64_t cnt = at(t).agg_cnt;
    covered += size;
    for (NodeId u = p; u != kNoNode; u = topo_->parent(u)) {
      ++ops_;
      Slot& us = at(u);
      us.agg_size -= size;
      us.agg_cnt -= cnt;
    }
  }
  if (covered != static_cast<std::int64_t>(order.size())) {
    throw ContractViolation("fetched set is not a valid positive changeset");
  }

  for (NodeId v : order) {
    Slot& s = at(v);
    s.cached = true;
    s.counter = 0;
    s.child_sum = 0;
    for (NodeId w : topo_->children(v)) {
      ++ops_;
      const Slot& ws = at(w);
      if (!ws.cached) throw ContractViolation("fetched set is not a valid positive changeset");
      s.child_sum += std::max<std::int64_t>(ws.scaled_val, 0);
    }
    s.scaled_val = base_val(0) + s.child_sum;
  }
}

void FastIndex::evict(std::vector<NodeId>& order) {
  // Closest to the root first: a node's cached ancestors are gone before it leaves.
  std::sort(order.begin(), order.end(),
            [&](NodeId a, NodeId b) { return topo_->depth(a) < topo_->depth(b); });
  ops_ += order.size();
  for (NodeId v : order) {
    Slot& s = at(v);
    if (!s.cached) throw ContractViolation("eviction of non-cached node " + std::to_string(v));
    const NodeId p = topo_->parent(v);
    if (p != kNoNode && at(p).cached) {
      throw ContractViolation("evicted set is not a valid negative changeset");
    }
    s.cached = false;
    s.counter = 0;
  }
  // P aggregates bottom-up; the only non-cached children are fellow members.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Slot& s = at(*it);
    s.agg_cnt = 0;
    s.agg_size = 1;
    for (NodeId w : topo_->children(*it)) {
      ++ops_;
      const Slot& ws = at(w);
      if (!ws.cached) {
        s.agg_cnt += ws.agg_cnt;
        s.agg_size += ws.agg_size;
      }
    }
  }
  std::vector<NodeId> sorted_members(order.begin(), order.end());
  std::sort(sorted_members.begin(), sorted_members.end());
  for (NodeId t : order) {
    const NodeId p = topo_->parent(t);
    if (p == kNoNode || std::binary_search(sorted_members.begin(), sorted_members.end(), p)) continue;
    const std::int64_t size = at(t).agg_size;
    const std::int64_t cnt = at(t).agg_cnt;
    for (NodeId u = p; u != kNoNode; u = topo_->parent(u)) {
      ++ops_;
      Slot& us = at(u);
      us.agg_size += size;
      us.agg_cnt += cnt;
    }
  }
}

void FastIndex::on_phase_reset() {
  ++ops_;
  ++epoch_;
  if (epoch_ == 0) {
    // Wrapped: stamp everything explicitly once.
    for (NodeId v = 0; v < slots_.size(); ++v) slots_[v] = fresh(v);
  }
}

std::optional<NodeSet> FastIndex::find_positive_candidate(NodeId v) {
  topo_->check_node(v);
  if (at(v).cached) throw ContractViolation("positive candidate requested for cached node");
  scratch_.clear();
  for (NodeId u = v; u != kNoNode; u = topo_->parent(u)) {
    ++ops_;
    scratch_.push_back(u);
  }
  NodeId top = kNoNode;
  for (auto it = scratch_.rbegin(); it != scratch_.rend(); ++it) {
    ++ops_;
    const Slot& s = at(*it);
    if (s.agg_cnt >= s.agg_size * alpha_) {
      top = *it;
      break;
    }
  }
  if (top == kNoNode) return std::nullopt;

  std::vector<NodeId> out;
  scratch_.assign(1, top);
  while (!scratch_.empty()) {
    const NodeId u = scratch_.back();
    scratch_.pop_back();
    ++ops_;
    out.push_back(u);
    for (NodeId w : topo_->children(u)) {
      ++ops_;
      if (!at(w).cached) scratch_.push_back(w);
    }
  }
  return NodeSet(std::move(out));
}

std::optional<NodeSet> FastIndex::find_negative_candidate(NodeId v) {
  topo_->check_node(v);
  if (!at(v).cached) throw ContractViolation("negative candidate requested for non-cached node");
  NodeId top = v;
  ++ops_;
  while (topo_->parent(top) != kNoNode && at(topo_->parent(top)).cached) {
    ++ops_;
    top = topo_->parent(top);
  }
  const std::int64_t val = at(top).scaled_val;
  if (val == 0) {
    throw InvariantViolation("scaled value of cached-tree root " + std::to_string(top) + " is zero");
  }
  if (val < 0) return std::nullopt;

  std::vector<NodeId> out;
  scratch_.assign(1, top);
  while (!scratch_.empty()) {
    const NodeId u = scratch_.back();
    scratch_.pop_back();
    ++ops_;
    out.push_back(u);
    for (NodeId w : topo_->children(u)) {
      ++ops_;
      if (at(w).scaled_val > 0) scratch_.push_back(w);
    }
  }
  return NodeSet(std::move(out));
}

void FastIndex::check_consistency() const {
  const std::size_t n = topo_->size();
  std::vector<std::int64_t> cnt(n), size(n), val(n);
  std::vector<char> cached(n);
  const auto order = topo_->preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId u = *it;
    const Slot s = view(u);
    cached[u] = s.cached;
    if (s.cached) {
      std::int64_t sum = 0;
      for (NodeId w : topo_->children(u)) {
        if (!cached[w]) {
          throw InvariantViolation("cache is not a subforest at node " + std::to_string(u));
        }
        sum += std::max<std::int64_t>(val[w], 0);
      }
      val[u] = base_val(s.counter) + sum;
      if (val[u] != s.scaled_val || sum != s.child_sum) {
        throw InvariantViolation("scaled value mismatch at node " + std::to_string(u) + ": stored " +
                                 std::to_string(s.scaled_val) + ", recomputed " +
                                 std::to_string(val[u]));
      }
    } else {
      cnt[u] = s.counter;
      size[u] = 1;
      for (NodeId w : topo_->children(u)) {
        if (!cached[w]) {
          cnt[u] += cnt[w];
          size[u] += size[w];
        }
      }
      if (cnt[u] != s.agg_cnt || size[u] != s.agg_size) {
        throw InvariantViolation("positive aggregate mismatch at node " + std::to_string(u) +
                                 ": stored (" + std::to_string(s.agg_cnt) + "," +
                                 std::to_string(s.agg_size) + "), recomputed (" +
                                 std::to_string(cnt[u]) + "," + std::to_string(size[u]) + ")");
      }
    }
  }
}

}  // namespace treecache
