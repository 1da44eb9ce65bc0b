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

#include "treecache/opt.hpp"

#include <algorithm>
#include <limits>
#include <memory>
#include <string>
#include <unordered_map>

#include "treecache/engine.hpp"

namespace treecache {

std::uint64_t count_subforests(const TreeTopology& topo, std::size_t k, std::uint64_t cap) {
  const std::uint64_t sat = cap + 1;
  auto add = [sat](std::uint64_t a, std::uint64_t b) { return std::min(sat, a + b); };
  auto mul = [sat](std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return std::uint64_t{0};
    return a > sat / b ? sat : std::min(sat, a * b);
  };
  std::vector<std::vector<std::uint64_t>> f(topo.size());
  const auto order = topo.preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId v = *it;
    std::vector<std::uint64_t> acc{1};
    for (NodeId c : topo.children(v)) {
      std::vector<std::uint64_t> next(std::min(k, acc.size() - 1 + f[c].size() - 1) + 1, 0);
      for (std::size_t i = 0; i < acc.size(); ++i) {
        for (std::size_t j = 0; j < f[c].size() && i + j <= k; ++j) {
          next[i + j] = add(next[i + j], mul(acc[i], f[c][j]));
        }
      }
      acc.swap(next);
      f[c].clear();
      f[c].shrink_to_fit();
    }
    const std::size_t whole = topo.subtree_size(v);
    if (whole <= k) {
      if (acc.size() <= whole) acc.resize(whole + 1, 0);
      acc[whole] = add(acc[whole], 1);
    }
    f[v] = std::move(acc);
  }
  std::uint64_t total = 0;
  for (std::uint64_t c : f[topo.root()]) total = add(total, c);
  return total;
}

std::vector<NodeSet> enumerate_subforests(const TreeTopology& topo, std::size_t k,
                                          std::size_t limit) {
  const std::uint64_t count = count_subforests(topo, k, limit);
  if (count > limit) {
    throw SizeLimit("subforest state space exceeds " + std::to_string(limit) + " states", count);
  }
  // Descendant-closed subsets of T(v): the whole subtree, or a combination over children.
  std::vector<std::vector<std::vector<NodeId>>> lists(topo.size());
  const auto order = topo.preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId v = *it;
    std::vector<std::vector<NodeId>> acc{{}};
    for (NodeId c : topo.children(v)) {
      std::vector<std::vector<NodeId>> next;
      for (const auto& a : acc) {
        for (const auto& b : lists[c]) {
          if (a.size() + b.size() > k) continue;
          auto merged = a;
          merged.insert(merged.end(), b.begin(), b.end());
          next.push_back(std::move(merged));
        }
      }
      acc.swap(next);
      lists[c].clear();
      lists[c].shrink_to_fit();
    }
    if (topo.subtree_size(v) <= k) {
      std::vector<NodeId> whole;
      std::vector<NodeId> stack{v};
      while (!stack.empty()) {
        const NodeId u = stack.back();
        stack.pop_back();
        whole.push_back(u);
        for (NodeId w : topo.children(u)) stack.push_back(w);
      }
      acc.push_back(std::move(whole));
    }
    lists[v] = std::move(acc);
  }
  std::vector<NodeSet> out;
  out.reserve(lists[topo.root()].size());
  for (auto& ids : lists[topo.root()]) out.emplace_back(std::move(ids));
  std::sort(out.begin(), out.end(), size_then_lex_less);
  return out;
}

namespace {

struct StateSpace {
  std::size_t words = 0;
  std::vector<NodeSet> states;
  std::vector<std::uint64_t> bits;  // states.size() * words
  std::unordered_map<std::string, std::int32_t> index;
  // Per node, (without, with) pairs of state indices differing only in that node.
  std::vector<std::vector<std::pair<std::int32_t, std::int32_t>>> edges;
  std::vector<NodeId> evict_order;  // ascending depth

  bool contains(std::size_t s, NodeId v) const {
    return (bits[s * words + v / 64] >> (v % 64)) & 1U;
  }
  std::string key(const NodeSet& s) const {
    std::string k(words * sizeof(std::uint64_t), '\0');
    auto* w = reinterpret_cast<std::uint64_t*>(k.data());
    for (NodeId v : s) w[v / 64] |= std::uint64_t{1} << (v % 64);
    return k;
  }
  std::int32_t find(const NodeSet& s) const {
    auto it = index.find(key(s));
    return it == index.end() ? -1 : it->second;
  }
};

StateSpace build_states(const TreeTopology& topo, std::size_t k, std::size_t limit) {
  StateSpace sp;
  sp.words = (topo.size() + 63) / 64;
  sp.states = enumerate_subforests(topo, k, limit);
  sp.bits.assign(sp.states.size() * sp.words, 0);
  for (std::size_t i = 0; i < sp.states.size(); ++i) {
    for (NodeId v : sp.states[i]) sp.bits[i * sp.words + v / 64] |= std::uint64_t{1} << (v % 64);
    sp.index.emplace(sp.key(sp.states[i]), static_cast<std::int32_t>(i));
  }
  sp.edges.resize(topo.size());
  for (std::size_t i = 0; i < sp.states.size(); ++i) {
    // Removable members are cached-tree roots; the neighbour must also be a state.
    for (NodeId v : sp.states[i]) {
      const NodeId p = topo.parent(v);
      if (p != kNoNode && sp.contains(i, p)) continue;
      std::vector<NodeId> ids;
      ids.reserve(sp.states[i].size() - 1);
      for (NodeId u : sp.states[i]) {
        if (u != v) ids.push_back(u);
      }
      const std::int32_t j = sp.find(NodeSet::from_sorted_unique(std::move(ids)));
      if (j >= 0) sp.edges[v].emplace_back(j, static_cast<std::int32_t>(i));
    }
  }
  sp.evict_order.assign(topo.preorder().begin(), topo.preorder().end());
  std::stable_sort(sp.evict_order.begin(), sp.evict_order.end(),
                   [&](NodeId a, NodeId b) { return topo.depth(a) < topo.depth(b); });
  return sp;
}

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

// Relaxes dp to min over predecessors of dp[p] + alpha * |p xor s|, tracking origins.
void reorganize(const StateSpace& sp, std::int64_t alpha, std::vector<std::int64_t>& dp,
                std::vector<std::int32_t>& origin) {
  for (NodeId v : sp.evict_order) {
    for (auto [without, with] : sp.edges[v]) {
      if (dp[with] + alpha < dp[without]) {
        dp[without] = dp[with] + alpha;
        origin[without] = origin[with];
      }
    }
  }
  for (auto it = sp.evict_order.rbegin(); it != sp.evict_order.rend(); ++it) {
    for (auto [without, with] : sp.edges[*it]) {
      if (dp[without] + alpha < dp[with]) {
        dp[with] = dp[without] + alpha;
        origin[with] = origin[without];
      }
    }
  }
}

bool serve_cost(const StateSpace& sp, std::size_t s, const Request& r) {
  return (r.sign == Sign::kPositive) != sp.contains(s, r.node);
}

}  // namespace

OptSolution optimal_cost(const TreeTopology& topo, const OptConfig& config, const Trace& trace) {
  if (config.alpha < 1) throw InvalidInput("alpha must be >= 1");
  for (const Request& r : trace) topo.check_node(r.node);
  if (!is_subforest(topo, config.initial_cache) || config.initial_cache.size() > config.k_opt) {
    throw InvalidInput("initial cache " + config.initial_cache.to_string() +
                       " is not a subforest within capacity");
  }
  const StateSpace sp = build_states(topo, config.k_opt, config.state_limit);
  const std::size_t n_states = sp.states.size();
  const std::int32_t init = sp.find(config.initial_cache);

  OptSolution sol;
  if (trace.empty()) return sol;

  const bool keep = config.keep_schedule && n_states * trace.size() <= 50'000'000;
  std::vector<std::vector<std::int32_t>> back;  // back[t][s]: state at round t for state s at t+1
  if (keep) back.reserve(trace.size());

  std::vector<std::int64_t> dp(n_states, kInf);
  std::vector<std::int32_t> origin(n_states, -1);
  dp[init] = 0;
  origin[init] = init;
  if (config.allow_time_zero_reorg) reorganize(sp, config.alpha, dp, origin);

  for (std::size_t t = 0; t < trace.size(); ++t) {
    if (t > 0) {
      std::vector<std::int32_t> from(n_states);
      for (std::size_t s = 0; s < n_states; ++s) from[s] = static_cast<std::int32_t>(s);
      reorganize(sp, config.alpha, dp, from);
      if (keep) back.push_back(std::move(from));
    }
    for (std::size_t s = 0; s < n_states; ++s) {
      if (dp[s] < kInf && serve_cost(sp, s, trace[t])) ++dp[s];
    }
  }
  const auto best = static_cast<std::int32_t>(std::min_element(dp.begin(), dp.end()) - dp.begin());
  sol.total_cost = dp[best];
  if (keep) {
    sol.schedule.resize(trace.size());
    std::int32_t s = best;
    for (std::size_t t = trace.size(); t-- > 0;) {
      sol.schedule[t] = sp.states[s];
      if (t > 0) s = back[t - 1][s];
    }
  }
  return sol;
}

std::int64_t schedule_cost(const TreeTopology& topo, std::int64_t alpha, std::size_t k,
                           const NodeSet& initial_cache, bool allow_time_zero_reorg,
                           const Trace& trace, const std::vector<NodeSet>& schedule) {
  if (schedule.size() != trace.size()) throw InvalidInput("schedule length differs from trace");
  auto moves = [](const NodeSet& a, const NodeSet& b) {
    return static_cast<std::int64_t>(set_difference(a, b).size() + set_difference(b, a).size());
  };
  std::int64_t cost = 0;
  const NodeSet* prev = &initial_cache;
  for (std::size_t t = 0; t < trace.size(); ++t) {
    const NodeSet& c = schedule[t];
    if (!is_subforest(topo, c) || c.size() > k) {
      throw InvalidInput("schedule cache at round " + std::to_string(t + 1) + " is invalid");
    }
    if (t == 0 && !allow_time_zero_reorg && c != initial_cache) {
      throw InvalidInput("schedule reorganises before the first round");
    }
    cost += alpha * moves(*prev, c);
    const Request& r = trace[t];
    if ((r.sign == Sign::kPositive) != c.contains(r.node)) ++cost;
    prev = &c;
  }
  return cost;
}

RatioResult competitive_ratio(const TreeTopology& topo, const Trace& trace, std::int64_t alpha,
                              std::size_t k_onl, std::size_t k_opt, std::size_t state_limit) {
  RatioResult out;
  auto shared = std::make_shared<const TreeTopology>(topo);
  Engine engine(shared, EngineConfig{alpha, k_onl, Backend::kFast, AssertLevel::kLemma51});
  for (const Request& r : trace) engine.process_request(r);
  out.tc_cost = engine.ledger().total();

  OptConfig cfg;
  cfg.k_opt = k_opt;
  cfg.alpha = alpha;
  cfg.state_limit = state_limit;
  cfg.keep_schedule = false;
  out.opt_cost = optimal_cost(topo, cfg, trace).total_cost;

  out.additive_term = static_cast<std::int64_t>(topo.height()) *
                      static_cast<std::int64_t>(k_onl) * alpha;
  const std::int64_t adjusted = std::max<std::int64_t>(out.tc_cost - out.additive_term, 0);
  auto divide = [&](std::int64_t num) {
    if (out.opt_cost == 0) return num == 0 ? 1.0 : std::numeric_limits<double>::infinity();
    return static_cast<double>(num) / static_cast<double>(out.opt_cost);
  };
  out.ratio = divide(out.tc_cost);
  out.adjusted_ratio = divide(adjusted);
  out.bound = k_opt <= k_onl ? static_cast<double>(topo.height()) * static_cast<double>(k_onl) /
                                   static_cast<double>(k_onl - k_opt + 1)
                             : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace treecache
