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

#include "treecache/workloads.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "treecache/engine.hpp"

namespace treecache {

namespace {

std::shared_ptr<const TreeTopology> make_topo(const std::vector<std::int64_t>& parents) {
  return std::make_shared<const TreeTopology>(TreeTopology::from_parents(parents));
}

void check_alpha(std::int64_t alpha) {
  if (alpha < 1) throw InvalidInput("alpha must be >= 1");
}

// Children before parents.
void post_order(const TreeTopology& topo, NodeId v, std::vector<NodeId>& out) {
  for (NodeId c : topo.children(v)) post_order(topo, c, out);
  out.push_back(v);
}

}  // namespace

// ---------------------------------------------------------------------------
// Paging adversary

Workload gen_adversary_paging(std::size_t k_onl, std::int64_t alpha, std::size_t num_chunks) {
  if (k_onl < 1) throw InvalidInput("adversary needs k_onl >= 1");
  check_alpha(alpha);
  std::vector<std::int64_t> parents(k_onl + 2, 0);
  parents[0] = -1;
  Workload w;
  w.topo = make_topo(parents);

  Engine engine(w.topo, EngineConfig{alpha, k_onl, Backend::kFast, AssertLevel::kOff});
  for (std::size_t c = 0; c < num_chunks; ++c) {
    NodeId leaf = kNoNode;
    for (NodeId v = 1; v <= k_onl + 1; ++v) {
      if (!engine.cached(v)) {
        leaf = v;
        break;
      }
    }
    if (leaf == kNoNode) throw InvariantViolation("adversary found every leaf cached", engine.round());
    const std::size_t begin = w.trace.size();
    for (std::int64_t i = 0; i < alpha; ++i) {
      const Request r{leaf, Sign::kPositive};
      w.trace.push_back(r);
      engine.process_request(r);
    }
    w.chunks.push_back({begin, w.trace.size()});
  }
  return w;
}

// ---------------------------------------------------------------------------
// Two-subtree fixture

AppendixDWorkload gen_appendix_d(const AppendixDParams& p) {
  const std::size_t s = p.s;
  const std::size_t ell = p.ell;
  const std::int64_t alpha = p.alpha;
  if (s < 1 || ell < 1) throw InvalidInput("appendix-d needs s >= 1 and ell >= 1");
  if (alpha < 2) throw InvalidInput("appendix-d needs alpha >= 2");
  if (static_cast<std::int64_t>(ell) > static_cast<std::int64_t>(s) * alpha) {
    throw InvalidInput("appendix-d needs ell <= s * alpha");
  }
  if (s == 1 ? ell != 1 : ell > s - 1) {
    throw InvalidInput("no subtree of " + std::to_string(s) + " nodes has " + std::to_string(ell) +
                       " leaves");
  }
  const std::int64_t sa = static_cast<std::int64_t>(s) * alpha;
  const std::int64_t stage4 = p.stage4_count.value_or(sa - 1);
  if (stage4 < 0) throw InvalidInput("stage-4 count must be >= 0");

  // Node 0 is r. Each subtree: a chain of s - ell nodes whose last node has ell leaf children.
  std::vector<std::int64_t> parents{-1};
  AppendixDWorkload w;
  auto build_subtree = [&](NodeSet& members) {
    const auto top = static_cast<NodeId>(parents.size());
    if (s == 1) {
      parents.push_back(0);
    } else {
      std::int64_t prev = 0;
      for (std::size_t i = 0; i < s - ell; ++i) {
        parents.push_back(prev);
        prev = static_cast<std::int64_t>(parents.size()) - 1;
      }
      for (std::size_t i = 0; i < ell; ++i) parents.push_back(prev);
    }
    std::vector<NodeId> ids(s);
    std::iota(ids.begin(), ids.end(), top);
    members = NodeSet(std::move(ids));
    return top;
  };
  w.root = 0;
  w.t1_root = build_subtree(w.t1);
  w.t2_root = build_subtree(w.t2);
  w.topo = make_topo(parents);
  const TreeTopology& topo = *w.topo;
  const std::size_t n = topo.size();
  w.k_onl = n;

  Engine engine(w.topo, EngineConfig{alpha, n, Backend::kFast, AssertLevel::kLemma51});
  auto emit = [&](NodeId v, Sign sign, std::int64_t count) {
    std::optional<Changeset> last;
    for (std::int64_t i = 0; i < count; ++i) {
      const Request r{v, sign};
      w.trace.push_back(r);
      const StepReport rep = engine.process_request(r);
      if (rep.applied) last = rep.applied;
    }
    return last;
  };

  // Warm-up: fetch T bottom-up.
  w.stage_begin.push_back(w.trace.size());
  std::vector<NodeId> order;
  post_order(topo, w.root, order);
  for (NodeId v : order) emit(v, Sign::kPositive, alpha);
  if (engine.cache_size() != n) {
    throw InvariantViolation("appendix-d warm-up did not cache the whole tree", engine.round());
  }
  const std::uint64_t warm_rounds = engine.round();

  // Stage 1: negatives on T1 bottom-up, then at r.
  w.stage_begin.push_back(w.trace.size());
  std::vector<NodeId> t1_order;
  post_order(topo, w.t1_root, t1_order);
  for (NodeId v : t1_order) emit(v, Sign::kNegative, alpha);
  emit(w.root, Sign::kNegative, alpha);

  // Stage 2.
  w.stage_begin.push_back(w.trace.size());
  emit(w.root, Sign::kPositive, static_cast<std::int64_t>(s + 1) * alpha -
                                     static_cast<std::int64_t>(ell));

  // Stage 3: negatives on T2 bottom-up.
  w.stage_begin.push_back(w.trace.size());
  std::vector<NodeId> t2_order;
  post_order(topo, w.t2_root, t2_order);
  for (NodeId v : t2_order) emit(v, Sign::kNegative, alpha);

  // Stage 4.
  w.stage_begin.push_back(w.trace.size());
  emit(w.t1_root, Sign::kPositive, stage4);

  // Stage 5: positives at r until T is cached.
  w.stage_begin.push_back(w.trace.size());
  const std::int64_t cap = 2 * static_cast<std::int64_t>(n + 1) * alpha;
  for (std::int64_t i = 0; i < cap && engine.cache_size() != n; ++i) {
    const auto applied = emit(w.root, Sign::kPositive, 1);
    if (applied && engine.cache_size() == n) {
      w.expected_fetch_round = engine.round();
      w.full_tree_fetch = applied->nodes.size() == n;
    }
  }
  if (engine.cache_size() != n) {
    throw InvariantViolation("appendix-d stage 5 never cached the whole tree", engine.round());
  }

  // With the default stage-4 count the fetch round follows from the stage lengths alone.
  if (!p.stage4_count) {
    const auto predicted = warm_rounds + static_cast<std::uint64_t>(
                                             alpha * static_cast<std::int64_t>(s + 1) +
                                             (static_cast<std::int64_t>(s + 1) * alpha -
                                              static_cast<std::int64_t>(ell)) +
                                             sa + stage4 + static_cast<std::int64_t>(ell) + 1);
    if (predicted != w.expected_fetch_round || !w.full_tree_fetch) {
      throw InvariantViolation("appendix-d full-tree fetch at round " +
                                   std::to_string(w.expected_fetch_round) + ", predicted " +
                                   std::to_string(predicted),
                               engine.round());
    }
  }
  return w;
}

// ---------------------------------------------------------------------------
// Rule streams

Workload rule_stream_to_trace(const std::vector<RuleEvent>& events, std::int64_t alpha) {
  check_alpha(alpha);
  Workload w;
  for (const RuleEvent& e : events) {
    if (e.kind == RuleEvent::Kind::kLookup) {
      w.trace.push_back({e.node, Sign::kPositive});
      continue;
    }
    const std::size_t begin = w.trace.size();
    for (std::int64_t i = 0; i < alpha; ++i) w.trace.push_back({e.node, Sign::kNegative});
    w.chunks.push_back({begin, w.trace.size()});
  }
  return w;
}

namespace {

void apply_action(const TreeTopology& topo, NodeSet& cache, const CacheAction& a,
                  std::size_t k) {
  if (!a.evict.empty()) {
    if (!validate_changeset(topo, cache, a.evict, Sign::kNegative)) {
      throw InvalidInput("action at time " + std::to_string(a.time) + ": eviction " +
                         a.evict.to_string() + " is not a valid changeset");
    }
    cache = set_difference(cache, a.evict);
  }
  if (!a.fetch.empty()) {
    if (!validate_changeset(topo, cache, a.fetch, Sign::kPositive)) {
      throw InvalidInput("action at time " + std::to_string(a.time) + ": fetch " +
                         a.fetch.to_string() + " is not a valid changeset");
    }
    cache = set_union(cache, a.fetch);
  }
  if (k != 0 && cache.size() > k) {
    throw InvalidInput("action at time " + std::to_string(a.time) + " exceeds capacity " +
                       std::to_string(k));
  }
}

}  // namespace

std::int64_t solution_cost(const TreeTopology& topo, const Trace& trace,
                           const std::vector<CacheAction>& actions, std::int64_t alpha,
                           std::size_t k) {
  check_alpha(alpha);
  for (std::size_t i = 1; i < actions.size(); ++i) {
    if (actions[i].time < actions[i - 1].time) throw InvalidInput("actions not sorted by time");
  }
  NodeSet cache;
  std::int64_t cost = 0;
  std::size_t next = 0;
  auto apply_through = [&](std::uint64_t t) {
    for (; next < actions.size() && actions[next].time <= t; ++next) {
      apply_action(topo, cache, actions[next], k);
      cost += alpha * static_cast<std::int64_t>(actions[next].evict.size() +
                                                actions[next].fetch.size());
    }
  };
  apply_through(0);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const Request& r = trace[i];
    topo.check_node(r.node);
    if (cache.contains(r.node) == (r.sign == Sign::kNegative)) ++cost;
    apply_through(i + 1);
  }
  apply_through(std::numeric_limits<std::uint64_t>::max());
  return cost;
}

std::vector<CacheAction> canonicalize_solution(const TreeTopology& topo, const Trace& trace,
                                               const std::vector<Chunk>& chunks,
                                               const std::vector<CacheAction>& actions,
                                               std::int64_t alpha) {
  for (const Chunk& c : chunks) {
    if (c.begin >= c.end || c.end > trace.size()) throw InvalidInput("chunk out of range");
  }
  std::vector<CacheAction> out = actions;
  for (CacheAction& a : out) {
    // Time t sits inside chunk [b, e) when b < t < e.
    for (const Chunk& c : chunks) {
      if (a.time > c.begin && a.time < c.end) {
        a.time = c.end;
        break;
      }
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const CacheAction& x, const CacheAction& y) { return x.time < y.time; });
  const std::int64_t before = solution_cost(topo, trace, actions, alpha);
  const std::int64_t after = solution_cost(topo, trace, out, alpha);
  if (after > 2 * before) {
    throw InvariantViolation("canonical solution costs " + std::to_string(after) +
                             ", more than twice " + std::to_string(before));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Zipf prefix trie

namespace {

struct Trie {
  std::vector<std::int64_t> parents;
  std::vector<NodeId> ranking;  // leaves, most popular first
};

Trie build_trie(const ZipfTrieParams& p, std::mt19937_64& rng) {
  if (p.num_prefixes < 1) throw InvalidInput("zipf-trie needs num_prefixes >= 1");
  if (!(p.zipf_s > 0)) throw InvalidInput("zipf-trie needs zipf_s > 0");
  if (!(p.update_rate >= 0 && p.update_rate <= 1)) {
    throw InvalidInput("zipf-trie needs 0 <= update_rate <= 1");
  }
  Trie t;
  t.parents.push_back(-1);
  std::vector<NodeId> leaves{0};
  while (leaves.size() < p.num_prefixes) {
    std::uniform_int_distribution<std::size_t> pick(0, leaves.size() - 1);
    const std::size_t i = pick(rng);
    const NodeId v = leaves[i];
    const auto a = static_cast<NodeId>(t.parents.size());
    t.parents.push_back(v);
    t.parents.push_back(v);
    leaves[i] = a;
    leaves.push_back(a + 1);
  }
  std::sort(leaves.begin(), leaves.end());
  std::shuffle(leaves.begin(), leaves.end(), rng);
  t.ranking = std::move(leaves);
  return t;
}

}  // namespace

Workload gen_zipf_trie(const ZipfTrieParams& p) {
  check_alpha(p.alpha);
  std::mt19937_64 rng(p.seed);
  const Trie trie = build_trie(p, rng);
  std::vector<double> weights(trie.ranking.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    weights[i] = 1.0 / std::pow(static_cast<double>(i + 1), p.zipf_s);
  }
  std::discrete_distribution<std::size_t> zipf(weights.begin(), weights.end());
  std::bernoulli_distribution update(p.update_rate);
  std::uniform_int_distribution<NodeId> any_node(0, static_cast<NodeId>(trie.parents.size() - 1));

  std::vector<RuleEvent> events;
  events.reserve(p.lookups);
  for (std::size_t i = 0; i < p.lookups; ++i) {
    if (update(rng)) events.push_back({RuleEvent::Kind::kUpdate, any_node(rng)});
    events.push_back({RuleEvent::Kind::kLookup, trie.ranking[zipf(rng)]});
  }
  Workload w = rule_stream_to_trace(events, p.alpha);
  w.topo = make_topo(trie.parents);
  return w;
}

std::vector<NodeId> zipf_trie_leaf_ranking(const ZipfTrieParams& p) {
  std::mt19937_64 rng(p.seed);
  return build_trie(p, rng).ranking;
}

// ---------------------------------------------------------------------------
// Uniform fuzz traces

Trace gen_uniform_random(const TreeTopology& topo, const UniformParams& p) {
  check_alpha(p.alpha);
  if (!(p.positive_bias >= 0 && p.positive_bias <= 1)) {
    throw InvalidInput("positive_bias must lie in [0, 1]");
  }
  const std::size_t k = p.k == 0 ? topo.size() : p.k;
  auto shared = std::make_shared<const TreeTopology>(topo);
  Engine engine(shared, EngineConfig{p.alpha, k, Backend::kFast, AssertLevel::kOff});
  std::mt19937_64 rng(p.seed);
  std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(topo.size() - 1));
  std::bernoulli_distribution chargeable(p.positive_bias);
  Trace trace;
  trace.reserve(p.length);
  for (std::size_t i = 0; i < p.length; ++i) {
    const NodeId v = node(rng);
    const bool charge = chargeable(rng);
    const bool cached = engine.cached(v);
    const Sign sign = (charge != cached) ? Sign::kPositive : Sign::kNegative;
    trace.push_back({v, sign});
    engine.process_request(trace.back());
  }
  return trace;
}

TreeTopology random_tree(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw InvalidInput("tree needs at least one node");
  std::mt19937_64 rng(seed);
  std::vector<std::int64_t> parents(n, -1);
  for (std::size_t i = 1; i < n; ++i) {
    parents[i] = std::uniform_int_distribution<std::int64_t>(0, static_cast<std::int64_t>(i) - 1)(rng);
  }
  return TreeTopology::from_parents(parents);
}

}  // namespace treecache
