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

#include "treecache/engine.hpp"

#include <algorithm>
#include <bit>

#include "mask.hpp"

namespace treecache {

const char* to_string(Backend b) {
  switch (b) {
    case Backend::kNaive: return "naive";
    case Backend::kFast: return "fast";
    case Backend::kBothChecked: return "both-checked";
  }
  return "?";
}

const char* to_string(AssertLevel a) {
  switch (a) {
    case AssertLevel::kOff: return "off";
    case AssertLevel::kLemma51: return "lemma51";
    case AssertLevel::kFull: return "full";
  }
  return "?";
}

Backend parse_backend(const std::string& s) {
  if (s == "naive") return Backend::kNaive;
  if (s == "fast") return Backend::kFast;
  if (s == "both-checked" || s == "both") return Backend::kBothChecked;
  throw InvalidInput("unknown backend '" + s + "'");
}

AssertLevel parse_assert_level(const std::string& s) {
  if (s == "off") return AssertLevel::kOff;
  if (s == "lemma51") return AssertLevel::kLemma51;
  if (s == "full") return AssertLevel::kFull;
  throw InvalidInput("unknown assert level '" + s + "'");
}

namespace {

std::int64_t count_sum(const NodeSet& x, std::span<const std::int64_t> counters) {
  std::int64_t sum = 0;
  for (NodeId v : x) sum += counters[v];
  return sum;
}

}  // namespace

std::optional<Changeset> decide_changeset_naive(const TreeTopology& topo, const NodeSet& cache,
                                                std::span<const std::int64_t> counters,
                                                std::int64_t alpha, const Request& req,
                                                std::size_t limit) {
  topo.check_node(req.node);
  if (counters.size() != topo.size()) throw InvalidInput("counter vector size mismatch");
  const auto candidates = enumerate_valid_changesets(topo, cache, req.sign, req.node, limit);

  std::vector<const NodeSet*> saturated;
  for (const NodeSet& x : candidates) {
    if (count_sum(x, counters) >= static_cast<std::int64_t>(x.size()) * alpha) saturated.push_back(&x);
  }
  std::vector<const NodeSet*> maximal;
  for (const NodeSet* x : saturated) {
    const bool dominated = std::any_of(saturated.begin(), saturated.end(), [&](const NodeSet* y) {
      return y->size() > x->size() && is_subset(*x, *y);
    });
    if (!dominated) maximal.push_back(x);
  }
  if (maximal.empty()) return std::nullopt;
  if (maximal.size() > 1) {
    throw InvariantViolation("ambiguous decision: " + maximal[0]->to_string() + " and " +
                                 maximal[1]->to_string() + " are both saturated and maximal",
                             0, maximal[0]->ids());
  }
  return Changeset{*maximal.front(), req.sign};
}

std::optional<Changeset> decide_changeset_fast(FastIndex& index, const Request& req) {
  auto x = req.sign == Sign::kPositive ? index.find_positive_candidate(req.node)
                                       : index.find_negative_candidate(req.node);
  if (!x) return std::nullopt;
  return Changeset{std::move(*x), req.sign};
}

// ---------------------------------------------------------------------------

Engine::Engine(std::shared_ptr<const TreeTopology> topo, EngineConfig config)
    : topo_(std::move(topo)), config_(config), slots_(topo_->size()) {
  if (config_.alpha < 1) throw InvalidInput("alpha must be >= 1");
  if (config_.k_onl < 1) throw InvalidInput("cache capacity must be >= 1");
  if (config_.backend != Backend::kFast && topo_->size() > config_.naive_limit) {
    throw SizeLimit("naive backend limited to " + std::to_string(config_.naive_limit) +
                        " nodes, tree has " + std::to_string(topo_->size()),
                    topo_->size());
  }
  if (config_.backend != Backend::kNaive) index_.emplace(*topo_, config_.alpha);
  ledger_.phases.push_back(PhaseCost{});
}

NodeSet Engine::cache() const {
  std::vector<NodeId> ids;
  ids.reserve(cache_size_);
  for (NodeId v = 0; v < slots_.size(); ++v) {
    if (view(v).cached) ids.push_back(v);
  }
  return NodeSet::from_sorted_unique(std::move(ids));
}

std::vector<std::int64_t> Engine::counters() const {
  std::vector<std::int64_t> out(slots_.size());
  for (NodeId v = 0; v < slots_.size(); ++v) out[v] = view(v).counter;
  return out;
}

std::optional<Changeset> Engine::decide(const Request& req) {
  switch (config_.backend) {
    case Backend::kFast:
      return decide_changeset_fast(*index_, req);
    case Backend::kNaive:
      return decide_changeset_naive(*topo_, cache(), counters(), config_.alpha, req,
                                    config_.naive_limit);
    case Backend::kBothChecked: {
      auto fast = decide_changeset_fast(*index_, req);
      auto naive = decide_changeset_naive(*topo_, cache(), counters(), config_.alpha, req,
                                          config_.naive_limit);
      if (fast != naive) {
        throw InvariantViolation(
            "backends disagree at round " + std::to_string(round_) + ": fast " +
                (fast ? fast->nodes.to_string() : std::string("none")) + ", naive " +
                (naive ? naive->nodes.to_string() : std::string("none")),
            round_, fast ? fast->nodes.ids() : std::vector<NodeId>{});
      }
      return fast;
    }
  }
  return std::nullopt;
}

void Engine::check_applied(const Changeset& x, const Request& req) const {
  auto fail = [&](const std::string& what) {
    throw InvariantViolation("round " + std::to_string(round_) + ": changeset " +
                                 x.nodes.to_string() + " " + what,
                             round_, x.nodes.ids());
  };
  if (!x.nodes.contains(req.node)) fail("does not contain the requested node");
  std::int64_t cnt = 0;
  for (NodeId v : x.nodes) cnt += view(v).counter;
  if (cnt != static_cast<std::int64_t>(x.nodes.size()) * config_.alpha) {
    fail("has counter sum " + std::to_string(cnt) + " instead of |X|*alpha");
  }
  NodeId top = kNoNode;
  for (NodeId v : x.nodes) {
    const NodeId p = topo_->parent(v);
    if (p == kNoNode || !x.nodes.contains(p)) {
      if (top != kNoNode) fail("is not a single tree cap");
      top = v;
    }
  }
  if (topo_->parent(top) != kNoNode && view(topo_->parent(top)).cached) {
    fail("is not a cap of a tree of the cache");
  }
  for (NodeId v : x.nodes) {
    if (x.sign == Sign::kPositive) {
      if (view(v).cached) fail("fetches a cached node");
      for (NodeId c : topo_->children(v)) {
        if (!view(c).cached && !x.nodes.contains(c)) fail("leaves a hole below the fetched set");
      }
    } else if (!view(v).cached) {
      fail("evicts a non-cached node");
    }
  }
}

void Engine::check_no_saturated_changeset() const {
  const std::size_t n = topo_->size();
  if (n > kExhaustiveCheckLimit) return;
  const detail::SubforestTable table(*topo_);
  const detail::Mask all = detail::full_mask(n);
  const detail::Mask cache = detail::to_mask(this->cache());

  // Subset sums of (counter - alpha) over the free bits, by lowest-bit recursion.
  auto scan = [&](detail::Mask universe, Sign sign) {
    std::vector<NodeId> pos;
    detail::for_each_bit(universe, [&](NodeId v) { pos.push_back(v); });
    const std::size_t m = pos.size();
    std::vector<std::int64_t> excess(std::size_t{1} << m, 0);
    std::vector<detail::Mask> set(std::size_t{1} << m, 0);
    for (std::size_t i = 1; i < excess.size(); ++i) {
      const auto low = static_cast<std::size_t>(std::countr_zero(i));
      const std::size_t rest = i & (i - 1);
      excess[i] = excess[rest] + view(pos[low]).counter - config_.alpha;
      set[i] = set[rest] | detail::bit(pos[low]);
      if (excess[i] < 0) continue;
      const bool valid = sign == Sign::kPositive ? table.is_subforest(cache | set[i])
                                                 : table.is_subforest(cache & ~set[i]);
      if (valid) {
        const NodeSet bad = detail::to_node_set(set[i]);
        throw InvariantViolation("round " + std::to_string(round_) + ": valid " +
                                     (sign == Sign::kPositive ? "positive" : "negative") +
                                     " changeset " + bad.to_string() +
                                     " is saturated between requests",
                                 round_, bad.ids());
      }
    }
  };
  scan(all & ~cache, Sign::kPositive);
  scan(cache, Sign::kNegative);
}

StepReport Engine::process_request(const Request& req) {
  topo_->check_node(req.node);
  ++round_;
  const std::uint64_t ops_before = index_ ? index_->ops() : 0;
  PhaseCost* phase = &ledger_.phases.back();
  phase->end_round = round_;

  StepReport report;
  report.round = round_;
  report.request = req;
  Slot& slot = at(req.node);
  report.charged = (req.sign == Sign::kPositive) != slot.cached;

  if (report.charged) {
    ++slot.counter;
    ++ledger_.serve_cost;
    ++phase->serve;
    if (index_) index_->on_charged_request(req.node, req.sign);

    if (auto x = decide(req)) {
      if (config_.assert_level != AssertLevel::kOff) check_applied(*x, req);
      const auto size = static_cast<std::int64_t>(x->nodes.size());
      if (x->sign == Sign::kPositive && cache_size_ + x->nodes.size() > config_.k_onl) {
        // Final eviction: empty the cache and open a new phase with fresh counters.
        const auto evict_cost = config_.alpha * static_cast<std::int64_t>(cache_size_);
        ledger_.move_cost += evict_cost;
        phase->move += evict_cost;
        phase->k_p = cache_size_ + x->nodes.size();
        phase->finished = true;
        report.phase_ended = true;
        report.k_p_at_end = phase->k_p;
        report.final_evicted = cache_size_;
        report.overflow_fetch = std::move(x->nodes);
        const std::uint64_t next_index = phase->phase_index + 1;
        ++epoch_;
        cache_size_ = 0;
        if (index_) index_->on_phase_reset();
        ledger_.phases.push_back(PhaseCost{next_index, round_, round_, 0, 0, 0, false});
      } else {
        for (NodeId v : x->nodes) {
          Slot& s = at(v);
          s.cached = x->sign == Sign::kPositive;
          s.counter = 0;
        }
        if (x->sign == Sign::kPositive) cache_size_ += x->nodes.size(); else cache_size_ -= x->nodes.size();
        ledger_.move_cost += config_.alpha * size;
        phase->move += config_.alpha * size;
        phase->k_p = cache_size_;
        if (index_) index_->on_cache_change(x->nodes, x->sign);
        report.applied = std::move(*x);
      }
    }
  }

  if (cache_size_ > config_.k_onl) {
    throw InvariantViolation("cache exceeds capacity at round " + std::to_string(round_), round_);
  }
  if (config_.assert_level == AssertLevel::kFull) {
    check_no_saturated_changeset();
    if (index_) index_->check_consistency();
  }
  last_ops_ = index_ ? index_->ops() - ops_before : 0;
  return report;
}

RunResult run_trace(Engine& engine, const Trace& trace) {
  RunResult out;
  out.steps.reserve(trace.size());
  for (const Request& r : trace) out.steps.push_back(engine.process_request(r));
  out.ledger = engine.ledger();
  return out;
}

}  // namespace treecache
