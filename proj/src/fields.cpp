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

#include "treecache/fields.hpp"

#include <algorithm>
#include <memory>
#include <sstream>

#include "mask.hpp"

namespace treecache {

const char* to_string(FieldKind k) {
  switch (k) {
    case FieldKind::kPositive: return "positive";
    case FieldKind::kNegative: return "negative";
    case FieldKind::kOpen: return "open";
  }
  return "?";
}

std::int64_t FieldRecord::req() const {
  std::int64_t total = 0;
  for (const auto& m : members) total += m.req();
  return total;
}

NodeSet FieldRecord::nodes() const {
  std::vector<NodeId> ids;
  ids.reserve(members.size());
  for (const auto& m : members) ids.push_back(m.node);
  return NodeSet(std::move(ids));
}

void CheckResult::record(bool ok, const std::string& counterexample) {
  ++checked;
  if (ok) return;
  ++failed;
  if (!first_counterexample) first_counterexample = counterexample;
}

bool CheckReport::passed() const {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed(); });
}

const CheckResult* CheckReport::find(const std::string& name) const {
  for (const auto& r : results) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

void CheckReport::merge(const CheckReport& other) {
  for (const auto& o : other.results) {
    auto it = std::find_if(results.begin(), results.end(),
                           [&](const CheckResult& r) { return r.name == o.name; });
    if (it == results.end()) {
      results.push_back(o);
      continue;
    }
    it->checked += o.checked;
    it->failed += o.failed;
    if (!it->first_counterexample) it->first_counterexample = o.first_counterexample;
  }
}

// ---------------------------------------------------------------------------
// Field reconstruction

namespace {

class FieldBuilder {
 public:
  explicit FieldBuilder(std::size_t n) : last_(n, 0), pos_(n), neg_(n) {}

  void start_phase(std::uint64_t index, std::uint64_t begin) {
    std::fill(last_.begin(), last_.end(), begin);
    for (auto& v : pos_) v.clear();
    for (auto& v : neg_) v.clear();
    current_ = PhaseRecord{};
    current_.phase_index = index;
    current_.begin = begin;
    current_.end = begin;
  }

  void charge(const Request& r, std::uint64_t round) {
    (r.sign == Sign::kPositive ? pos_ : neg_)[r.node].push_back(round);
    ++current_.charged_requests;
  }

  void close_field(const NodeSet& x, FieldKind kind, std::uint64_t t, bool artificial) {
    FieldRecord f;
    f.end_time = t;
    f.kind = kind;
    f.artificial = artificial;
    for (NodeId v : x) f.members.push_back(take(v, t));
    current_.fields.push_back(std::move(f));
  }

  PhaseRecord finish_phase(std::uint64_t end, bool finished, std::size_t k_p, std::int64_t cost) {
    current_.end = end;
    current_.finished = finished;
    current_.k_p = k_p;
    current_.tc_cost = cost;
    current_.open_field.kind = FieldKind::kOpen;
    current_.open_field.end_time = end;
    for (NodeId v = 0; v < last_.size(); ++v) {
      if (!pos_[v].empty() || !neg_[v].empty()) current_.open_field.members.push_back(take(v, end));
    }
    return std::move(current_);
  }

 private:
  FieldMember take(NodeId v, std::uint64_t t) {
    FieldMember m;
    m.node = v;
    m.first = last_[v] + 1;
    m.last = t;
    m.positive_rounds = std::move(pos_[v]);
    m.negative_rounds = std::move(neg_[v]);
    pos_[v].clear();
    neg_[v].clear();
    last_[v] = t;
    return m;
  }

  std::vector<std::uint64_t> last_;
  std::vector<std::vector<std::uint64_t>> pos_;
  std::vector<std::vector<std::uint64_t>> neg_;
  PhaseRecord current_;
};

}  // namespace

std::vector<PhaseRecord> build_fields(const TreeTopology& topo, const EngineConfig& config,
                                      const Trace& trace) {
  auto shared = std::make_shared<const TreeTopology>(topo);
  Engine engine(shared, config);
  FieldBuilder builder(topo.size());
  std::vector<PhaseRecord> phases;
  builder.start_phase(1, 0);
  for (const Request& r : trace) {
    const StepReport step = engine.process_request(r);
    if (step.charged) builder.charge(r, step.round);
    if (step.applied) {
      builder.close_field(step.applied->nodes,
                          step.applied->sign == Sign::kPositive ? FieldKind::kPositive
                                                                : FieldKind::kNegative,
                          step.round, false);
    }
    if (step.phase_ended) {
      builder.close_field(*step.overflow_fetch, FieldKind::kPositive, step.round, true);
      const PhaseCost& cost = engine.ledger().phases[phases.size()];
      phases.push_back(builder.finish_phase(step.round, true, *step.k_p_at_end, cost.serve + cost.move));
      builder.start_phase(engine.phase_index(), step.round);
    }
  }
  const PhaseCost& cost = engine.ledger().phases.back();
  phases.push_back(builder.finish_phase(engine.round(), false, engine.cache_size(), cost.serve + cost.move));
  return phases;
}

// ---------------------------------------------------------------------------
// Checks

namespace {

std::string field_label(const PhaseRecord& p, const FieldRecord& f) {
  std::ostringstream os;
  os << "phase " << p.phase_index << ", " << to_string(f.kind) << " field ending at t=" << f.end_time
     << " over " << f.nodes().to_string();
  return os.str();
}

}  // namespace

CheckReport check_field_invariants(const std::vector<PhaseRecord>& phases, std::int64_t alpha) {
  CheckResult req_exact{"field_req_equals_size_alpha", 0, 0, std::nullopt};
  CheckResult purity{"field_sign_purity", 0, 0, std::nullopt};
  CheckResult cost_bound{"phase_cost_bound", 0, 0, std::nullopt};
  CheckResult partition{"field_partition", 0, 0, std::nullopt};

  for (const PhaseRecord& p : phases) {
    std::int64_t closed_size = 0;
    std::int64_t accounted = p.open_field.req();
    // node -> [first, last] intervals over all fields of the phase
    std::vector<std::pair<NodeId, std::pair<std::uint64_t, std::uint64_t>>> intervals;
    for (const FieldRecord& f : p.fields) {
      const std::int64_t req = f.req();
      closed_size += static_cast<std::int64_t>(f.size());
      accounted += req;
      std::ostringstream ce;
      ce << field_label(p, f) << ": req=" << req << ", size*alpha="
         << static_cast<std::int64_t>(f.size()) * alpha;
      req_exact.record(req == static_cast<std::int64_t>(f.size()) * alpha, ce.str());
      bool pure = true;
      for (const auto& m : f.members) {
        pure &= f.kind == FieldKind::kPositive ? m.negative_rounds.empty() : m.positive_rounds.empty();
        intervals.push_back({m.node, {m.first, m.last}});
      }
      purity.record(pure, field_label(p, f) + " mixes request signs");
    }
    for (const auto& m : p.open_field.members) intervals.push_back({m.node, {m.first, m.last}});

    const std::int64_t bound = 2 * alpha * closed_size + p.open_field.req() +
                               static_cast<std::int64_t>(p.k_p) * alpha;
    std::ostringstream ce;
    ce << "phase " << p.phase_index << ": TC(P)=" << p.tc_cost << " exceeds bound " << bound;
    cost_bound.record(p.tc_cost <= bound, ce.str());

    // Intervals of one node must be disjoint and every charged request must be counted once.
    std::sort(intervals.begin(), intervals.end());
    bool disjoint_ok = true;
    for (std::size_t i = 1; i < intervals.size(); ++i) {
      if (intervals[i].first == intervals[i - 1].first &&
          intervals[i].second.first <= intervals[i - 1].second.second) {
        disjoint_ok = false;
      }
    }
    std::ostringstream pe;
    pe << "phase " << p.phase_index << ": fields hold " << accounted << " of "
       << p.charged_requests << " charged requests" << (disjoint_ok ? "" : " (overlapping slots)");
    partition.record(disjoint_ok && accounted == p.charged_requests, pe.str());
  }
  return CheckReport{{req_exact, purity, cost_bound, partition}};
}

CheckReport check_not_over_requested(const TreeTopology& topo,
                                     const std::vector<PhaseRecord>& phases, std::int64_t alpha) {
  if (topo.size() > kOverRequestedLimit) {
    throw SizeLimit("over-requested check limited to " + std::to_string(kOverRequestedLimit) +
                        " nodes, tree has " + std::to_string(topo.size()),
                    topo.size());
  }
  CheckResult neg_caps{"negative_field_caps_not_over_requested", 0, 0, std::nullopt};
  CheckResult pos_subtrees{"positive_field_subtrees_not_over_requested", 0, 0, std::nullopt};
  CheckResult pos_density{"positive_field_cap_density", 0, 0, std::nullopt};
  CheckResult neg_density{"negative_field_cap_complement_density", 0, 0, std::nullopt};

  using detail::Mask;
  const std::size_t n = topo.size();
  std::vector<Mask> subtree(n, 0);
  const auto order = topo.preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    subtree[*it] |= detail::bit(*it);
    if (topo.parent(*it) != kNoNode) subtree[topo.parent(*it)] |= subtree[*it];
  }

  std::vector<Mask> child_mask(n, 0);
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId c : topo.children(v)) child_mask[v] |= detail::bit(c);
  }

  for (const PhaseRecord& p : phases) {
    // Cache changes of the phase; the cache at time tau reflects those before tau.
    std::vector<std::pair<std::uint64_t, const FieldRecord*>> flips;
    for (const FieldRecord& f : p.fields) {
      if (!f.artificial) flips.emplace_back(f.end_time, &f);
    }
    auto cache_before = [&](std::uint64_t tau) {
      Mask c = 0;
      for (const auto& [t, g] : flips) {
        if (t >= tau) continue;
        const Mask m = detail::to_mask(g->nodes());
        c = g->kind == FieldKind::kPositive ? (c | m) : (c & ~m);
      }
      return c;
    };

    for (const FieldRecord& f : p.fields) {
      const Mask x = detail::to_mask(f.nodes());
      NodeId top = kNoNode;
      for (const auto& m : f.members) {
        if (topo.parent(m.node) == kNoNode || !(x & detail::bit(topo.parent(m.node)))) top = m.node;
      }
      std::vector<Mask> caps;
      detail::caps_rooted_at(topo, top, x, 0, caps);

      // Times at which a snapshot can change: member starts and request rounds.
      std::vector<std::uint64_t> taus;
      for (const auto& m : f.members) {
        taus.push_back(m.first);
        taus.insert(taus.end(), m.positive_rounds.begin(), m.positive_rounds.end());
        taus.insert(taus.end(), m.negative_rounds.begin(), m.negative_rounds.end());
      }
      taus.push_back(f.end_time);
      std::sort(taus.begin(), taus.end());
      taus.erase(std::unique(taus.begin(), taus.end()), taus.end());

      std::vector<std::int64_t> req_at(n, 0);
      for (std::uint64_t tau : taus) {
        Mask present = 0;
        for (const auto& m : f.members) {
          if (m.first > tau) continue;
          present |= detail::bit(m.node);
          auto count = [tau](const std::vector<std::uint64_t>& rounds) {
            return static_cast<std::int64_t>(
                std::upper_bound(rounds.begin(), rounds.end(), tau) - rounds.begin());
          };
          req_at[m.node] = count(m.positive_rounds) + count(m.negative_rounds);
        }
        auto excess = [&](Mask s) {
          std::int64_t e = 0;
          detail::for_each_bit(s & present, [&](NodeId v) { e += req_at[v] - alpha; });
          return e;
        };
        if (f.kind == FieldKind::kNegative) {
          for (Mask d : caps) {
            std::ostringstream ce;
            ce << field_label(p, f) << ": snapshot at tau=" << tau << " over cap "
               << detail::to_node_set(d).to_string() << " is over-requested";
            neg_caps.record(excess(d) <= 0, ce.str());
          }
        } else {
          // Only snapshots that form a valid fetch at tau are bounded.
          const Mask cache = cache_before(tau);
          for (NodeId u = 0; u < n; ++u) {
            const Mask s = subtree[u] & present;
            if (!s || (s & cache)) continue;
            bool valid = true;
            detail::for_each_bit(s, [&](NodeId v) {
              if (child_mask[v] & ~(s | cache)) valid = false;
            });
            if (!valid) continue;
            std::ostringstream ce;
            ce << field_label(p, f) << ": snapshot at tau=" << tau << " over T(" << u
               << ") is over-requested";
            pos_subtrees.record(excess(subtree[u]) <= 0, ce.str());
          }
        }
      }

      // Density at the end time; req_at now holds the full per-node counts.
      auto full_req = [&](Mask s) {
        std::int64_t r = 0;
        detail::for_each_bit(s, [&](NodeId v) { r += req_at[v]; });
        return r;
      };
      for (Mask d : caps) {
        const Mask target = f.kind == FieldKind::kPositive ? d : (x & ~d);
        const auto need = alpha * std::popcount(target);
        std::ostringstream ce;
        ce << field_label(p, f) << ": " << detail::to_node_set(target).to_string() << " holds "
           << full_req(target) << " < " << need << " requests";
        (f.kind == FieldKind::kPositive ? pos_density : neg_density)
            .record(full_req(target) >= need, ce.str());
      }
    }
  }
  return CheckReport{{neg_caps, pos_subtrees, pos_density, neg_density}};
}

CheckReport check_not_over_requested(const TreeTopology& topo, const EngineConfig& config,
                                     const Trace& trace) {
  if (topo.size() > kOverRequestedLimit) {
    throw SizeLimit("over-requested check limited to " + std::to_string(kOverRequestedLimit) +
                        " nodes, tree has " + std::to_string(topo.size()),
                    topo.size());
  }
  return check_not_over_requested(topo, build_fields(topo, config, trace), config.alpha);
}

}  // namespace treecache
