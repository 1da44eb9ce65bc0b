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

#include "report.hpp"

#include <algorithm>
#include <cmath>

namespace treecache::report {

json to_json(const NodeSet& s) { return json(s.ids()); }

json to_json(const EngineConfig& c) {
  return {{"alpha", c.alpha},
          {"k_onl", c.k_onl},
          {"backend", to_string(c.backend)},
          {"assert_level", to_string(c.assert_level)}};
}

json to_json(const CostLedger& l) {
  json phases = json::array();
  for (const PhaseCost& p : l.phases) {
    phases.push_back({{"phase", p.phase_index},
                      {"begin", p.begin_round},
                      {"end", p.end_round},
                      {"serve", p.serve},
                      {"move", p.move},
                      {"total", p.serve + p.move},
                      {"k_p", p.k_p},
                      {"finished", p.finished}});
  }
  return {{"serve", l.serve_cost}, {"move", l.move_cost}, {"total", l.total()}, {"phases", phases}};
}

json to_json(const StepReport& s) {
  json j = {{"round", s.round},
            {"request", std::string(1, sign_char(s.request.sign)) + std::to_string(s.request.node)},
            {"charged", s.charged},
            {"phase_ended", s.phase_ended}};
  if (s.applied) {
    j["applied"] = {{"sign", std::string(1, sign_char(s.applied->sign))},
                    {"nodes", to_json(s.applied->nodes)}};
  }
  if (s.phase_ended) {
    j["k_p"] = s.k_p_at_end.value_or(0);
    j["overflow_fetch"] = s.overflow_fetch ? to_json(*s.overflow_fetch) : json::array();
    j["final_evicted"] = s.final_evicted;
  }
  return j;
}

json to_json(const FieldRecord& f) {
  json members = json::array();
  for (const FieldMember& m : f.members) {
    members.push_back({{"node", m.node},
                       {"first", m.first},
                       {"last", m.last},
                       {"req", m.req()},
                       {"positive_rounds", m.positive_rounds},
                       {"negative_rounds", m.negative_rounds}});
  }
  json j = {{"kind", to_string(f.kind)},
            {"artificial", f.artificial},
            {"size", f.size()},
            {"req", f.req()},
            {"members", members}};
  if (f.kind != FieldKind::kOpen) j["end_time"] = f.end_time;
  return j;
}

json to_json(const std::vector<PhaseRecord>& phases) {
  json out = json::array();
  for (const PhaseRecord& p : phases) {
    json fields = json::array();
    for (const FieldRecord& f : p.fields) fields.push_back(to_json(f));
    out.push_back({{"phase", p.phase_index},
                   {"begin", p.begin},
                   {"end", p.end},
                   {"finished", p.finished},
                   {"k_p", p.k_p},
                   {"tc_cost", p.tc_cost},
                   {"charged_requests", p.charged_requests},
                   {"fields", fields},
                   {"open_field", to_json(p.open_field)}});
  }
  return out;
}

json to_json(const CheckReport& r) {
  json checks = json::array();
  for (const CheckResult& c : r.results) {
    json j = {{"name", c.name}, {"checked", c.checked}, {"failed", c.failed}, {"passed", c.passed()}};
    if (c.first_counterexample) j["first_counterexample"] = *c.first_counterexample;
    checks.push_back(std::move(j));
  }
  return {{"passed", r.passed()}, {"checks", checks}};
}

json to_json(const RatioResult& r) {
  auto num = [](double x) { return std::isfinite(x) ? json(x) : json("inf"); };
  return {{"tc_cost", r.tc_cost},
          {"opt_cost", r.opt_cost},
          {"ratio", num(r.ratio)},
          {"adjusted_ratio", num(r.adjusted_ratio)},
          {"additive_term", r.additive_term},
          {"bound", num(r.bound)}};
}

json chunks_json(const std::vector<Chunk>& chunks) {
  json out = json::array();
  for (const Chunk& c : chunks) out.push_back({c.begin, c.end});
  return out;
}

json run_report(std::shared_ptr<const TreeTopology> topo, const EngineConfig& config,
                const Trace& trace, bool include_steps) {
  Engine engine(topo, config);
  const double h = topo->height();
  const double wide = std::max<double>(h, topo->max_degree());
  std::uint64_t total_ops = 0;
  std::uint64_t max_ops = 0;
  double max_ratio = 0;
  std::uint64_t charged = 0;
  std::uint64_t fetches = 0;
  std::uint64_t evictions = 0;
  json steps = json::array();
  for (const Request& r : trace) {
    const StepReport s = engine.process_request(r);
    const std::uint64_t ops = engine.last_decision_ops();
    std::size_t x = 0;
    if (s.applied) x = s.applied->nodes.size();
    if (s.overflow_fetch) x = s.overflow_fetch->size();
    total_ops += ops;
    max_ops = std::max(max_ops, ops);
    max_ratio = std::max(max_ratio, static_cast<double>(ops) / (h + wide * static_cast<double>(x)));
    charged += s.charged ? 1 : 0;
    if (s.applied) ++(s.applied->sign == Sign::kPositive ? fetches : evictions);
    if (include_steps) steps.push_back(to_json(s));
  }
  json j = {{"config", to_json(config)},
            {"tree", {{"nodes", topo->size()},
                      {"height", topo->height()},
                      {"max_degree", topo->max_degree()}}},
            {"requests", trace.size()},
            {"charged_requests", charged},
            {"fetches", fetches},
            {"evictions", evictions},
            {"ledger", to_json(engine.ledger())},
            {"final_cache", to_json(engine.cache())},
            {"operations",
             {{"total", total_ops},
              {"max_per_decision", max_ops},
              {"max_per_decision_over_bound", max_ratio}}}};
  if (config.backend == Backend::kBothChecked) j["backends_agree"] = true;
  if (include_steps) j["steps"] = std::move(steps);
  return j;
}

json verify_report(std::shared_ptr<const TreeTopology> topo, const EngineConfig& config,
                   const Trace& trace, const VerifySuites& suites) {
  CheckReport all;
  json j = {{"config", to_json(config)}, {"requests", trace.size()}};
  if (suites.lemma51) {
    EngineConfig c = config;
    c.backend = topo->size() <= c.naive_limit ? Backend::kBothChecked : Backend::kFast;
    c.assert_level =
        topo->size() <= kExhaustiveCheckLimit ? AssertLevel::kFull : AssertLevel::kLemma51;
    CheckResult r{"lemma51", 0, 0, std::nullopt};
    try {
      Engine engine(topo, c);
      for (const Request& req : trace) {
        engine.process_request(req);
        r.record(true, "");
      }
    } catch (const InvariantViolation& e) {
      std::string where = "round " + std::to_string(e.round()) + ": " + e.what();
      if (!e.changeset().empty()) {
        where += " (changeset " + NodeSet(e.changeset()).to_string() + ")";
      }
      r.record(false, where);
    }
    all.results.push_back(std::move(r));
    j["lemma51_level"] = to_string(c.assert_level);
  }
  std::vector<PhaseRecord> phases;
  if (suites.fields || suites.over_requested) phases = build_fields(*topo, config, trace);
  if (suites.fields) {
    all.merge(check_field_invariants(phases, config.alpha));
    j["phases"] = to_json(phases);
  }
  if (suites.over_requested) all.merge(check_not_over_requested(*topo, phases, config.alpha));
  json checks = to_json(all);
  j["passed"] = checks["passed"];
  j["checks"] = checks["checks"];
  return j;
}

}  // namespace treecache::report
