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

// JSON views of library results. Internal; the C API hands them out as strings.

#pragma once

#include <json.hpp>

#include "treecache/engine.hpp"
#include "treecache/fields.hpp"
#include "treecache/opt.hpp"
#include "treecache/workloads.hpp"

namespace treecache::report {

using nlohmann::json;

json to_json(const NodeSet& s);
json to_json(const EngineConfig& c);
json to_json(const CostLedger& l);
json to_json(const StepReport& s);
json to_json(const FieldRecord& f);
json to_json(const std::vector<PhaseRecord>& phases);
json to_json(const CheckReport& r);
json to_json(const RatioResult& r);
json chunks_json(const std::vector<Chunk>& chunks);

/// Runs `trace` and summarises ledger, phases, decisions and operation counts. With the
/// both-checked backend the report states whether the backends agreed.
json run_report(std::shared_ptr<const TreeTopology> topo, const EngineConfig& config,
                const Trace& trace, bool include_steps);

struct VerifySuites {
  bool lemma51 = true;
  bool fields = true;
  bool over_requested = true;
};

/// Runs the selected invariant suites; "passed" is true iff every check passed.
json verify_report(std::shared_ptr<const TreeTopology> topo, const EngineConfig& config,
                   const Trace& trace, const VerifySuites& suites);

}  // namespace treecache::report
