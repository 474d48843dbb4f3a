// Copyright 2026 The dpgen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dpgen/pipeline.hpp"
#include "dpgen/sim/latency.hpp"
#include "json.hpp"

namespace dpgen {

struct LaneMetrics {
  std::size_t lane = 0;
  std::size_t mux_inputs = 0;
  std::size_t fsm_states = 0;

  friend bool operator==(const LaneMetrics&, const LaneMetrics&) = default;
};

// Every figure here is recomputable from the artifacts written next to it.
struct Report {
  std::string mode;
  std::size_t bus_width_bits = 0;
  std::vector<std::string> headers;
  std::size_t path_count = 0;
  std::size_t worst_case_header_bytes = 0;
  std::size_t worst_latency_cycles = 0;
  std::vector<std::string> reachable_bitmaps;
  std::optional<std::vector<LaneMetrics>> lanes;  // compile only
  std::optional<std::size_t> payload_memory_entries;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["mode"] = mode;
    j["bus_width_bits"] = bus_width_bits;
    j["headers"] = headers;
    j["path_count"] = path_count;
    j["worst_case_header_bytes"] = worst_case_header_bytes;
    j["worst_latency_cycles"] = worst_latency_cycles;
    j["reachable_bitmaps"] = reachable_bitmaps;
    if (lanes) {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& l : *lanes) {
        arr.push_back({{"lane", l.lane}, {"mux_inputs", l.mux_inputs}, {"fsm_states", l.fsm_states}});
      }
      j["lanes"] = arr;
    }
    if (payload_memory_entries) j["payload_memory_entries"] = *payload_memory_entries;
    j["warnings"] = warnings;
    j["notes"] = notes;
    return j;
  }
};

inline Report make_report(const Analysis& a, std::size_t bus_width_bits) {
  Report r;
  r.mode = to_string(a.dag.mode);
  r.bus_width_bits = bus_width_bits;
  r.headers = a.dag.headers;
  r.path_count = a.paths.size();
  r.worst_case_header_bytes = worst_case_header_bytes(a.dag);
  r.worst_latency_cycles = sim::worst_latency(a.dag, bus_width_bits);
  for (const auto& p : a.paths) r.reachable_bitmaps.push_back(p.valid_bitmap.to_string());
  r.warnings = a.source.warnings;
  return r;
}

inline Report make_report(const Compilation& c) {
  Report r = make_report(c.analysis, c.bus_width_bits);
  std::vector<LaneMetrics> lanes;
  for (const auto& p : c.lane_plans) lanes.push_back({p.lane, p.mux_inputs.size(), p.state_count()});
  r.lanes = std::move(lanes);
  r.payload_memory_entries = c.payload_memory.size();
  return r;
}

}  // namespace dpgen
