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
#include <string>
#include <vector>

#include "dpgen/error.hpp"
#include "dpgen/lanes.hpp"
#include "dpgen/payload_memory.hpp"
#include "dpgen/source.hpp"

namespace dpgen::rtl {

// Fixed depth of the generated pipeline, in clock cycles, added to the
// header/payload beat count to give packet latency.
inline constexpr std::size_t kPipelineDepth = 6;

struct LaneUnit {
  std::size_t lane = 0;
  std::size_t mux_inputs = 0;
  std::size_t fsm_states = 0;
  std::size_t state_bits = 0;
  std::size_t transitions = 0;
  std::size_t guard_terms = 0;

  friend bool operator==(const LaneUnit&, const LaneUnit&) = default;
};

struct PayloadUnits {
  std::size_t byte_shifters = 0;
  std::size_t memory_entries = 0;

  friend bool operator==(const PayloadUnits&, const PayloadUnits&) = default;
};

// Per output byte: header byte when the lane FSM flags header-valid,
// payload byte otherwise. Last comes from the payload shifter when the
// packet has a payload and from the PHV shifters otherwise.
struct SelectorUnit {
  std::size_t byte_selects = 0;

  friend bool operator==(const SelectorUnit&, const SelectorUnit&) = default;
};

struct StructuralDesign {
  std::string top_name;
  std::size_t bus_width_bits = 0;
  std::size_t phv_data_width_bits = 0;
  std::size_t phv_valid_width_bits = 0;
  std::size_t pipeline_depth = kPipelineDepth;
  PhvLayout layout;
  std::vector<LanePlan> lane_plans;  // one per lane, index = lane
  PayloadControlMemory payload_memory;
  std::vector<LaneUnit> lane_units;
  PayloadUnits payload_units;
  SelectorUnit selector_unit;

  std::size_t lane_bytes() const { return bus_width_bits / 8; }
};

struct DesignMetrics {
  std::size_t muxes = 0;
  std::size_t mux_inputs_total = 0;
  std::size_t fsm_states_total = 0;
  std::size_t fsm_transitions_total = 0;
  std::size_t payload_memory_entries = 0;
  std::size_t payload_byte_shifters = 0;

  friend bool operator==(const DesignMetrics&, const DesignMetrics&) = default;
};

inline DesignMetrics metrics(const StructuralDesign& d) {
  DesignMetrics m;
  m.muxes = d.lane_units.size();
  for (const auto& u : d.lane_units) {
    m.mux_inputs_total += u.mux_inputs;
    m.fsm_states_total += u.fsm_states;
    m.fsm_transitions_total += u.transitions;
  }
  m.payload_memory_entries = d.payload_units.memory_entries;
  m.payload_byte_shifters = d.payload_units.byte_shifters;
  return m;
}

inline StructuralDesign lower(const std::vector<LanePlan>& plans, const PayloadControlMemory& memory,
                              const PhvLayout& layout, std::size_t bus_width_bits,
                              const std::string& top_name = "deparser") {
  static const std::string kModule = "rtl";
  if (bus_width_bits == 0 || bus_width_bits % 8 != 0) {
    throw Error(kModule, "bus width " + std::to_string(bus_width_bits) + " is not a positive multiple of 8");
  }
  const std::size_t w = bus_width_bits / 8;
  if (plans.size() != w) {
    throw Error(kModule, "width mismatch: " + std::to_string(plans.size()) + " lane plans for a " +
                             std::to_string(bus_width_bits) + "-bit bus");
  }
  if (memory.bus_width_bits() != bus_width_bits) {
    throw Error(kModule, "width mismatch: payload memory built for " +
                             std::to_string(memory.bus_width_bits()) + " bits");
  }
  for (const auto& [bitmap, e] : memory.entries()) {
    if (bitmap.width() != layout.phv_valid_width_bits) {
      throw Error(kModule, "width mismatch: payload memory keys are not PHV_valid wide");
    }
  }

  StructuralDesign d;
  d.top_name = top_name;
  d.bus_width_bits = bus_width_bits;
  d.phv_data_width_bits = layout.phv_data_width_bits;
  d.phv_valid_width_bits = layout.phv_valid_width_bits;
  d.layout = layout;
  d.lane_plans = plans;
  d.payload_memory = memory;

  for (std::size_t lane = 0; lane < w; ++lane) {
    const LanePlan& p = plans[lane];
    if (p.lane != lane) throw Error(kModule, "lane plans are out of order at lane " + std::to_string(lane));
    if (p.valid_width != layout.phv_valid_width_bits) {
      throw Error(kModule, "width mismatch: lane " + std::to_string(lane) + " tests " +
                               std::to_string(p.valid_width) + " validity bits");
    }
    LaneUnit u;
    u.lane = lane;
    u.mux_inputs = p.mux_inputs.size();
    u.fsm_states = p.state_count();
    u.state_bits = p.state_bits();
    u.transitions = p.transitions.size();
    for (const auto& m : p.mux_inputs) {
      if (m.phv_bit_offset + 8 > layout.phv_data_width_bits) {
        throw Error(kModule, "lane " + std::to_string(lane) + " reads PHV bits outside PHV_data");
      }
    }
    for (const auto& t : p.transitions) u.guard_terms += t.guard.size();
    d.lane_units.push_back(u);
  }
  d.payload_units = {w, memory.size()};
  d.selector_unit = {w};
  return d;
}

}  // namespace dpgen::rtl
