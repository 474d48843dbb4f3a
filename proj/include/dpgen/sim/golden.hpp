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

// Reference deparser: the packet is the valid headers' PHV bytes in emit
// order followed by the payload, cut into bus-width frames. No hardware
// structure is involved, which is what makes it usable as an oracle.

#pragma once

#include <cstddef>
#include <vector>

#include "dpgen/dag.hpp"
#include "dpgen/error.hpp"
#include "dpgen/sim/frame.hpp"
#include "dpgen/source.hpp"

namespace dpgen::sim {

inline Bytes golden_stream(const PhvLayout& layout, const Stimulus& stim) {
  Bytes stream;
  for (std::size_t i = 0; i < layout.instances.size(); ++i) {
    if (!stim.phv.valid.test(i)) continue;
    const auto& h = layout.instances[i];
    const std::size_t first = h.phv_data_offset_bits / 8;
    stream.insert(stream.end(), stim.phv.data.begin() + static_cast<std::ptrdiff_t>(first),
                  stim.phv.data.begin() + static_cast<std::ptrdiff_t>(first + h.bytes()));
  }
  stream.insert(stream.end(), stim.payload.begin(), stim.payload.end());
  return stream;
}

inline std::vector<Frame> golden_deparse(const PhvLayout& layout, const DeparserDag& dag,
                                         const Stimulus& stim, std::size_t bus_width_bits) {
  if (bus_width_bits == 0 || bus_width_bits % 8 != 0) {
    throw Error("sim", "bus width " + std::to_string(bus_width_bits) + " is not a positive multiple of 8");
  }
  check_stimulus(stim, layout, "sim");
  if (!is_dag_path(dag, stim.phv.valid)) {
    throw Error("sim", "valid bitmap " + stim.phv.valid.to_string() + " is not a DAG path");
  }
  const Bytes stream = golden_stream(layout, stim);
  return segment(stream, bus_width_bits / 8);
}

}  // namespace dpgen::sim
