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

#include "dpgen/dag.hpp"
#include "dpgen/error.hpp"
#include "dpgen/rtl/design.hpp"

namespace dpgen::sim {

// Cycles from PHV strobe to the last header beat for the longest emission
// path, plus the fixed pipeline depth.
inline std::size_t worst_latency(const DeparserDag& dag, std::size_t bus_width_bits) {
  if (bus_width_bits == 0 || bus_width_bits % 8 != 0) {
    throw Error("sim", "bus width " + std::to_string(bus_width_bits) + " is not a positive multiple of 8");
  }
  const std::size_t bits = worst_case_header_bytes(dag) * 8;
  return (bits + bus_width_bits - 1) / bus_width_bits + rtl::kPipelineDepth;
}

}  // namespace dpgen::sim
