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


// End-to-end compile flow shared by the command-line tool and the tests.

#pragma once

#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dpgen/bmv2.hpp"
#include "dpgen/dag.hpp"
#include "dpgen/error.hpp"
#include "dpgen/lanes.hpp"
#include "dpgen/native.hpp"
#include "dpgen/payload_memory.hpp"
#include "dpgen/rtl/design.hpp"
#include "dpgen/source.hpp"

namespace dpgen {

enum class InputFormat { kBmv2, kNative };

struct CompileConfig {
  std::string input_path;
  InputFormat format = InputFormat::kBmv2;
  DagMode mode = DagMode::kParserDerived;
  std::size_t bus_width_bits = 512;
  std::string out_dir = ".";
  std::string top_name = "deparser";
  std::size_t max_paths = kDefaultMaxPaths;

  void validate() const {
    if (bus_width_bits == 0 || bus_width_bits % 8 != 0) {
      throw Error("config", "bus width " + std::to_string(bus_width_bits) +
                                " is not a positive multiple of 8");
    }
    if (max_paths == 0) throw Error("config", "path cap must be positive");
    if (top_name.empty()) throw Error("config", "top name must not be empty");
  }
};

inline std::string read_file(const std::string& path, const char* module = "config") {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(module, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline DeparserSource load_source(const std::string& text, InputFormat format) {
  return format == InputFormat::kBmv2 ? load_bmv2(text) : load_native(text);
}

inline DeparserDag build_dag(const DeparserSource& src, DagMode mode) {
  return mode == DagMode::kNaive ? build_naive_dag(src) : build_parser_derived_dag(src);
}

// Front half: source to emission paths.
struct Analysis {
  DeparserSource source;
  DeparserDag dag;
  std::vector<EmissionPath> paths;
};

inline Analysis analyze(DeparserSource source, DagMode mode, std::size_t max_paths = kDefaultMaxPaths) {
  Analysis a;
  a.source = std::move(source);
  a.dag = build_dag(a.source, mode);
  a.paths = enumerate_paths(a.dag, max_paths);
  return a;
}

struct Compilation {
  Analysis analysis;
  std::size_t bus_width_bits = 0;
  std::vector<LaneGraph> lane_graphs;
  std::vector<LanePlan> lane_plans;
  PayloadControlMemory payload_memory;
  rtl::StructuralDesign design;
};

inline Compilation compile(Analysis analysis, std::size_t bus_width_bits,
                           const std::string& top_name = "deparser",
                           std::size_t max_paths = kDefaultMaxPaths) {
  Compilation c;
  c.analysis = std::move(analysis);
  c.bus_width_bits = bus_width_bits;
  const auto& layout = c.analysis.source.layout;
  c.lane_graphs = generate_lane_graphs(c.analysis.dag, layout, bus_width_bits, max_paths);
  c.lane_plans = translate_lanes(c.lane_graphs, layout);
  c.payload_memory = build_payload_memory(c.analysis.paths, bus_width_bits);
  c.design = rtl::lower(c.lane_plans, c.payload_memory, layout, bus_width_bits, top_name);
  return c;
}

inline Compilation compile(const DeparserSource& source, DagMode mode, std::size_t bus_width_bits,
                           const std::string& top_name = "deparser",
                           std::size_t max_paths = kDefaultMaxPaths) {
  return compile(analyze(source, mode, max_paths), bus_width_bits, top_name, max_paths);
}

}  // namespace dpgen
