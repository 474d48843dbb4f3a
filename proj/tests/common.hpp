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


// Shared fixtures and independent reference models for the test suite.
// Nothing here calls into the code under test except to load programs.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "dpgen/dpgen.hpp"

namespace dpgen::testing {

inline std::string program_path(const std::string& name) {
  return std::string(DPGEN_SOURCE_DIR) + "/programs/" + name;
}

inline DeparserSource load_program(const std::string& stack) {
  return load_native(read_file(program_path(stack + ".json")));
}

inline const std::vector<std::string>& stacks() {
  static const std::vector<std::string> kStacks = {"t1", "t2", "t3"};
  return kStacks;
}

inline const std::vector<std::size_t>& widths() {
  static const std::vector<std::size_t> kWidths = {64, 128, 256, 512};
  return kWidths;
}

inline const std::vector<DagMode>& modes() {
  static const std::vector<DagMode> kModes = {DagMode::kNaive, DagMode::kParserDerived};
  return kModes;
}

// Headers "h0".."h{n-1}" with the given byte sizes, optional parser graph.
inline DeparserSource make_program(const std::vector<std::size_t>& bytes,
                                   std::optional<std::vector<std::pair<std::string, std::string>>> edges =
                                       std::nullopt) {
  std::vector<HeaderDecl> decl;
  std::vector<std::string> order;
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    decl.push_back({"h" + std::to_string(i), bytes[i] * 8});
    order.push_back("h" + std::to_string(i));
  }
  std::optional<ParserGraph> g;
  if (edges) g = ParserGraph{*edges};
  return make_source(decl, order, g, "test");
}

// ---------------------------------------------------------------------------
// Path oracle: subsets of the emit order accepted by an edge predicate,
// found by exhaustive search over all 2^n bitmaps.

inline std::vector<std::vector<std::size_t>> brute_force_paths(const DeparserDag& dag) {
  const std::size_t n = dag.size();
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> seq;
    for (std::size_t h = 0; h < n; ++h) {
      if (mask >> h & 1) seq.push_back(h);
    }
    std::size_t at = 0;
    bool ok = true;
    for (auto h : seq) {
      ok = ok && dag.edges.count({at, h + 1});
      at = h + 1;
    }
    if (ok && dag.edges.count({at, n + 1})) out.push_back(seq);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lane oracle: walk every path byte by byte and record, per lane, the
// (header, byte) nodes it visits, the node-to-node edges, and the
// first-seen-header condition of each edge.

struct OracleEdge {
  std::optional<LaneNode> from;  // nullopt = start
  std::optional<LaneNode> to;    // nullopt = end
  std::optional<std::size_t> condition;

  friend auto operator<=>(const OracleEdge&, const OracleEdge&) = default;
};

struct OracleLane {
  std::set<LaneNode> nodes;
  std::set<OracleEdge> edges;
  // Per reachable bitmap, the byte sequence the lane must emit.
  std::map<ValidBits, std::vector<LaneNode>> runs;
};

inline std::vector<OracleLane> lane_oracle(const DeparserDag& dag, std::size_t bus_width_bits) {
  const std::size_t w = bus_width_bits / 8;
  std::vector<OracleLane> lanes(w);
  for (const auto& seq : brute_force_paths(dag)) {
    ValidBits bm(dag.size());
    for (auto h : seq) bm.set(h);
    std::vector<std::optional<LaneNode>> last(w);
    std::vector<std::vector<LaneNode>> run(w);
    std::size_t pos = 0;
    for (auto h : seq) {
      for (std::size_t b = 0; b < dag.header_bytes[h]; ++b, ++pos) {
        const std::size_t lane = pos % w;
        const LaneNode node{h, b};
        const bool first = !last[lane] || last[lane]->header != h;
        lanes[lane].nodes.insert(node);
        lanes[lane].edges.insert({last[lane], node, first ? std::optional<std::size_t>(h) : std::nullopt});
        last[lane] = node;
        run[lane].push_back(node);
      }
    }
    for (std::size_t lane = 0; lane < w; ++lane) {
      lanes[lane].edges.insert({last[lane], std::nullopt, std::nullopt});
      lanes[lane].runs[bm] = run[lane];
    }
  }
  return lanes;
}

// Runs a lane FSM under `valid` from idle until it returns there.
inline std::vector<LaneNode> fsm_run(const LanePlan& plan, const ValidBits& valid) {
  std::vector<LaneNode> out;
  std::size_t s = plan.next(0, valid).value_or(0);
  while (s != 0 && out.size() <= plan.state_count()) {
    out.push_back(plan.mux_inputs.at(LanePlan::mux_select(s)).node);
    s = plan.next(s, valid).value_or(0);
  }
  return out;
}

}  // namespace dpgen::testing
