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


#include <gtest/gtest.h>

#include <set>

#include "common.hpp"
#include "dpgen/lanes.hpp"

namespace dpgen {
namespace {

std::set<testing::OracleEdge> edges_of(const LaneGraph& g) {
  std::set<testing::OracleEdge> out;
  auto node = [&](std::size_t v) -> std::optional<LaneNode> {
    if (v == kLaneStart || v == kLaneEnd) return std::nullopt;
    return g.nodes.at(v - 1);
  };
  for (const auto& e : g.edges) out.insert({node(e.from), node(e.to), e.condition});
  return out;
}

TEST(Lanes, T1At128Bits) {
  const auto src = testing::load_program("t1");
  const auto graphs = generate_lane_graphs(build_parser_derived_dag(src), src.layout, 128);
  ASSERT_EQ(graphs.size(), 16u);
  const auto& lane0 = graphs[0].nodes;
  const std::size_t eth = 0, ipv4 = 1;
  EXPECT_TRUE(std::binary_search(lane0.begin(), lane0.end(), LaneNode{eth, 0}));
  EXPECT_TRUE(std::binary_search(lane0.begin(), lane0.end(), LaneNode{ipv4, 2}));
  EXPECT_TRUE(std::binary_search(graphs[14].nodes.begin(), graphs[14].nodes.end(), LaneNode{ipv4, 0}));
  EXPECT_TRUE(std::binary_search(graphs[15].nodes.begin(), graphs[15].nodes.end(), LaneNode{ipv4, 1}));
}

TEST(Lanes, SingleHeaderOfBusWidth) {
  const auto src = testing::make_program({8}, {{{"start", "h0"}, {"h0", "end"}}});
  const auto graphs = generate_lane_graphs(build_parser_derived_dag(src), src.layout, 64);
  ASSERT_EQ(graphs.size(), 8u);
  for (std::size_t lane = 0; lane < 8; ++lane) {
    ASSERT_EQ(graphs[lane].nodes.size(), 1u);
    EXPECT_EQ(graphs[lane].nodes[0], (LaneNode{0, lane}));
    ASSERT_EQ(graphs[lane].edges.size(), 2u);
    EXPECT_EQ(graphs[lane].edges[0].condition, std::optional<std::size_t>(0));
    EXPECT_FALSE(graphs[lane].edges[1].condition);
    const auto plan = translate_lane(graphs[lane], src.layout);
    EXPECT_EQ(plan.mux_inputs.size(), 1u);
    EXPECT_EQ(plan.state_count(), 2u);
    EXPECT_EQ(plan.mux_inputs[0].phv_bit_offset, 8 * lane);
  }
}

TEST(Lanes, EmptyDag) {
  const auto src = testing::make_program({});
  const auto graphs = generate_lane_graphs(build_naive_dag(src), src.layout, 256);
  ASSERT_EQ(graphs.size(), 32u);
  for (const auto& g : graphs) {
    EXPECT_TRUE(g.nodes.empty());
    const auto plan = translate_lane(g, src.layout);
    EXPECT_EQ(plan.state_count(), 1u);
    EXPECT_EQ(plan.next(0, ValidBits(0)).value_or(0), 0u);
  }
}

TEST(Lanes, BusWidthErrors) {
  const auto src = testing::load_program("t1");
  const auto dag = build_naive_dag(src);
  EXPECT_THROW(generate_lane_graphs(dag, src.layout, 0), Error);
  EXPECT_THROW(generate_lane_graphs(dag, src.layout, 100), Error);
  EXPECT_EQ(generate_lane_graphs(dag, src.layout, 24).size(), 3u);
}

// Eth -> IPv4 conditioned on IPv4, Eth -> TCP conditioned on TCP.
LaneGraph skip_graph() {
  LaneGraph g;
  g.lane = 0;
  g.valid_width = 3;  // eth, ipv4, tcp
  g.nodes = {{0, 0}, {1, 0}, {2, 0}};
  g.edges = {{kLaneStart, 1, 0, {}}, {1, 2, 1, {}}, {1, 3, 2, {}}, {1, kLaneEnd, std::nullopt, {}},
             {2, kLaneEnd, std::nullopt, {}}, {3, kLaneEnd, std::nullopt, {}}};
  return g;
}

PhvLayout skip_layout() {
  return make_source({{"eth", 8}, {"ipv4", 8}, {"tcp", 8}}, {"eth", "ipv4", "tcp"}, std::nullopt, "test").layout;
}

TEST(Lanes, ConditionedSkipEdge) {
  auto g = skip_graph();
  g.domain = {ValidBits::from_string("001"), ValidBits::from_string("011"), ValidBits::from_string("101")};
  const auto plan = translate_lane(g, skip_layout());
  EXPECT_EQ(plan.next(1, ValidBits::from_string("101")), std::optional<std::size_t>(3));
  EXPECT_EQ(plan.next(1, ValidBits::from_string("011")), std::optional<std::size_t>(2));
  // Exhaustive over the 2-bit sub-bitmap with eth set; {IPv4, TCP} both set
  // is outside the domain and has two enabled transitions.
  for (const char* bits : {"001", "011", "101"}) {
    EXPECT_NO_THROW(plan.next(1, ValidBits::from_string(bits)));
  }
  EXPECT_THROW(plan.next(1, ValidBits::from_string("111")), Error);
}

TEST(Lanes, AmbiguousGraphIsACompileError) {
  try {
    translate_lane(skip_graph(), skip_layout());
    FAIL();
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_EQ(e.module(), "lanes");
    EXPECT_NE(msg.find("eth[0]"), std::string::npos) << msg;
    EXPECT_NE(msg.find("110"), std::string::npos) << msg;
  }
}

// Generated graphs equal the brute-force oracle's node and edge sets, plans
// obey the mux/state laws, and every FSM replays exactly the oracle's byte
// sequence for every reachable bitmap.
TEST(LanesProperty, MatchesOracleOnAllStacks) {
  for (const auto& stack : testing::stacks()) {
    const auto src = testing::load_program(stack);
    for (auto mode : testing::modes()) {
      const auto dag = mode == DagMode::kNaive ? build_naive_dag(src) : build_parser_derived_dag(src);
      for (auto w : testing::widths()) {
        SCOPED_TRACE(stack + " " + to_string(mode) + " " + std::to_string(w));
        const auto graphs = generate_lane_graphs(dag, src.layout, w);
        const auto oracle = testing::lane_oracle(dag, w);
        ASSERT_EQ(graphs.size(), oracle.size());
        for (std::size_t lane = 0; lane < graphs.size(); ++lane) {
          const auto& g = graphs[lane];
          EXPECT_EQ(std::set<LaneNode>(g.nodes.begin(), g.nodes.end()), oracle[lane].nodes);
          EXPECT_EQ(edges_of(g), oracle[lane].edges);
          const auto plan = translate_lane(g, src.layout);
          EXPECT_EQ(plan.mux_inputs.size(), g.nodes.size());
          EXPECT_EQ(plan.state_count(), g.nodes.size() + 1);
          for (const auto& m : plan.mux_inputs) {
            EXPECT_EQ(m.phv_bit_offset, src.layout.instances[m.node.header].phv_data_offset_bits + 8 * m.node.byte);
          }
          for (const auto& [bm, run] : oracle[lane].runs) {
            ASSERT_EQ(testing::fsm_run(plan, bm), run) << "lane " << lane << " bitmap " << bm.to_string();
          }
        }
      }
    }
  }
}

// Header-last flags the final byte a lane emits for a packet.
TEST(LanesProperty, HeaderLastOnFinalByte) {
  const auto src = testing::load_program("t2");
  const auto dag = build_parser_derived_dag(src);
  const auto plans = translate_lanes(generate_lane_graphs(dag, src.layout, 64), src.layout);
  for (const auto& p : enumerate_paths(dag)) {
    for (const auto& plan : plans) {
      std::size_t s = plan.next(0, p.valid_bitmap).value_or(0);
      while (s != 0) {
        const auto nxt = plan.next(s, p.valid_bitmap).value_or(0);
        EXPECT_EQ(plan.header_last(s, p.valid_bitmap), nxt == 0);
        s = nxt;
      }
    }
  }
}

TEST(LanesProperty, ParserDerivedMuxesNoLargerThanNaive) {
  for (const auto& stack : testing::stacks()) {
    const auto src = testing::load_program(stack);
    const auto naive = translate_lanes(generate_lane_graphs(build_naive_dag(src), src.layout, 512), src.layout);
    const auto parsed =
        translate_lanes(generate_lane_graphs(build_parser_derived_dag(src), src.layout, 512), src.layout);
    for (std::size_t lane = 0; lane < naive.size(); ++lane) {
      EXPECT_LE(parsed[lane].mux_inputs.size(), naive[lane].mux_inputs.size()) << stack << " lane " << lane;
    }
  }
}

TEST(Lanes, Exports) {
  const auto src = testing::load_program("t1");
  const auto graphs = generate_lane_graphs(build_parser_derived_dag(src), src.layout, 64);
  const auto plan = translate_lane(graphs[3], src.layout);
  const auto j = lane_plan_to_json(plan, src.layout);
  EXPECT_EQ(j["lane"], 3);
  EXPECT_EQ(j["mux_inputs"].size(), plan.mux_inputs.size());
  EXPECT_EQ(j["fsm_states"], plan.state_count());
  const auto dot = lane_graph_to_dot(graphs[3], src.layout);
  EXPECT_NE(dot.find("digraph lane_3"), std::string::npos);
}

}  // namespace
}  // namespace dpgen
