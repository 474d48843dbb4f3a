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

#include <algorithm>
#include <random>

#include "common.hpp"
#include "dpgen/dag.hpp"

namespace dpgen {
namespace {

std::vector<std::pair<std::string, std::size_t>> listing(const DeparserDag& dag,
                                                         const std::vector<EmissionPath>& paths) {
  std::vector<std::pair<std::string, std::size_t>> out;
  for (const auto& p : paths) out.emplace_back(path_label(dag, p), p.total_bytes);
  return out;
}

TEST(Dag, T1ParserDerivedListing) {
  const auto dag = build_parser_derived_dag(testing::load_program("t1"));
  const auto paths = enumerate_paths(dag);
  const std::vector<std::pair<std::string, std::size_t>> expected = {
      {"ethernet", 14},          {"ethernet->ipv4", 34}, {"ethernet->ipv4->tcp", 54},
      {"ethernet->ipv4->udp", 42}, {"ethernet->ipv6", 54}, {"ethernet->ipv6->tcp", 74},
      {"ethernet->ipv6->udp", 62}};
  EXPECT_EQ(listing(dag, paths), expected);
  EXPECT_EQ(worst_case_header_bytes(dag), 74u);
}

TEST(Dag, T1Naive) {
  const auto dag = build_naive_dag(testing::load_program("t1"));
  const auto paths = enumerate_paths(dag);
  EXPECT_EQ(paths.size(), 32u);
  EXPECT_EQ(paths.front().headers.size(), 0u);
  const auto all = std::find_if(paths.begin(), paths.end(), [](const auto& p) { return p.headers.size() == 5; });
  ASSERT_NE(all, paths.end());
  EXPECT_EQ(all->total_bytes, 102u);
  EXPECT_EQ(worst_case_header_bytes(dag), 102u);
}

TEST(Dag, OtherStacks) {
  EXPECT_EQ(enumerate_paths(build_parser_derived_dag(testing::load_program("t2"))).size(), 9u);
  EXPECT_EQ(count_paths(build_naive_dag(testing::load_program("t2")), kDefaultMaxPaths), 128u);
  EXPECT_EQ(count_paths(build_naive_dag(testing::load_program("t3")), kDefaultMaxPaths), 2048u);
  EXPECT_EQ(worst_case_header_bytes(build_naive_dag(testing::load_program("t2"))), 110u);
  EXPECT_EQ(worst_case_header_bytes(build_naive_dag(testing::load_program("t3"))), 126u);
}

TEST(Dag, EmptyProgram) {
  const auto src = testing::make_program({});
  const auto dag = build_naive_dag(src);
  const auto paths = enumerate_paths(dag);
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_TRUE(paths[0].headers.empty());
  EXPECT_EQ(paths[0].total_bytes, 0u);
  EXPECT_EQ(worst_case_header_bytes(dag), 0u);
}

TEST(Dag, SingleHeaderNaive) {
  EXPECT_EQ(enumerate_paths(build_naive_dag(testing::make_program({14}))).size(), 2u);
}

TEST(Dag, ParserChainFollowsGraphText) {
  const auto chain = testing::make_program({14}, {{{"start", "h0"}, {"h0", "end"}}});
  EXPECT_EQ(enumerate_paths(build_parser_derived_dag(chain)).size(), 1u);
  const auto skip = testing::make_program({14}, {{{"start", "h0"}, {"h0", "end"}, {"start", "end"}}});
  EXPECT_EQ(enumerate_paths(build_parser_derived_dag(skip)).size(), 2u);
}

TEST(Dag, ParserDerivedErrors) {
  EXPECT_THROW(build_parser_derived_dag(testing::make_program({14})), Error);
  // Parsed but never emitted.
  const auto src = make_source({{"eth", 112}, {"gre", 32}}, {"eth"},
                               ParserGraph{{{"start", "eth"}, {"eth", "gre"}, {"gre", "end"}}}, "test");
  try {
    build_parser_derived_dag(src);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.module(), "dag");
    EXPECT_NE(std::string(e.what()).find("gre"), std::string::npos);
  }
  // Parse order against emit order.
  EXPECT_THROW(build_parser_derived_dag(
                   testing::make_program({4, 4}, {{{"start", "h1"}, {"h1", "h0"}, {"h0", "end"}}})),
               Error);
}

TEST(Dag, PrunesNodesOffPaths) {
  // h1 is reachable but never reaches end; h2 reaches end but is unreachable.
  const auto dag = build_parser_derived_dag(
      testing::make_program({4, 4, 4}, {{{"start", "h0"}, {"h0", "h1"}, {"h0", "end"}, {"h2", "end"}}}));
  for (const auto& [a, b] : dag.edges) {
    EXPECT_NE(a, DeparserDag::node_of(1));
    EXPECT_NE(b, DeparserDag::node_of(1));
    EXPECT_NE(a, DeparserDag::node_of(2));
  }
  EXPECT_EQ(enumerate_paths(dag).size(), 1u);
}

TEST(Dag, PathCap) {
  const auto dag = build_naive_dag(testing::make_program(std::vector<std::size_t>(12, 1)));
  EXPECT_THROW(enumerate_paths(dag, 4095), Error);
  EXPECT_EQ(enumerate_paths(dag, 4096).size(), 4096u);
}

// Naive path-count law against exhaustive search, n = 0..12.
TEST(DagProperty, NaiveCountIsPowerOfTwo) {
  for (std::size_t n = 0; n <= 12; ++n) {
    std::vector<std::size_t> bytes(n);
    for (std::size_t i = 0; i < n; ++i) bytes[i] = 1 + i % 5;
    const auto dag = build_naive_dag(testing::make_program(bytes));
    const auto paths = enumerate_paths(dag);
    EXPECT_EQ(paths.size(), std::size_t{1} << n);
    EXPECT_EQ(testing::brute_force_paths(dag).size(), std::size_t{1} << n);
  }
}

// Random parser graphs: enumeration agrees with exhaustive search, each path
// is an emit-order subsequence, sizes and bitmaps are consistent, the order is
// lexicographic, and the longest-path DP equals the enumerated maximum.
TEST(DagProperty, RandomParserGraphs) {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 400; ++iter) {
    const std::size_t n = 1 + rng() % 9;
    std::vector<std::size_t> bytes(n);
    for (auto& b : bytes) b = 1 + rng() % 30;
    std::vector<std::pair<std::string, std::string>> edges;
    auto name = [&](std::size_t node) {
      return node == 0 ? std::string("start") : node == n + 1 ? std::string("end") : "h" + std::to_string(node - 1);
    };
    for (std::size_t a = 0; a <= n; ++a) {
      for (std::size_t b = a + 1; b <= n + 1; ++b) {
        if (rng() % 3 == 0) edges.emplace_back(name(a), name(b));
      }
    }
    edges.emplace_back("start", "end");
    const auto src = testing::make_program(bytes, edges);
    const auto dag = build_parser_derived_dag(src);
    const auto paths = enumerate_paths(dag);
    const auto oracle = testing::brute_force_paths(dag);

    std::vector<std::vector<std::size_t>> got;
    std::size_t max_bytes = 0;
    for (const auto& p : paths) {
      got.push_back(p.headers);
      std::size_t sum = 0;
      for (auto h : p.headers) sum += bytes[h];
      EXPECT_EQ(p.total_bytes, sum);
      EXPECT_EQ(p.valid_bitmap.count(), p.headers.size());
      EXPECT_TRUE(std::is_sorted(p.headers.begin(), p.headers.end()));
      EXPECT_TRUE(is_dag_path(dag, p.valid_bitmap));
      max_bytes = std::max(max_bytes, p.total_bytes);
    }
    EXPECT_TRUE(std::is_sorted(got.begin(), got.end()));
    auto sorted_oracle = oracle;
    std::sort(sorted_oracle.begin(), sorted_oracle.end());
    EXPECT_EQ(got, sorted_oracle);
    EXPECT_EQ(worst_case_header_bytes(dag), max_bytes);
    EXPECT_EQ(count_paths(dag, kDefaultMaxPaths), paths.size());
    EXPECT_EQ(enumerate_paths(dag), paths);
  }
}

TEST(Dag, Exports) {
  const auto dag = build_parser_derived_dag(testing::load_program("t1"));
  const auto paths = enumerate_paths(dag);
  const auto j = paths_to_json(dag, paths);
  ASSERT_EQ(j.size(), 7u);
  EXPECT_EQ(j[5]["sequence"], nlohmann::json({"ethernet", "ipv6", "tcp"}));
  EXPECT_EQ(j[5]["size_bytes"], 74);
  const auto table = paths_table(dag, paths);
  EXPECT_NE(table.find("ethernet->ipv6->tcp  74"), std::string::npos);
  const auto dot = dag_to_dot(dag);
  EXPECT_NE(dot.find("digraph"), std::string::npos);
}

}  // namespace
}  // namespace dpgen
