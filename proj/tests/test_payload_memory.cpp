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

#include "common.hpp"
#include "dpgen/payload_memory.hpp"

namespace dpgen {
namespace {

ValidBits bits(std::size_t width, std::initializer_list<std::size_t> set) {
  ValidBits b(width);
  for (auto i : set) b.set(i);
  return b;
}

TEST(PayloadMemory, EthIpv4UdpAt512) {
  const auto e = make_payload_entry(bits(5, {0, 1, 4}), 42 * 8, 512);
  EXPECT_EQ(e.rotate_bytes, 42u);
  EXPECT_EQ(e.delay_mask.width(), 64u);
  for (std::size_t b = 0; b < 64; ++b) EXPECT_EQ(e.delay_mask.test(b), b < 42) << b;
}

TEST(PayloadMemory, EthOnlyAt64) {
  const auto e = make_payload_entry(bits(5, {0}), 14 * 8, 64);
  EXPECT_EQ(e.rotate_bytes, 6u);
  EXPECT_EQ(e.delay_mask.to_string(), "00111111");
}

TEST(PayloadMemory, EmptyBitmap) {
  const auto e = make_payload_entry(ValidBits(5), 0, 128);
  EXPECT_EQ(e.rotate_bytes, 0u);
  EXPECT_TRUE(e.delay_mask.none());
}

TEST(PayloadMemory, EntryPerPath) {
  const auto src = testing::load_program("t1");
  const auto naive = enumerate_paths(build_naive_dag(src));
  const auto parsed = enumerate_paths(build_parser_derived_dag(src));
  const auto mem_naive = build_payload_memory(naive, 128);
  EXPECT_EQ(mem_naive.size(), 32u);
  EXPECT_EQ(build_payload_memory(parsed, 128).size(), 7u);
  for (std::size_t m = 0; m < 32; ++m) {
    ValidBits b(5);
    for (std::size_t i = 0; i < 5; ++i) b.set(i, m >> i & 1);
    EXPECT_TRUE(mem_naive.contains(b));
    EXPECT_NO_THROW(mem_naive.lookup(b));
  }
}

TEST(PayloadMemory, MissIsInvalidHeaderCombination) {
  const auto src = testing::load_program("t1");
  const auto mem = build_payload_memory(enumerate_paths(build_parser_derived_dag(src)), 512);
  const auto tcp_only = bits(5, {3});
  EXPECT_FALSE(mem.contains(tcp_only));
  try {
    mem.lookup(tcp_only);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.module(), "payload_mem");
    EXPECT_NE(std::string(e.what()).find("invalid header combination"), std::string::npos);
  }
}

TEST(PayloadMemory, ConflictingSizes) {
  PayloadControlMemory mem(64);
  mem.insert(make_payload_entry(bits(2, {0}), 8, 64));
  EXPECT_NO_THROW(mem.insert(make_payload_entry(bits(2, {0}), 8, 64)));
  EXPECT_THROW(mem.insert(make_payload_entry(bits(2, {0}), 16, 64)), Error);
}

// Rotation places payload byte 0 at the lane following the headers.
TEST(PayloadMemoryProperty, RotationMatchesHeaderResidue) {
  for (const auto& stack : testing::stacks()) {
    const auto src = testing::load_program(stack);
    for (auto mode : testing::modes()) {
      const auto paths = enumerate_paths(mode == DagMode::kNaive ? build_naive_dag(src) : build_parser_derived_dag(src));
      for (auto w : testing::widths()) {
        const auto mem = build_payload_memory(paths, w);
        EXPECT_EQ(mem.size(), paths.size());
        for (const auto& p : paths) {
          const auto& e = mem.lookup(p.valid_bitmap);
          EXPECT_EQ(e.header_bits_total, p.total_bytes * 8);
          EXPECT_EQ(e.rotate_bytes, p.total_bytes % (w / 8));
          EXPECT_EQ(e.delay_mask.count(), e.rotate_bytes);
        }
      }
    }
  }
}

TEST(PayloadMemory, Json) {
  const auto src = testing::load_program("t1");
  const auto mem = build_payload_memory(enumerate_paths(build_parser_derived_dag(src)), 64);
  const auto j = payload_memory_to_json(mem);
  EXPECT_EQ(j["bus_width_bits"], 64);
  ASSERT_EQ(j["entries"].size(), 7u);
  EXPECT_EQ(j["entries"][0]["valid"], "00001");
  EXPECT_EQ(j["entries"][0]["ph_w"], 112);
  EXPECT_EQ(j["entries"][0]["rotate_bytes"], 6);
}

}  // namespace
}  // namespace dpgen
