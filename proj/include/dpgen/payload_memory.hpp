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
#include <map>
#include <string>
#include <vector>

#include "dpgen/dag.hpp"
#include "dpgen/error.hpp"
#include "dpgen/valid_bits.hpp"
#include "json.hpp"

namespace dpgen {

// Control word for the payload shifters under one PHV_valid value.
//
// With H header bits and a w-bit bus, payload byte 0 lands on byte lane
// (H mod w) / 8 of the last header beat. Every byte shifter rotates its input
// by that many lanes; shifters below the rotation take the byte registered on
// the previous beat.
struct PayloadCtrlEntry {
  ValidBits valid_bitmap;
  std::size_t header_bits_total = 0;
  std::size_t rotate_bytes = 0;
  ValidBits delay_mask;  // bus_width_bits / 8 bits

  friend bool operator==(const PayloadCtrlEntry&, const PayloadCtrlEntry&) = default;
};

class PayloadControlMemory {
 public:
  PayloadControlMemory() = default;
  explicit PayloadControlMemory(std::size_t bus_width_bits) : bus_width_bits_(bus_width_bits) {}

  std::size_t bus_width_bits() const { return bus_width_bits_; }
  std::size_t size() const { return entries_.size(); }
  const std::map<ValidBits, PayloadCtrlEntry>& entries() const { return entries_; }

  bool contains(const ValidBits& bitmap) const { return entries_.count(bitmap) > 0; }

  const PayloadCtrlEntry& lookup(const ValidBits& bitmap) const {
    auto it = entries_.find(bitmap);
    if (it == entries_.end()) {
      throw Error("payload_mem", "invalid header combination: valid bitmap " +
                                     bitmap.to_string() + " is not reachable");
    }
    return it->second;
  }

  void insert(PayloadCtrlEntry e) {
    auto [it, fresh] = entries_.emplace(e.valid_bitmap, e);
    if (!fresh && it->second.header_bits_total != e.header_bits_total) {
      throw Error("payload_mem", "bitmap " + e.valid_bitmap.to_string() +
                                     " listed with two different header sizes");
    }
  }

 private:
  std::size_t bus_width_bits_ = 0;
  std::map<ValidBits, PayloadCtrlEntry> entries_;
};

inline PayloadCtrlEntry make_payload_entry(const ValidBits& bitmap, std::size_t header_bits,
                                           std::size_t bus_width_bits) {
  PayloadCtrlEntry e;
  e.valid_bitmap = bitmap;
  e.header_bits_total = header_bits;
  e.rotate_bytes = (header_bits % bus_width_bits) / 8;
  e.delay_mask = ValidBits(bus_width_bits / 8);
  for (std::size_t b = 0; b < e.rotate_bytes; ++b) e.delay_mask.set(b);
  return e;
}

inline PayloadControlMemory build_payload_memory(const std::vector<EmissionPath>& paths,
                                                 std::size_t bus_width_bits) {
  if (bus_width_bits == 0 || bus_width_bits % 8 != 0) {
    throw Error("payload_mem", "bus width " + std::to_string(bus_width_bits) +
                                   " is not a positive multiple of 8");
  }
  PayloadControlMemory mem(bus_width_bits);
  for (const auto& p : paths) {
    mem.insert(make_payload_entry(p.valid_bitmap, p.total_bytes * 8, bus_width_bits));
  }
  return mem;
}

inline nlohmann::json payload_memory_to_json(const PayloadControlMemory& mem) {
  nlohmann::json j;
  j["bus_width_bits"] = mem.bus_width_bits();
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [bitmap, e] : mem.entries()) {
    entries.push_back({{"valid", bitmap.to_string()},
                       {"ph_w", e.header_bits_total},
                       {"rotate_bytes", e.rotate_bytes},
                       {"delay_mask", e.delay_mask.to_string()}});
  }
  j["entries"] = entries;
  return j;
}

}  // namespace dpgen
