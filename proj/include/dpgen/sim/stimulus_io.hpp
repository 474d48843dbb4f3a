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

// Stimulus files, result dumps, random suites and pcap export.
//
// A stimulus is { "valid": [header names], "header_data": hex, "payload": hex }
// where header_data is the whole PHV_data bus, byte 0 first (an empty string
// means all zeros). A file holds one stimulus, an array of them, or
// { "stimuli": [...] }.

#pragma once

#include <cstdint>
#include <fstream>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dpgen/dag.hpp"
#include "dpgen/error.hpp"
#include "dpgen/sim/frame.hpp"
#include "dpgen/source.hpp"
#include "json.hpp"

namespace dpgen::sim {

inline std::string to_hex(std::span<const std::uint8_t> bytes) {
  static const char* kDigits = "0123456789abcdef";
  std::string s;
  s.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 0xf]);
  }
  return s;
}

inline Bytes from_hex(std::string_view hex) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  if (hex.size() % 2 != 0) throw Error("sim", "hex string has an odd number of digits");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw Error("sim", std::string("bad hex digit '") + c + "'");
  };
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
  }
  return out;
}

inline Stimulus stimulus_from_json(const nlohmann::json& j, const PhvLayout& layout) {
  if (!j.is_object()) throw Error("sim", "stimulus must be an object");
  Stimulus s;
  s.name = j.value("name", std::string{});
  s.phv.valid = ValidBits(layout.phv_valid_width_bits);
  for (const auto& v : j.value("valid", nlohmann::json::array())) {
    const auto name = v.get<std::string>();
    auto idx = layout.index_of(name);
    if (!idx) throw Error("sim", "stimulus marks unknown header '" + name + "' valid");
    s.phv.valid.set(*idx);
  }
  const auto data = j.value("header_data", std::string{});
  s.phv.data = data.empty() ? Bytes(layout.phv_data_width_bits / 8, 0) : from_hex(data);
  if (s.phv.data.size() * 8 != layout.phv_data_width_bits) {
    throw Error("sim", "header_data must cover PHV_data (" +
                           std::to_string(layout.phv_data_width_bits / 8) + " bytes)");
  }
  s.payload = from_hex(j.value("payload", std::string{}));
  s.has_payload = !s.payload.empty();
  return s;
}

inline nlohmann::json stimulus_to_json(const Stimulus& s, const PhvLayout& layout) {
  std::vector<std::string> valid;
  for (std::size_t i = 0; i < layout.instances.size(); ++i) {
    if (s.phv.valid.test(i)) valid.push_back(layout.instances[i].name);
  }
  nlohmann::json j{{"valid", valid}, {"header_data", to_hex(s.phv.data)}, {"payload", to_hex(s.payload)}};
  if (!s.name.empty()) j["name"] = s.name;
  return j;
}

inline std::vector<Stimulus> load_stimuli(const std::string& text, const PhvLayout& layout) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("sim", std::string("malformed stimuli file: ") + e.what());
  }
  if (doc.is_object() && doc.contains("stimuli")) doc = doc["stimuli"];
  if (doc.is_object()) doc = nlohmann::json::array({doc});
  if (!doc.is_array()) throw Error("sim", "stimuli file must hold an object or an array");
  std::vector<Stimulus> out;
  for (const auto& j : doc) out.push_back(stimulus_from_json(j, layout));
  return out;
}

inline nlohmann::json frames_to_json(const std::vector<Frame>& frames) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& f : frames) {
    std::string keep;
    for (std::size_t b = f.keep.size(); b-- > 0;) keep.push_back(f.keep[b] ? '1' : '0');
    arr.push_back({{"data", to_hex(f.data)}, {"keep", keep}, {"last", f.last}});
  }
  return arr;
}

// Random reachable stimuli: a uniformly chosen emission path, random PHV
// bytes, and a payload of 0 to 4 bus beats.
class StimulusGenerator {
 public:
  StimulusGenerator(const PhvLayout& layout, std::vector<EmissionPath> paths,
                    std::size_t bus_width_bits, std::uint64_t seed)
      : layout_(layout), paths_(std::move(paths)), lane_bytes_(bus_width_bits / 8), rng_(seed) {
    if (paths_.empty()) throw Error("sim", "no emission paths to draw stimuli from");
  }

  Stimulus next() {
    std::uniform_int_distribution<std::size_t> pick(0, paths_.size() - 1);
    std::uniform_int_distribution<int> byte(0, 255);
    std::uniform_int_distribution<std::size_t> len(0, 4 * lane_bytes_);
    Stimulus s;
    s.name = "random-" + std::to_string(count_++);
    s.phv.valid = paths_[pick(rng_)].valid_bitmap;
    s.phv.data.resize(layout_.phv_data_width_bits / 8);
    for (auto& b : s.phv.data) b = static_cast<std::uint8_t>(byte(rng_));
    s.payload.resize(len(rng_));
    for (auto& b : s.payload) b = static_cast<std::uint8_t>(byte(rng_));
    s.has_payload = !s.payload.empty();
    return s;
  }

 private:
  const PhvLayout& layout_;
  std::vector<EmissionPath> paths_;
  std::size_t lane_bytes_;
  std::mt19937_64 rng_;
  std::size_t count_ = 0;
};

// Classic libpcap file, Ethernet link type, one record per packet.
inline void write_pcap(const std::string& path, const std::vector<Bytes>& packets) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("sim", "cannot open '" + path + "' for writing");
  auto u32 = [&](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
  auto u16 = [&](std::uint16_t v) { out.write(reinterpret_cast<const char*>(&v), 2); };
  u32(0xa1b2c3d4);
  u16(2);
  u16(4);
  u32(0);
  u32(0);
  u32(65535);
  u32(1);
  std::uint32_t ts = 0;
  for (const auto& p : packets) {
    u32(ts++);
    u32(0);
    u32(static_cast<std::uint32_t>(p.size()));
    u32(static_cast<std::uint32_t>(p.size()));
    out.write(reinterpret_cast<const char*>(p.data()), static_cast<std::streamsize>(p.size()));
  }
}

}  // namespace dpgen::sim
