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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dpgen/error.hpp"
#include "dpgen/source.hpp"
#include "dpgen/valid_bits.hpp"

namespace dpgen::sim {

using Bytes = std::vector<std::uint8_t>;

// PHV snapshot. data[i] holds PHV_data bits [8i, 8i + 8).
struct Phv {
  Bytes data;
  ValidBits valid;

  friend bool operator==(const Phv&, const Phv&) = default;
};

// One beat of a stream bus.
struct Frame {
  Bytes data;
  std::vector<bool> keep;
  bool last = false;

  std::size_t kept() const {
    std::size_t n = 0;
    for (bool k : keep) n += k ? 1 : 0;
    return n;
  }

  friend bool operator==(const Frame&, const Frame&) = default;
};

struct Stimulus {
  std::string name;
  Phv phv;
  Bytes payload;
  bool has_payload = false;
};

struct SimResult {
  std::vector<Frame> frames;
  std::size_t header_emit_cycles = 0;
  std::size_t total_cycles = 0;
};

inline void check_phv(const Phv& phv, const PhvLayout& layout, const char* module) {
  if (phv.data.size() * 8 != layout.phv_data_width_bits) {
    throw Error(module, "PHV_data is " + std::to_string(phv.data.size() * 8) + " bits, layout needs " +
                            std::to_string(layout.phv_data_width_bits));
  }
  if (phv.valid.width() != layout.phv_valid_width_bits) {
    throw Error(module, "PHV_valid is " + std::to_string(phv.valid.width()) + " bits, layout needs " +
                            std::to_string(layout.phv_valid_width_bits));
  }
}

inline void check_stimulus(const Stimulus& s, const PhvLayout& layout, const char* module) {
  check_phv(s.phv, layout, module);
  if (s.has_payload != !s.payload.empty()) {
    throw Error(module, "has_payload must be set exactly when the payload is non-empty");
  }
}

// Splits a byte stream into frames of `lane_bytes`. An empty stream is a
// single frame with no kept bytes and last set.
inline std::vector<Frame> segment(std::span<const std::uint8_t> stream, std::size_t lane_bytes) {
  std::vector<Frame> out;
  std::size_t pos = 0;
  do {
    Frame f;
    f.data.assign(lane_bytes, 0);
    f.keep.assign(lane_bytes, false);
    for (std::size_t b = 0; b < lane_bytes && pos < stream.size(); ++b, ++pos) {
      f.data[b] = stream[pos];
      f.keep[b] = true;
    }
    f.last = pos >= stream.size();
    out.push_back(std::move(f));
  } while (pos < stream.size());
  return out;
}

// Concatenates the kept bytes of a frame stream.
inline Bytes reassemble(const std::vector<Frame>& frames) {
  Bytes out;
  for (const auto& f : frames) {
    for (std::size_t b = 0; b < f.data.size(); ++b) {
      if (f.keep[b]) out.push_back(f.data[b]);
    }
  }
  return out;
}

// Stream-bus well-formedness: keep contiguous from byte 0, non-last frames
// full, and last on exactly the final frame.
inline bool well_formed(const std::vector<Frame>& frames) {
  if (frames.empty() || !frames.back().last) return false;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto& f = frames[i];
    bool hole = false;
    for (bool k : f.keep) {
      if (k && hole) return false;
      if (!k) hole = true;
    }
    if (i + 1 < frames.size() && (f.last || hole)) return false;
  }
  return true;
}

}  // namespace dpgen::sim
