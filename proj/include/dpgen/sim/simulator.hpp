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

// Beat-level model of the generated architecture. Each lane runs its own
// state machine and multiplexer, the payload shifters rotate and delay input
// bytes as directed by the control memory, and the selector merges the two.
// Nothing here concatenates headers directly; agreement with the golden
// deparser is a property of the compiled structures.

#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "dpgen/error.hpp"
#include "dpgen/lanes.hpp"
#include "dpgen/payload_memory.hpp"
#include "dpgen/rtl/design.hpp"
#include "dpgen/sim/frame.hpp"

namespace dpgen::sim {

namespace detail {

struct HeaderBeat {
  std::vector<bool> valid;
  Bytes data;
  bool last = false;  // PHV last
};

struct PayloadBeat {
  Bytes data;
  std::vector<bool> keep;
  bool last = false;
};

// PHV shifters: every lane FSM leaves idle on the PHV strobe and advances
// one state per beat until it returns to idle.
inline std::vector<HeaderBeat> run_phv_shifters(const std::vector<LanePlan>& plans, const Phv& phv) {
  const std::size_t w = plans.size();
  auto step = [&](const LanePlan& p, std::size_t state) -> std::size_t {
    return p.next(state, phv.valid).value_or(0);
  };

  std::vector<std::size_t> state(w);
  std::size_t max_states = 0;
  for (std::size_t lane = 0; lane < w; ++lane) {
    state[lane] = step(plans[lane], 0);
    max_states = std::max(max_states, plans[lane].state_count());
  }

  std::vector<HeaderBeat> beats;
  while (std::any_of(state.begin(), state.end(), [](std::size_t s) { return s != 0; })) {
    if (beats.size() > max_states) throw Error("sim", "lane state machine does not terminate");
    HeaderBeat beat;
    beat.valid.assign(w, false);
    beat.data.assign(w, 0);
    bool all_last = true;
    for (std::size_t lane = 0; lane < w; ++lane) {
      const LanePlan& p = plans[lane];
      const std::size_t s = state[lane];
      if (!LanePlan::header_valid(s)) continue;
      const MuxInput& in = p.mux_inputs.at(LanePlan::mux_select(s));
      beat.valid[lane] = true;
      beat.data[lane] = phv.data.at(in.phv_bit_offset / 8);
      all_last = all_last && p.header_last(s, phv.valid);
      state[lane] = step(p, s);
    }
    beat.last = all_last;
    beats.push_back(std::move(beat));
  }
  return beats;
}

// Payload shifters. Output byte b takes input lane (b - rotate) mod W; the
// lanes below `rotate` take it from the previous input beat's register.
inline std::vector<PayloadBeat> run_payload_shifters(const std::vector<Frame>& input,
                                                     const PayloadCtrlEntry& ctrl, std::size_t w) {
  const std::size_t r = ctrl.rotate_bytes;
  std::vector<PayloadBeat> out;
  for (std::size_t m = 0;; ++m) {
    const Frame* cur = m < input.size() ? &input[m] : nullptr;
    const Frame* reg = m >= 1 && m - 1 < input.size() ? &input[m - 1] : nullptr;
    PayloadBeat beat;
    beat.data.assign(w, 0);
    beat.keep.assign(w, false);
    for (std::size_t b = 0; b < w; ++b) {
      const Frame* src = ctrl.delay_mask.test(b) ? reg : cur;
      const std::size_t from = (b + w - r) % w;
      if (src && src->keep[from]) {
        beat.data[b] = src->data[from];
        beat.keep[b] = true;
      }
    }
    // The final input beat either fits after the rotation or spills one beat.
    const bool last = (cur && cur->last && cur->kept() <= w - r) ||
                      (reg && reg->last && reg->kept() > w - r);
    beat.last = last;
    out.push_back(std::move(beat));
    if (last) break;
    if (m > input.size()) throw Error("sim", "payload stream has no last beat");
  }
  return out;
}

}  // namespace detail

inline SimResult simulate(const rtl::StructuralDesign& design, const PayloadControlMemory& memory,
                          const std::vector<LanePlan>& plans, const Stimulus& stim) {
  const std::size_t w = design.lane_bytes();
  if (plans.size() != w) throw Error("sim", "lane plan count does not match the bus width");
  if (stim.phv.data.size() * 8 != design.phv_data_width_bits ||
      stim.phv.valid.width() != design.phv_valid_width_bits) {
    throw Error("sim", "stimulus PHV widths do not match the design");
  }
  if (stim.has_payload != !stim.payload.empty()) {
    throw Error("sim", "has_payload must be set exactly when the payload is non-empty");
  }

  const PayloadCtrlEntry& ctrl = memory.lookup(stim.phv.valid);
  const auto header = detail::run_phv_shifters(plans, stim.phv);

  std::vector<detail::PayloadBeat> payload;
  std::size_t payload_base = 0;
  if (stim.has_payload) {
    const auto input = segment(stim.payload, w);
    payload = detail::run_payload_shifters(input, ctrl, w);
    // Payload byte 0 shares the last header beat when the headers leave a
    // partial beat, and starts a fresh beat otherwise.
    payload_base = header.size() - (ctrl.rotate_bytes > 0 && !header.empty() ? 1 : 0);
  }

  const std::size_t beats = std::max(header.size(), payload_base + payload.size());
  SimResult result;
  result.header_emit_cycles = header.size();
  std::size_t payload_only = 0;
  for (std::size_t t = 0; t < beats; ++t) {
    Frame f;
    f.data.assign(w, 0);
    f.keep.assign(w, false);
    const detail::HeaderBeat* hb = t < header.size() ? &header[t] : nullptr;
    const detail::PayloadBeat* pb =
        t >= payload_base && t - payload_base < payload.size() ? &payload[t - payload_base] : nullptr;
    for (std::size_t b = 0; b < w; ++b) {
      if (hb && hb->valid[b]) {
        f.data[b] = hb->data[b];
        f.keep[b] = true;
      } else if (pb && pb->keep[b]) {
        f.data[b] = pb->data[b];
        f.keep[b] = true;
      }
    }
    f.last = stim.has_payload ? (pb && pb->last) : (hb && hb->last);
    if (!hb) ++payload_only;
    result.frames.push_back(std::move(f));
  }
  if (result.frames.empty()) {
    // Nothing to send: one empty beat closes the packet.
    Frame f;
    f.data.assign(w, 0);
    f.keep.assign(w, false);
    f.last = true;
    result.frames.push_back(std::move(f));
  }
  result.total_cycles = result.header_emit_cycles + payload_only + design.pipeline_depth;
  return result;
}

inline SimResult simulate(const rtl::StructuralDesign& design, const Stimulus& stim) {
  return simulate(design, design.payload_memory, design.lane_plans, stim);
}

}  // namespace dpgen::sim
