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

// Per-byte-lane decomposition of the deparser DAG.
//
// Output byte p of a packet (headers only) is carried by lane p mod W, where
// W is the bus width in bytes. Walking every emission path and assigning its
// bytes round-robin yields one sub-DAG per lane whose nodes are the
// (header, byte) pairs that can ever land in that lane. Each sub-DAG becomes a
// multiplexer over those PHV bytes plus a state machine that steps through
// them, one node per bus beat.

#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dpgen/dag.hpp"
#include "dpgen/error.hpp"
#include "dpgen/source.hpp"
#include "dpgen/valid_bits.hpp"
#include "json.hpp"

namespace dpgen {

struct LaneNode {
  std::size_t header = 0;  // emit-order index
  std::size_t byte = 0;    // within the header

  friend bool operator==(const LaneNode&, const LaneNode&) = default;
  friend auto operator<=>(const LaneNode&, const LaneNode&) = default;
};

// Vertex ids inside a lane graph: 0 is start, k is nodes[k - 1].
inline constexpr std::size_t kLaneStart = 0;
inline constexpr std::size_t kLaneEnd = std::numeric_limits<std::size_t>::max();

struct LaneEdge {
  std::size_t from = kLaneStart;
  std::size_t to = kLaneEnd;
  // Set when the destination is the first byte of its header this lane sees
  // on the path; the edge then depends on that header's validity bit.
  std::optional<std::size_t> condition;
  // Exact enabling condition as an OR of cubes over PHV_valid. Empty means
  // "derive from `condition`" (hand-built graphs).
  std::vector<Cube> guard;

  friend bool operator==(const LaneEdge&, const LaneEdge&) = default;
};

struct LaneGraph {
  std::size_t lane = 0;
  std::size_t valid_width = 0;
  std::vector<LaneNode> nodes;  // sorted, unique
  std::vector<LaneEdge> edges;  // sorted by (from, to)
  // Bitmaps of the emission paths the graph was generated from. When
  // non-empty, determinism is checked only over these.
  std::vector<ValidBits> domain;

  std::optional<std::size_t> vertex_of(const LaneNode& n) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), n);
    if (it == nodes.end() || *it != n) return std::nullopt;
    return static_cast<std::size_t>(it - nodes.begin()) + 1;
  }

  friend bool operator==(const LaneGraph&, const LaneGraph&) = default;
};

namespace detail {

inline std::size_t lane_count(std::size_t bus_width_bits) {
  if (bus_width_bits == 0) throw Error("lanes", "bus width must be positive");
  if (bus_width_bits % 8 != 0) {
    throw Error("lanes", "bus width " + std::to_string(bus_width_bits) +
                             " is not a multiple of 8");
  }
  return bus_width_bits / 8;
}

// Cube over the validity bits with index in [lo, hi), fixed to `bitmap`.
inline Cube bit_range_cube(const ValidBits& bitmap, std::size_t lo, std::size_t hi) {
  Cube c{ValidBits(bitmap.width()), ValidBits(bitmap.width())};
  for (std::size_t i = lo; i < hi && i < bitmap.width(); ++i) {
    c.mask.set(i);
    c.value.set(i, bitmap.test(i));
  }
  return c;
}

// Vertex key before node numbering: start, a node, or end.
struct LaneKey {
  int kind = 0;  // 0 start, 1 node, 2 end
  LaneNode node;
  friend auto operator<=>(const LaneKey&, const LaneKey&) = default;
};

}  // namespace detail

// Splits the DAG into one sub-DAG per output byte lane.
//
// The guard attached to an edge u -> v from a path only fixes the validity
// bits that decide where that lane goes next: the headers strictly after u's
// header up to and including v's header (all remaining headers when v is end,
// and everything from header 0 when u is start).
inline std::vector<LaneGraph> generate_lane_graphs(const DeparserDag& dag, const PhvLayout& layout,
                                                   std::size_t bus_width_bits,
                                                   std::size_t max_paths = kDefaultMaxPaths) {
  const std::size_t w = detail::lane_count(bus_width_bits);
  if (layout.instances.size() != dag.size()) {
    throw Error("lanes", "DAG and PHV layout disagree on the header count");
  }
  for (std::size_t i = 0; i < dag.size(); ++i) {
    if (layout.instances[i].name != dag.headers[i] ||
        layout.instances[i].bytes() != dag.header_bytes[i]) {
      throw Error("lanes", "DAG and PHV layout disagree on header '" + dag.headers[i] + "'");
    }
  }
  const std::size_t nv = dag.size();

  using Key = detail::LaneKey;
  struct Acc {
    std::optional<std::size_t> condition;
    std::set<Cube> guard;
  };
  struct Partial {
    std::set<LaneNode> nodes;
    std::map<std::pair<Key, Key>, Acc> edges;
    std::set<ValidBits> domain;
  };
  std::vector<Partial> parts(w);

  const auto paths = enumerate_paths(dag, max_paths);
  std::vector<Key> prev(w);
  for (const auto& path : paths) {
    std::fill(prev.begin(), prev.end(), Key{});
    std::size_t pos = 0;
    auto add_edge = [&](std::size_t lane, const Key& to, std::optional<std::size_t> cond) {
      const Key& from = prev[lane];
      const std::size_t lo = from.kind == 0 ? 0 : from.node.header + 1;
      const std::size_t hi = to.kind == 2 ? nv : to.node.header + 1;
      Acc& acc = parts[lane].edges[{from, to}];
      if (!acc.guard.empty() && acc.condition != cond) {
        throw Error("lanes", "inconsistent edge condition in lane " + std::to_string(lane));
      }
      acc.condition = cond;
      acc.guard.insert(detail::bit_range_cube(path.valid_bitmap, lo, hi));
    };
    for (auto h : path.headers) {
      for (std::size_t b = 0; b < dag.header_bytes[h]; ++b, ++pos) {
        const std::size_t lane = pos % w;
        const Key to{1, {h, b}};
        const bool first_of_header = prev[lane].kind == 0 || prev[lane].node.header != h;
        parts[lane].nodes.insert(to.node);
        add_edge(lane, to, first_of_header ? std::optional<std::size_t>(h) : std::nullopt);
        prev[lane] = to;
      }
    }
    for (std::size_t lane = 0; lane < w; ++lane) {
      add_edge(lane, Key{2, {}}, std::nullopt);
      parts[lane].domain.insert(path.valid_bitmap);
    }
  }

  std::vector<LaneGraph> out(w);
  for (std::size_t lane = 0; lane < w; ++lane) {
    LaneGraph& g = out[lane];
    g.lane = lane;
    g.valid_width = nv;
    g.nodes.assign(parts[lane].nodes.begin(), parts[lane].nodes.end());
    g.domain.assign(parts[lane].domain.begin(), parts[lane].domain.end());
    auto vid = [&](const Key& k) {
      if (k.kind == 0) return kLaneStart;
      if (k.kind == 2) return kLaneEnd;
      return *g.vertex_of(k.node);
    };
    for (const auto& [key, acc] : parts[lane].edges) {
      g.edges.push_back({vid(key.first), vid(key.second), acc.condition,
                         std::vector<Cube>(acc.guard.begin(), acc.guard.end())});
    }
    std::sort(g.edges.begin(), g.edges.end(), [](const LaneEdge& a, const LaneEdge& b) {
      return std::pair(a.from, a.to) < std::pair(b.from, b.to);
    });
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lane plan: multiplexer inputs and the state machine driving its select.

struct MuxInput {
  LaneNode node;
  std::size_t phv_bit_offset = 0;  // byte occupies [offset, offset + 8)

  friend bool operator==(const MuxInput&, const MuxInput&) = default;
};

struct FsmTransition {
  std::size_t from = 0;  // state id
  std::size_t to = 0;    // state id; 0 is idle
  std::vector<Cube> guard;

  bool enabled(const ValidBits& valid) const {
    return std::any_of(guard.begin(), guard.end(), [&](const Cube& c) { return c.matches(valid); });
  }

  friend bool operator==(const FsmTransition&, const FsmTransition&) = default;
};

// State 0 is idle; state k (k >= 1) drives mux input k - 1 onto the lane.
struct LanePlan {
  std::size_t lane = 0;
  std::size_t valid_width = 0;
  std::vector<MuxInput> mux_inputs;
  std::vector<FsmTransition> transitions;  // sorted by from
  std::vector<std::size_t> state_begin;    // transitions of s: [state_begin[s], state_begin[s+1])

  std::size_t state_count() const { return mux_inputs.size() + 1; }

  std::size_t state_bits() const {
    std::size_t bits = 1;
    while ((std::size_t{1} << bits) < state_count()) ++bits;
    return bits;
  }

  static bool header_valid(std::size_t state) { return state != 0; }
  static std::size_t mux_select(std::size_t state) { return state - 1; }

  // Successor of `state` under `valid`; nullopt when no transition is enabled.
  std::optional<std::size_t> next(std::size_t state, const ValidBits& valid) const {
    std::optional<std::size_t> found;
    for (std::size_t i = state_begin.at(state); i < state_begin.at(state + 1); ++i) {
      if (!transitions[i].enabled(valid)) continue;
      if (found && *found != transitions[i].to) {
        throw Error("lanes", "lane " + std::to_string(lane) + ": state " + std::to_string(state) +
                                 " has more than one enabled transition under valid bitmap " +
                                 valid.to_string());
      }
      found = transitions[i].to;
    }
    return found;
  }

  // Asserted in a header state whose only way forward is back to idle.
  bool header_last(std::size_t state, const ValidBits& valid) const {
    if (!header_valid(state)) return false;
    auto n = next(state, valid);
    return !n || *n == 0;
  }
};

namespace detail {

inline std::string lane_state_name(const LaneGraph& g, const PhvLayout& layout, std::size_t v) {
  if (v == kLaneStart) return "idle";
  const LaneNode& n = g.nodes.at(v - 1);
  return layout.instances.at(n.header).name + "[" + std::to_string(n.byte) + "]";
}

}  // namespace detail

inline LanePlan translate_lane(const LaneGraph& graph, const PhvLayout& layout) {
  LanePlan plan;
  plan.lane = graph.lane;
  plan.valid_width = graph.valid_width;
  for (const auto& n : graph.nodes) {
    if (n.header >= layout.instances.size()) {
      throw Error("lanes", "lane node refers to unknown header index " + std::to_string(n.header));
    }
    const auto& inst = layout.instances[n.header];
    if (n.byte >= inst.bytes()) {
      throw Error("lanes", "byte " + std::to_string(n.byte) + " is outside header '" + inst.name + "'");
    }
    plan.mux_inputs.push_back({n, inst.phv_data_offset_bits + 8 * n.byte});
  }

  for (const auto& e : graph.edges) {
    FsmTransition t;
    t.from = e.from;
    t.to = e.to == kLaneEnd ? 0 : e.to;
    if (!e.guard.empty()) {
      t.guard = e.guard;
    } else {
      // Conditioned edge: its header's bit set. Unconditioned edge: every
      // condition on a sibling edge clear.
      Cube c{ValidBits(graph.valid_width), ValidBits(graph.valid_width)};
      if (e.condition) {
        c.mask.set(*e.condition);
        c.value.set(*e.condition);
      } else {
        for (const auto& o : graph.edges) {
          if (o.from == e.from && o.condition) c.mask.set(*o.condition);
        }
      }
      t.guard.push_back(std::move(c));
    }
    plan.transitions.push_back(std::move(t));
  }
  std::stable_sort(plan.transitions.begin(), plan.transitions.end(),
                   [](const FsmTransition& a, const FsmTransition& b) { return a.from < b.from; });
  plan.state_begin.assign(plan.state_count() + 1, 0);
  for (const auto& t : plan.transitions) {
    if (t.from >= plan.state_count() || t.to >= plan.state_count()) {
      throw Error("lanes", "lane " + std::to_string(graph.lane) + ": edge to unknown vertex");
    }
    ++plan.state_begin[t.from + 1];
  }
  for (std::size_t s = 0; s < plan.state_count(); ++s) plan.state_begin[s + 1] += plan.state_begin[s];

  auto ambiguous = [&](std::size_t state, const ValidBits& valid) {
    return Error("lanes", "lane " + std::to_string(graph.lane) + ": state " +
                              detail::lane_state_name(graph, layout, state) +
                              " has two enabled transitions under valid bitmap " + valid.to_string());
  };

  if (!graph.domain.empty()) {
    // Walk each recorded bitmap through the machine.
    for (const auto& valid : graph.domain) {
      std::size_t s = 0;
      for (std::size_t step = 0; step <= plan.state_count(); ++step) {
        std::optional<std::size_t> nxt;
        for (std::size_t i = plan.state_begin[s]; i < plan.state_begin[s + 1]; ++i) {
          if (!plan.transitions[i].enabled(valid)) continue;
          if (nxt && *nxt != plan.transitions[i].to) throw ambiguous(s, valid);
          nxt = plan.transitions[i].to;
        }
        if (!nxt || *nxt == 0) break;
        s = *nxt;
      }
    }
  } else {
    // No recorded bitmaps: guards leaving a state must be pairwise disjoint.
    for (std::size_t s = 0; s < plan.state_count(); ++s) {
      for (std::size_t i = plan.state_begin[s]; i < plan.state_begin[s + 1]; ++i) {
        for (std::size_t j = i + 1; j < plan.state_begin[s + 1]; ++j) {
          if (plan.transitions[i].to == plan.transitions[j].to) continue;
          for (const auto& a : plan.transitions[i].guard) {
            for (const auto& b : plan.transitions[j].guard) {
              if (a.intersects(b)) throw ambiguous(s, a.witness(b));
            }
          }
        }
      }
    }
  }
  return plan;
}

inline std::vector<LanePlan> translate_lanes(const std::vector<LaneGraph>& graphs,
                                             const PhvLayout& layout) {
  std::vector<LanePlan> plans;
  plans.reserve(graphs.size());
  for (const auto& g : graphs) plans.push_back(translate_lane(g, layout));
  return plans;
}

// ---------------------------------------------------------------------------
// Exports.

inline nlohmann::json cube_to_json(const Cube& c) {
  return {{"mask", c.mask.to_string()}, {"value", c.value.to_string()}};
}

inline nlohmann::json lane_plan_to_json(const LanePlan& plan, const PhvLayout& layout) {
  nlohmann::json j;
  j["lane"] = plan.lane;
  j["fsm_states"] = plan.state_count();
  nlohmann::json mux = nlohmann::json::array();
  for (const auto& m : plan.mux_inputs) {
    mux.push_back({{"header", layout.instances[m.node.header].name},
                   {"byte", m.node.byte},
                   {"phv_bits", {m.phv_bit_offset, m.phv_bit_offset + 8}}});
  }
  j["mux_inputs"] = mux;
  nlohmann::json trans = nlohmann::json::array();
  for (const auto& t : plan.transitions) {
    nlohmann::json guard = nlohmann::json::array();
    for (const auto& c : t.guard) guard.push_back(cube_to_json(c));
    trans.push_back({{"from", t.from}, {"to", t.to}, {"guard", guard}});
  }
  j["transitions"] = trans;
  return j;
}

inline std::string lane_graph_to_dot(const LaneGraph& g, const PhvLayout& layout) {
  std::ostringstream os;
  os << "digraph lane_" << g.lane << " {\n  rankdir=LR;\n";
  os << "  start [shape=point];\n  end [shape=doublecircle,label=\"\"];\n";
  auto name = [](std::size_t v) {
    if (v == kLaneStart) return std::string("start");
    if (v == kLaneEnd) return std::string("end");
    return "v" + std::to_string(v);
  };
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    os << "  v" << i + 1 << " [label=\"" << layout.instances[g.nodes[i].header].name << "\\nbyte "
       << g.nodes[i].byte << "\"];\n";
  }
  for (const auto& e : g.edges) {
    os << "  " << name(e.from) << " -> " << name(e.to);
    if (e.condition) os << " [label=\"" << layout.instances[*e.condition].name << "\"]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace dpgen
