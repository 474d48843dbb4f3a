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

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dpgen/error.hpp"

namespace dpgen {

inline constexpr const char* kStartNode = "start";
inline constexpr const char* kEndNode = "end";

// A header as placed in the PHV. Offsets are in bits from PHV_data bit 0;
// header byte i occupies bits [offset + 8i, offset + 8i + 8).
struct HeaderInstance {
  std::string name;
  std::size_t width_bits = 0;
  std::size_t phv_data_offset_bits = 0;
  std::size_t valid_bit_index = 0;

  std::size_t bytes() const { return width_bits / 8; }

  friend bool operator==(const HeaderInstance&, const HeaderInstance&) = default;
};

struct PhvLayout {
  std::vector<HeaderInstance> instances;  // emit order
  std::size_t phv_data_width_bits = 0;
  std::size_t phv_valid_width_bits = 0;

  std::optional<std::size_t> index_of(const std::string& name) const {
    for (std::size_t i = 0; i < instances.size(); ++i) {
      if (instances[i].name == name) return i;
    }
    return std::nullopt;
  }

  friend bool operator==(const PhvLayout&, const PhvLayout&) = default;
};

// Header-level parser graph. Node names are header ids plus the reserved
// "start" and "end". Edges are kept sorted and unique so that two loaders
// reading the same program agree on the value.
struct ParserGraph {
  std::vector<std::pair<std::string, std::string>> edges;

  friend bool operator==(const ParserGraph&, const ParserGraph&) = default;
};

// A declared header that is not emitted but is referenced by the parser graph.
struct HeaderDecl {
  std::string name;
  std::size_t width_bits = 0;

  friend bool operator==(const HeaderDecl&, const HeaderDecl&) = default;
};

struct DeparserSource {
  PhvLayout layout;
  std::vector<std::string> emit_order;
  std::optional<ParserGraph> parser_graph;
  std::vector<HeaderDecl> unemitted;  // only those the parser graph mentions
  std::vector<std::string> warnings;  // not part of the value

  friend bool operator==(const DeparserSource& a, const DeparserSource& b) {
    return a.layout == b.layout && a.emit_order == b.emit_order &&
           a.parser_graph == b.parser_graph && a.unemitted == b.unemitted;
  }
};

namespace detail {

inline void check_parser_graph_acyclic(const ParserGraph& g, const std::string& module) {
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& [from, to] : g.edges) adj[from].push_back(to);
  // 0 = unvisited, 1 = on stack, 2 = done
  std::map<std::string, int> mark;
  std::vector<std::pair<std::string, std::size_t>> stack;
  for (const auto& [root, _] : adj) {
    if (mark[root] != 0) continue;
    stack.emplace_back(root, 0);
    mark[root] = 1;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      const auto& succ = adj[node];
      if (next == succ.size()) {
        mark[node] = 2;
        stack.pop_back();
        continue;
      }
      const std::string child = succ[next++];
      if (mark[child] == 1) {
        throw Error(module, "cycle in parser graph through '" + child + "'");
      }
      if (mark[child] == 0) {
        mark[child] = 1;
        stack.emplace_back(child, 0);
      }
    }
  }
}

}  // namespace detail

// Builds a validated DeparserSource from declared headers (declaration order,
// width in bits), the deparser emit order, and an optional header-level parser
// graph. Shared by every front end so that they agree on layout rules.
inline DeparserSource make_source(const std::vector<HeaderDecl>& declared,
                                  const std::vector<std::string>& emit_order,
                                  std::optional<ParserGraph> graph,
                                  const std::string& module) {
  std::map<std::string, std::size_t> widths;
  for (const auto& h : declared) {
    if (h.name == kStartNode || h.name == kEndNode) {
      throw Error(module, "header name '" + h.name + "' is reserved");
    }
    if (!widths.emplace(h.name, h.width_bits).second) {
      throw Error(module, "duplicate header id '" + h.name + "'");
    }
  }

  DeparserSource src;
  src.emit_order = emit_order;
  std::set<std::string> seen;
  std::size_t offset = 0;
  for (const auto& name : emit_order) {
    auto it = widths.find(name);
    if (it == widths.end()) throw Error(module, "emit of undeclared header '" + name + "'");
    if (!seen.insert(name).second) {
      throw Error(module, "header '" + name + "' emitted more than once");
    }
    const std::size_t w = it->second;
    if (w == 0) throw Error(module, "header '" + name + "' has zero width");
    if (w % 8 != 0) {
      throw Error(module, "header '" + name + "' is " + std::to_string(w) +
                              " bits wide, not byte aligned");
    }
    src.layout.instances.push_back(
        HeaderInstance{name, w, offset, src.layout.instances.size()});
    offset += w;
  }
  src.layout.phv_data_width_bits = offset;
  src.layout.phv_valid_width_bits = src.layout.instances.size();

  if (graph) {
    std::set<std::pair<std::string, std::string>> uniq(graph->edges.begin(), graph->edges.end());
    graph->edges.assign(uniq.begin(), uniq.end());
    std::set<std::string> extra;
    for (const auto& [from, to] : graph->edges) {
      if (from == kEndNode) throw Error(module, "parser graph edge leaves 'end'");
      if (to == kStartNode) throw Error(module, "parser graph edge enters 'start'");
      for (const auto* n : {&from, &to}) {
        if (*n == kStartNode || *n == kEndNode) continue;
        if (!widths.count(*n)) {
          throw Error(module, "parser graph references undeclared header '" + *n + "'");
        }
        if (!seen.count(*n)) extra.insert(*n);
      }
    }
    detail::check_parser_graph_acyclic(*graph, module);
    for (const auto& h : declared) {
      if (!extra.count(h.name)) continue;
      if (h.width_bits == 0 || h.width_bits % 8 != 0) {
        throw Error(module, "header '" + h.name + "' is " + std::to_string(h.width_bits) +
                                " bits wide, not byte aligned");
      }
      src.unemitted.push_back(h);
    }
    src.parser_graph = std::move(graph);
  }
  return src;
}

}  // namespace dpgen
