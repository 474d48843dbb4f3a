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

// Reader for the subset of the p4c-bm2-ss JSON output the deparser needs:
// header_types, headers, deparsers[0].order and parsers[0].parse_states.
// Everything else in the document is ignored.

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dpgen/error.hpp"
#include "dpgen/source.hpp"
#include "json.hpp"

namespace dpgen {

struct HeaderField {
  std::string name;
  std::optional<std::size_t> width_bits;  // nullopt for varbit
};

struct HeaderType {
  std::string name;
  std::vector<HeaderField> fields;

  bool is_varbit() const {
    for (const auto& f : fields) {
      if (!f.width_bits) return true;
    }
    return false;
  }
  std::size_t total_width_bits() const {
    std::size_t w = 0;
    for (const auto& f : fields) w += f.width_bits.value_or(0);
    return w;
  }
};

namespace detail {

inline const char* kBmv2Module = "bmv2_ingest";

inline Error bmv2_error(const std::string& msg) { return Error(kBmv2Module, msg); }

inline std::map<std::string, HeaderType> read_header_types(const nlohmann::json& doc) {
  std::map<std::string, HeaderType> types;
  for (const auto& t : doc.at("header_types")) {
    HeaderType ht;
    ht.name = t.at("name").get<std::string>();
    std::set<std::string> names;
    for (const auto& f : t.at("fields")) {
      if (!f.is_array() || f.size() < 2 || !f[0].is_string()) {
        throw bmv2_error("header type '" + ht.name + "' has a malformed field");
      }
      HeaderField field{f[0].get<std::string>(), std::nullopt};
      if (f[1].is_number_integer()) field.width_bits = f[1].get<std::size_t>();
      if (!names.insert(field.name).second) {
        throw bmv2_error("duplicate field '" + field.name + "' in header type '" + ht.name + "'");
      }
      ht.fields.push_back(std::move(field));
    }
    types[ht.name] = std::move(ht);
  }
  return types;
}

// Collapses the parse-state machine to a header-level graph: each extracted
// header becomes a node and each transition links the last header extracted
// in a state to the first header extracted downstream.
inline ParserGraph read_parser_graph(const nlohmann::json& parser) {
  struct State {
    std::vector<std::string> extracts;
    std::vector<std::optional<std::string>> next;  // nullopt = accept
  };
  std::map<std::string, State> states;
  for (const auto& s : parser.at("parse_states")) {
    State st;
    if (s.contains("parser_ops")) {
      for (const auto& op : s["parser_ops"]) {
        const auto kind = op.value("op", std::string{});
        if (kind == "extract_VL") {
          throw bmv2_error("variable-length extract is not supported");
        }
        if (kind != "extract") continue;
        const auto& p = op.at("parameters").at(0);
        if (p.value("type", std::string{}) != "regular") {
          throw bmv2_error("only regular header extracts are supported; unroll header stacks");
        }
        st.extracts.push_back(p.at("value").get<std::string>());
      }
    }
    if (s.contains("transitions")) {
      for (const auto& t : s["transitions"]) {
        if (t.contains("next_state") && t["next_state"].is_string()) {
          st.next.emplace_back(t["next_state"].get<std::string>());
        } else {
          st.next.emplace_back(std::nullopt);
        }
      }
    }
    if (st.next.empty()) st.next.emplace_back(std::nullopt);
    states[s.at("name").get<std::string>()] = std::move(st);
  }

  auto state_of = [&](const std::string& name) -> const State& {
    auto it = states.find(name);
    if (it == states.end()) throw bmv2_error("transition to unknown parse state '" + name + "'");
    return it->second;
  };

  // First header node reached when entering a state, looking through states
  // that extract nothing.
  std::map<std::string, std::set<std::string>> first_memo;
  std::set<std::string> visiting;
  auto first = [&](auto&& self, const std::optional<std::string>& state) -> std::set<std::string> {
    if (!state) return {kEndNode};
    if (auto it = first_memo.find(*state); it != first_memo.end()) return it->second;
    const State& st = state_of(*state);
    if (!st.extracts.empty()) return first_memo[*state] = {st.extracts.front()};
    if (!visiting.insert(*state).second) {
      throw bmv2_error("cycle in parse states through '" + *state + "'");
    }
    std::set<std::string> out;
    for (const auto& n : st.next) {
      auto sub = self(self, n);
      out.insert(sub.begin(), sub.end());
    }
    visiting.erase(*state);
    return first_memo[*state] = out;
  };

  ParserGraph g;
  const auto init = parser.at("init_state").get<std::string>();
  for (const auto& h : first(first, init)) g.edges.emplace_back(kStartNode, h);

  std::set<std::string> done;
  std::vector<std::string> work{init};
  while (!work.empty()) {
    const std::string name = work.back();
    work.pop_back();
    if (!done.insert(name).second) continue;
    const State& st = state_of(name);
    for (std::size_t i = 0; i + 1 < st.extracts.size(); ++i) {
      g.edges.emplace_back(st.extracts[i], st.extracts[i + 1]);
    }
    for (const auto& n : st.next) {
      if (n) work.push_back(*n);
      if (st.extracts.empty()) continue;
      for (const auto& h : first(first, n)) g.edges.emplace_back(st.extracts.back(), h);
    }
  }
  return g;
}

}  // namespace detail

// Loads a p4c-bm2-ss JSON program. The PHV layout covers emitted headers only,
// concatenated in emit order; metadata that is never emitted is left out.
inline DeparserSource load_bmv2(const std::string& json_text) {
  using detail::bmv2_error;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw bmv2_error(std::string("malformed JSON: ") + e.what());
  }
  try {
    if (!doc.is_object()) throw bmv2_error("document is not an object");
    if (!doc.contains("header_types")) throw bmv2_error("missing 'header_types'");
    if (!doc.contains("headers")) throw bmv2_error("missing 'headers'");
    if (!doc.contains("deparsers") || !doc["deparsers"].is_array() || doc["deparsers"].empty()) {
      throw bmv2_error("missing deparser section");
    }
    const auto& deparser = doc["deparsers"][0];
    if (!deparser.contains("order") || !deparser["order"].is_array()) {
      throw bmv2_error("deparser has no 'order' list");
    }
    std::vector<std::string> order = deparser["order"].get<std::vector<std::string>>();

    const auto types = detail::read_header_types(doc);

    std::optional<ParserGraph> graph;
    if (doc.contains("parsers") && doc["parsers"].is_array() && !doc["parsers"].empty()) {
      graph = detail::read_parser_graph(doc["parsers"][0]);
    }

    std::set<std::string> used(order.begin(), order.end());
    if (graph) {
      for (const auto& [a, b] : graph->edges) {
        used.insert(a);
        used.insert(b);
      }
    }

    std::vector<HeaderDecl> declared;
    for (const auto& h : doc["headers"]) {
      const auto name = h.at("name").get<std::string>();
      const auto type_name = h.at("header_type").get<std::string>();
      const bool metadata = h.value("metadata", false);
      auto it = types.find(type_name);
      if (it == types.end()) {
        throw bmv2_error("header '" + name + "' has unknown type '" + type_name + "'");
      }
      // Metadata that is neither emitted nor parsed never reaches the deparser.
      if (metadata && !used.count(name)) continue;
      if (used.count(name) && it->second.is_varbit()) {
        throw bmv2_error("header '" + name + "' has a variable-length field");
      }
      declared.push_back({name, it->second.total_width_bits()});
    }

    DeparserSource src = make_source(declared, order, std::move(graph), detail::kBmv2Module);
    if (doc["deparsers"].size() > 1) {
      src.warnings.push_back("program declares " + std::to_string(doc["deparsers"].size()) +
                             " deparsers; only '" + deparser.value("name", std::string{"#0"}) +
                             "' is compiled");
    }
    return src;
  } catch (const nlohmann::json::exception& e) {
    throw bmv2_error(std::string("unexpected document shape: ") + e.what());
  }
}

}  // namespace dpgen
