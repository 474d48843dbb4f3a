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

// Native deparser description:
//
//   { "headers":      [{"name": "ethernet", "bytes": 14}, ...],
//     "emit_order":   ["ethernet", ...],
//     "parser_graph": {"edges": [["start", "ethernet"], ["ethernet", "end"]]} }
//
// "parser_graph" is optional.

#pragma once

#include <string>
#include <vector>

#include "dpgen/error.hpp"
#include "dpgen/source.hpp"
#include "json.hpp"

namespace dpgen {

inline DeparserSource load_native(const std::string& text) {
  static const std::string kModule = "native_ingest";
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(kModule, std::string("malformed JSON: ") + e.what());
  }
  auto schema = [](const std::string& what) { return Error(kModule, "schema violation: " + what); };
  if (!doc.is_object()) throw schema("document is not an object");
  if (!doc.contains("headers") || !doc["headers"].is_array()) throw schema("'headers' array missing");
  if (!doc.contains("emit_order") || !doc["emit_order"].is_array()) {
    throw schema("'emit_order' array missing");
  }

  std::vector<HeaderDecl> declared;
  for (const auto& h : doc["headers"]) {
    if (!h.is_object() || !h.contains("name") || !h["name"].is_string() || !h.contains("bytes") ||
        !h["bytes"].is_number_integer()) {
      throw schema("header entries need string 'name' and integer 'bytes'");
    }
    const auto bytes = h["bytes"].get<long long>();
    if (bytes <= 0) throw schema("header '" + h["name"].get<std::string>() + "' has no bytes");
    declared.push_back({h["name"].get<std::string>(), static_cast<std::size_t>(bytes) * 8});
  }

  std::vector<std::string> order;
  for (const auto& e : doc["emit_order"]) {
    if (!e.is_string()) throw schema("'emit_order' entries must be strings");
    order.push_back(e.get<std::string>());
  }

  std::optional<ParserGraph> graph;
  if (doc.contains("parser_graph") && !doc["parser_graph"].is_null()) {
    const auto& pg = doc["parser_graph"];
    if (!pg.is_object() || !pg.contains("edges") || !pg["edges"].is_array()) {
      throw schema("'parser_graph' needs an 'edges' array");
    }
    graph.emplace();
    for (const auto& e : pg["edges"]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
        throw schema("parser graph edges are [from, to] string pairs");
      }
      graph->edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
  }

  // The referenced-header check in make_source reports dangling edges.
  return make_source(declared, order, std::move(graph), kModule);
}

inline nlohmann::json to_native_json(const DeparserSource& src) {
  nlohmann::json doc;
  doc["headers"] = nlohmann::json::array();
  for (const auto& h : src.layout.instances) {
    doc["headers"].push_back({{"name", h.name}, {"bytes", h.bytes()}});
  }
  for (const auto& h : src.unemitted) {
    doc["headers"].push_back({{"name", h.name}, {"bytes", h.width_bits / 8}});
  }
  doc["emit_order"] = src.emit_order;
  if (src.parser_graph) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [from, to] : src.parser_graph->edges) edges.push_back({from, to});
    doc["parser_graph"] = {{"edges", edges}};
  }
  return doc;
}

inline std::string to_native(const DeparserSource& src) { return to_native_json(src).dump(2) + "\n"; }

}  // namespace dpgen
