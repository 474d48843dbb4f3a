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

#include <cctype>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dpgen/error.hpp"

namespace dpgen::rtl {

// Words a generated identifier must avoid: VHDL-2008 reserved words,
// SystemVerilog keywords (so the design can be instantiated from a
// mixed-language project), and names the generated package defines itself.
inline const std::set<std::string>& reserved_identifiers() {
  static const std::set<std::string> kWords = {
      // VHDL-2008
      "abs", "access", "after", "alias", "all", "and", "architecture", "array", "assert", "assume",
      "assume_guarantee", "attribute", "begin", "block", "body", "buffer", "bus", "case",
      "component", "configuration", "constant", "context", "cover", "default", "disconnect",
      "downto", "else", "elsif", "end", "entity", "exit", "fairness", "file", "for", "force",
      "function", "generate", "generic", "group", "guarded", "if", "impure", "in", "inertial",
      "inout", "is", "label", "library", "linkage", "literal", "loop", "map", "mod", "nand", "new",
      "next", "nor", "not", "null", "of", "on", "open", "or", "others", "out", "package",
      "parameter", "port", "postponed", "procedure", "process", "property", "protected", "pure",
      "range", "record", "register", "reject", "release", "rem", "report", "restrict",
      "restrict_guarantee", "return", "rol", "ror", "select", "sequence", "severity", "shared",
      "signal", "sla", "sll", "sra", "srl", "strong", "subtype", "then", "to", "transport", "type",
      "unaffected", "units", "until", "use", "variable", "vmode", "vprop", "vunit", "wait", "when",
      "while", "with", "xnor", "xor",
      // SystemVerilog
      "always", "always_comb", "always_ff", "always_latch", "assign", "automatic", "bit", "byte",
      "chandle", "class", "const", "continue", "do", "endcase", "endclass", "endfunction",
      "endgenerate", "endinterface", "endmodule", "endpackage", "endtask", "enum", "event",
      "extends", "extern", "final", "forever", "foreach", "fork", "genvar", "initial", "input",
      "int", "integer", "interface", "join", "local", "localparam", "logic", "longint", "module",
      "negedge", "output", "posedge", "priority", "real", "reg", "repeat", "shortint", "static",
      "string", "struct", "super", "task", "this", "typedef", "union", "unique", "unsigned", "virtual",
      "void", "wire",
      // IEEE libraries and the generated package
      "ieee", "std", "std_logic", "std_logic_vector", "numeric_std", "work", "natural", "boolean",
      "bus_width", "bus_bytes", "phv_data_width", "phv_valid_width", "pipeline_depth", "valid_t",
      "byte_t", "natural_array", "header_info_t", "transition_t", "transition_array",
      "payload_ctrl_t", "payload_ctrl_array", "lane_mux_base", "lane_mux_offsets",
      "lane_trans_base", "lane_transitions", "payload_ctrl_mem", "num_headers"};
  return kWords;
}

// VHDL-safe lowercase identifier for an arbitrary name.
inline std::string sanitize_identifier(std::string_view name) {
  std::string s;
  for (char c : name) {
    const auto u = static_cast<unsigned char>(c);
    const char l = static_cast<char>(std::tolower(u));
    if (std::isalnum(u)) {
      s.push_back(l);
    } else if (!s.empty() && s.back() != '_') {
      s.push_back('_');
    }
  }
  while (!s.empty() && s.back() == '_') s.pop_back();
  if (s.empty()) s = "h";
  if (std::isdigit(static_cast<unsigned char>(s.front()))) s = "h_" + s;
  if (reserved_identifiers().count(s)) s += "_h";
  return s;
}

struct IdentifierMap {
  std::vector<std::string> identifiers;  // parallel to the input names
  std::vector<std::string> notes;        // one per mangled name
};

inline IdentifierMap map_identifiers(const std::vector<std::string>& names) {
  IdentifierMap out;
  std::map<std::string, std::string> owner;
  for (const auto& n : names) {
    const std::string id = sanitize_identifier(n);
    if (auto [it, fresh] = owner.emplace(id, n); !fresh) {
      throw Error("rtl", "headers '" + it->second + "' and '" + n + "' both map to identifier '" +
                             id + "'");
    }
    if (id != n) out.notes.push_back("header '" + n + "' is emitted as identifier '" + id + "'");
    out.identifiers.push_back(id);
  }
  return out;
}

}  // namespace dpgen::rtl
