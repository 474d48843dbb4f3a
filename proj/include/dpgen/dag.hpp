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
#include <cstdint>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dpgen/error.hpp"
#include "dpgen/source.hpp"
#include "dpgen/valid_bits.hpp"
#include "json.hpp"

namespace dpgen {

enum class DagMode { kNaive, kParserDerived };

inline const char* to_string(DagMode m) {
  return m == DagMode::kNaive ? "naive" : "parser_derived";
}

inline constexpr std::size_t kDefaultMaxPaths = std::size_t{1} << 20;

// Graph of possible header emissions. Node 0 is start, node i + 1 is the
// i-th header in emit order, node headers.size() + 1 is end. Edges always
// point forward in that numbering, which makes the node order topological.
struct DeparserDag {
  DagMode mode = DagMode::kNaive;
  std::vector<std::string> headers;
  std::vector<std::size_t> header_bytes;
  std::set<std::pair<std::size_t, std::size_t>> edges;

  std::size_t size() const { return headers.size(); }
  std::size_t start() const { return 0; }
  std::size_t end() const { return headers.size() + 1; }
  static std::size_t node_of(std::size_t header) { return header + 1; }
  static std::size_t header_of(std::size_t node) { return node - 1; }
  bool is_header(std::size_t node) const { return node != start() && node != end(); }

  std::vector<std::size_t> successors(std::size_t node) const {
    std::vector<std::size_t> out;
    for (auto it = edges.lower_bound({node, 0}); it != edges.end() && it->first == node; ++it) {
      out.push_back(it->second);
    }
    return out;
  }

  std::string node_name(std::size_t node) const {
    if (node == start()) return kStartNode;
    if (node == end()) return kEndNode;
    return headers[header_of(node)];
  }

  friend bool operator==(const DeparserDag&, const DeparserDag&) = default;
};

struct EmissionPath {
  std::vector<std::size_t> headers;  // emit-order indices
  std::size_t total_bytes = 0;
  ValidBits valid_bitmap;

  friend bool operator==(const EmissionPath&, const EmissionPath&) = default;
};

namespace detail {

inline DeparserDag dag_skeleton(const DeparserSource& src, DagMode mode) {
  DeparserDag dag;
  dag.mode = mode;
  for (const auto& h : src.layout.instances) {
    dag.headers.push_back(h.name);
    dag.header_bytes.push_back(h.bytes());
  }
  return dag;
}

}  // namespace detail

// Every header may be skipped at runtime, so every emit-order subsequence is a
// path: 2^n paths for n headers, including the empty one.
inline DeparserDag build_naive_dag(const DeparserSource& src) {
  DeparserDag dag = detail::dag_skeleton(src, DagMode::kNaive);
  const std::size_t end = dag.end();
  for (std::size_t a = 0; a < end; ++a) {
    for (std::size_t b = a + 1; b <= end; ++b) dag.edges.emplace(a, b);
  }
  return dag;
}

inline DeparserDag build_parser_derived_dag(const DeparserSource& src) {
  static const std::string kModule = "dag";
  if (!src.parser_graph) throw Error(kModule, "program has no parser graph");
  DeparserDag dag = detail::dag_skeleton(src, DagMode::kParserDerived);

  auto node = [&](const std::string& name) -> std::size_t {
    if (name == kStartNode) return dag.start();
    if (name == kEndNode) return dag.end();
    auto idx = src.layout.index_of(name);
    if (!idx) throw Error(kModule, "parser graph mentions '" + name + "', which is never emitted");
    return DeparserDag::node_of(*idx);
  };

  std::set<std::pair<std::size_t, std::size_t>> raw;
  for (const auto& [from, to] : src.parser_graph->edges) {
    const std::size_t a = node(from);
    const std::size_t b = node(to);
    if (b <= a) {
      throw Error(kModule, "parser graph edge " + from + " -> " + to +
                               " contradicts the deparser emit order");
    }
    raw.emplace(a, b);
  }

  // Keep only nodes lying on some start -> end path.
  const std::size_t n = dag.end() + 1;
  std::vector<bool> fwd(n, false), bwd(n, false);
  fwd[dag.start()] = true;
  for (std::size_t v = 0; v < n; ++v) {
    if (!fwd[v]) continue;
    for (auto it = raw.lower_bound({v, 0}); it != raw.end() && it->first == v; ++it) {
      fwd[it->second] = true;
    }
  }
  bwd[dag.end()] = true;
  for (std::size_t v = n; v-- > 0;) {
    for (auto it = raw.lower_bound({v, 0}); it != raw.end() && it->first == v; ++it) {
      if (bwd[it->second]) bwd[v] = true;
    }
  }
  if (!fwd[dag.end()]) throw Error(kModule, "parser graph has no start -> end path");
  for (const auto& [a, b] : raw) {
    if (fwd[a] && bwd[a] && fwd[b] && bwd[b]) dag.edges.emplace(a, b);
  }
  return dag;
}

// Number of start -> end paths, saturating at `cap` + 1.
inline std::size_t count_paths(const DeparserDag& dag, std::size_t cap) {
  std::vector<std::size_t> count(dag.end() + 1, 0);
  count[dag.end()] = 1;
  for (std::size_t v = dag.end(); v-- > 0;) {
    std::size_t c = 0;
    for (auto s : dag.successors(v)) c = std::min(c + count[s], cap + 1);
    count[v] = c;
  }
  return count[dag.start()];
}

// All start -> end paths, ordered lexicographically by emit-order index with
// a path sorting before its own extensions.
inline std::vector<EmissionPath> enumerate_paths(const DeparserDag& dag,
                                                 std::size_t max_paths = kDefaultMaxPaths) {
  if (const auto n = count_paths(dag, max_paths); n > max_paths) {
    throw Error("dag", "more than " + std::to_string(max_paths) + " emission paths");
  }
  std::vector<EmissionPath> out;
  std::vector<std::size_t> prefix;

  // Successors visited with end first so a path precedes its extensions.
  auto ordered = [&](std::size_t v) {
    auto s = dag.successors(v);
    std::stable_partition(s.begin(), s.end(), [&](std::size_t x) { return x == dag.end(); });
    return s;
  };
  auto emit = [&] {
    EmissionPath p;
    p.valid_bitmap = ValidBits(dag.size());
    for (auto node : prefix) {
      const auto h = DeparserDag::header_of(node);
      p.headers.push_back(h);
      p.total_bytes += dag.header_bytes[h];
      p.valid_bitmap.set(h);
    }
    out.push_back(std::move(p));
  };

  struct Frame {
    std::vector<std::size_t> succ;
    std::size_t next = 0;
  };
  std::vector<Frame> stack;
  stack.push_back({ordered(dag.start()), 0});
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next == f.succ.size()) {
      stack.pop_back();
      if (!prefix.empty()) prefix.pop_back();
      continue;
    }
    const std::size_t v = f.succ[f.next++];
    if (v == dag.end()) {
      emit();
      continue;
    }
    prefix.push_back(v);
    stack.push_back({ordered(v), 0});
  }
  return out;
}

// Longest start -> end path by byte count, computed directly on the graph.
inline std::size_t worst_case_header_bytes(const DeparserDag& dag) {
  constexpr std::int64_t kUnreachable = -1;
  std::vector<std::int64_t> best(dag.end() + 1, kUnreachable);
  best[dag.end()] = 0;
  for (std::size_t v = dag.end(); v-- > 0;) {
    const std::int64_t own =
        dag.is_header(v) ? static_cast<std::int64_t>(dag.header_bytes[DeparserDag::header_of(v)]) : 0;
    for (auto s : dag.successors(v)) {
      if (best[s] != kUnreachable) best[v] = std::max(best[v], best[s] + own);
    }
  }
  return best[dag.start()] == kUnreachable ? 0 : static_cast<std::size_t>(best[dag.start()]);
}

// Whether `bitmap` selects exactly the headers of one start -> end path.
inline bool is_dag_path(const DeparserDag& dag, const ValidBits& bitmap) {
  if (bitmap.width() != dag.size()) return false;
  std::size_t at = dag.start();
  for (std::size_t h = 0; h < dag.size(); ++h) {
    if (!bitmap.test(h)) continue;
    if (!dag.edges.count({at, DeparserDag::node_of(h)})) return false;
    at = DeparserDag::node_of(h);
  }
  return dag.edges.count({at, dag.end()}) > 0;
}

inline std::string path_label(const DeparserDag& dag, const EmissionPath& p) {
  if (p.headers.empty()) return "(empty)";
  std::string s;
  for (std::size_t i = 0; i < p.headers.size(); ++i) {
    if (i) s += "->";
    s += dag.headers[p.headers[i]];
  }
  return s;
}

inline nlohmann::json paths_to_json(const DeparserDag& dag, const std::vector<EmissionPath>& paths) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : paths) {
    std::vector<std::string> seq;
    for (auto h : p.headers) seq.push_back(dag.headers[h]);
    arr.push_back({{"sequence", seq}, {"size_bytes", p.total_bytes},
                   {"valid", p.valid_bitmap.to_string()}});
  }
  return arr;
}

// Path listing: one row per path with its size in bytes.
inline std::string paths_table(const DeparserDag& dag, const std::vector<EmissionPath>& paths) {
  std::size_t width = 4;
  for (const auto& p : paths) width = std::max(width, path_label(dag, p).size());
  std::ostringstream os;
  auto row = [&](const std::string& a, const std::string& b) {
    os << a << std::string(width - a.size() + 2, ' ') << b << "\n";
  };
  row("Path", "Size (Bytes)");
  for (const auto& p : paths) row(path_label(dag, p), std::to_string(p.total_bytes));
  return os.str();
}

inline std::string dag_to_dot(const DeparserDag& dag) {
  std::ostringstream os;
  os << "digraph deparser {\n  rankdir=LR;\n";
  for (std::size_t v = 0; v <= dag.end(); ++v) {
    bool used = !dag.is_header(v);
    for (const auto& [a, b] : dag.edges) used = used || a == v || b == v;
    if (!used) continue;
    os << "  n" << v << " [label=\"" << dag.node_name(v);
    if (dag.is_header(v)) os << "\\n" << dag.header_bytes[DeparserDag::header_of(v)] << " B";
    os << "\"];\n";
  }
  for (const auto& [a, b] : dag.edges) os << "  n" << a << " -> n" << b << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace dpgen
