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


// dpgen: deparser generator command-line tool.
//
//   dpgen compile  --input prog.json --format bmv2 --mode parser --width 512 --out build/hdl
//   dpgen analyze  --input prog.json --format native --mode naive
//   dpgen simulate --input prog.json --width 64 --stimuli stim.json --out results

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dpgen/dpgen.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Options {
  dpgen::CompileConfig config;
  std::string format = "bmv2";
  std::string mode = "parser";
  bool out_given = false;
  std::string stimuli;
  std::uint64_t seed = 1;
  std::size_t count = 1000;
  std::string pcap;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--input", o.config.input_path, "Program file")->required();
  cmd->add_option("--format", o.format, "Input format")
      ->check(CLI::IsMember({"bmv2", "native"}))
      ->capture_default_str();
  cmd->add_option("--mode", o.mode, "DAG mode")
      ->check(CLI::IsMember({"naive", "parser", "parser_derived"}))
      ->capture_default_str();
  cmd->add_option("--width", o.config.bus_width_bits, "Bus width in bits")->capture_default_str();
  cmd->add_option("--out", o.config.out_dir, "Output directory");
  cmd->add_option("--top", o.config.top_name, "Top-level name")->capture_default_str();
  cmd->add_option("--max-paths", o.config.max_paths, "Emission path cap")->capture_default_str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw dpgen::Error("cli", "cannot write '" + path.string() + "'");
  out << text;
}

void write_json(const fs::path& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

fs::path prepare_out(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw dpgen::Error("cli", "cannot create '" + dir + "': " + ec.message());
  return fs::path(dir);
}

void print_diagnostics(const std::vector<std::string>& warnings, const std::vector<std::string>& notes) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& n : notes) std::cerr << "note: " << n << "\n";
}

dpgen::Analysis load_and_analyze(const Options& o) {
  o.config.validate();
  const auto text = dpgen::read_file(o.config.input_path);
  auto src = dpgen::load_source(text, o.config.format);
  return dpgen::analyze(std::move(src), o.config.mode, o.config.max_paths);
}

int cmd_compile(const Options& o) {
  const auto c = dpgen::compile(load_and_analyze(o), o.config.bus_width_bits, o.config.top_name,
                                o.config.max_paths);
  const auto hdl = dpgen::rtl::emit_hdl(c.design);
  auto report = dpgen::make_report(c);
  report.notes = hdl.notes;

  const fs::path out = prepare_out(o.config.out_dir);
  for (const auto& f : hdl.files) write_text(out / f.name, f.text);
  write_json(out / "report.json", report.to_json());
  nlohmann::json lanes = nlohmann::json::array();
  for (const auto& p : c.lane_plans) lanes.push_back(dpgen::lane_plan_to_json(p, c.analysis.source.layout));
  write_json(out / "lanes.json", lanes);
  write_json(out / "payload_memory.json", dpgen::payload_memory_to_json(c.payload_memory));
  write_json(out / "paths.json", dpgen::paths_to_json(c.analysis.dag, c.analysis.paths));
  write_text(out / "dag.dot", dpgen::dag_to_dot(c.analysis.dag));
  const fs::path lane_dir = prepare_out((out / "lanes").string());
  for (const auto& g : c.lane_graphs) {
    write_text(lane_dir / ("lane_" + std::to_string(g.lane) + ".dot"),
               dpgen::lane_graph_to_dot(g, c.analysis.source.layout));
  }

  print_diagnostics(report.warnings, report.notes);
  std::cout << "compiled " << c.analysis.paths.size() << " paths, " << c.lane_plans.size()
            << " lanes, worst latency " << report.worst_latency_cycles << " cycles -> " << out.string()
            << "\n";
  return 0;
}

int cmd_analyze(const Options& o) {
  const auto a = load_and_analyze(o);
  const auto report = dpgen::make_report(a, o.config.bus_width_bits);
  std::cout << dpgen::paths_table(a.dag, a.paths);
  std::cout << "\n" << report.path_count << " paths, worst case " << report.worst_case_header_bytes
            << " header bytes, worst latency " << report.worst_latency_cycles << " cycles at "
            << report.bus_width_bits << " bits\n";
  if (o.out_given) {
    const fs::path out = prepare_out(o.config.out_dir);
    write_json(out / "report.json", report.to_json());
    write_json(out / "paths.json", dpgen::paths_to_json(a.dag, a.paths));
  }
  print_diagnostics(report.warnings, {});
  return 0;
}

int cmd_simulate(const Options& o) {
  const auto c = dpgen::compile(load_and_analyze(o), o.config.bus_width_bits, o.config.top_name,
                                o.config.max_paths);
  const auto& layout = c.analysis.source.layout;
  std::vector<dpgen::sim::Stimulus> stimuli;
  if (!o.stimuli.empty()) {
    stimuli = dpgen::sim::load_stimuli(dpgen::read_file(o.stimuli, "sim"), layout);
  } else {
    dpgen::sim::StimulusGenerator gen(layout, c.analysis.paths, c.bus_width_bits, o.seed);
    for (std::size_t i = 0; i < o.count; ++i) stimuli.push_back(gen.next());
  }

  std::size_t passed = 0, failed = 0, errors = 0;
  nlohmann::json results = nlohmann::json::array();
  std::vector<dpgen::sim::Bytes> packets;
  for (std::size_t i = 0; i < stimuli.size(); ++i) {
    const auto& s = stimuli[i];
    nlohmann::json r;
    r["name"] = s.name.empty() ? "stimulus-" + std::to_string(i) : s.name;
    r["valid"] = s.phv.valid.to_string();
    try {
      const auto result = dpgen::sim::simulate(c.design, s);
      const auto golden = dpgen::sim::golden_deparse(layout, c.analysis.dag, s, c.bus_width_bits);
      const bool match = result.frames == golden;
      (match ? passed : failed)++;
      r["frames"] = dpgen::sim::frames_to_json(result.frames);
      r["header_emit_cycles"] = result.header_emit_cycles;
      r["total_cycles"] = result.total_cycles;
      r["golden_match"] = match;
      if (!match) r["golden_frames"] = dpgen::sim::frames_to_json(golden);
      packets.push_back(dpgen::sim::reassemble(result.frames));
      std::cout << r["name"].get<std::string>() << ": " << (match ? "ok" : "MISMATCH") << ", "
                << result.total_cycles << " cycles\n";
    } catch (const dpgen::Error& e) {
      ++errors;
      r["error"] = e.what();
      std::cout << r["name"].get<std::string>() << ": error: " << e.what() << "\n";
    }
    results.push_back(std::move(r));
  }

  std::cout << passed << " passed, " << failed << " mismatched, " << errors << " errors\n";
  if (o.out_given) {
    const fs::path out = prepare_out(o.config.out_dir);
    auto report = dpgen::make_report(c);
    nlohmann::json doc{{"report", report.to_json()},
                       {"passed", passed},
                       {"mismatched", failed},
                       {"errors", errors},
                       {"results", results}};
    if (o.stimuli.empty()) doc["seed"] = o.seed;
    write_json(out / "results.json", doc);
  }
  if (!o.pcap.empty()) dpgen::sim::write_pcap(o.pcap, packets);
  return failed == 0 && errors == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deparser generator: P4 deparser to vendor-agnostic VHDL"};
  app.require_subcommand(1);
  Options o;
  auto* compile = app.add_subcommand("compile", "Generate HDL and compile artifacts");
  auto* analyze = app.add_subcommand("analyze", "List emission paths and report metrics");
  auto* simulate = app.add_subcommand("simulate", "Run stimuli through the design model and the golden deparser");
  for (auto* cmd : {compile, analyze, simulate}) add_common(cmd, o);
  simulate->add_option("--stimuli", o.stimuli, "Stimulus JSON file (random suite when omitted)");
  simulate->add_option("--seed", o.seed, "Random suite seed")->capture_default_str();
  simulate->add_option("--count", o.count, "Random suite size")->capture_default_str();
  simulate->add_option("--pcap", o.pcap, "Write reassembled packets to a pcap file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  o.config.format = o.format == "bmv2" ? dpgen::InputFormat::kBmv2 : dpgen::InputFormat::kNative;
  o.config.mode = o.mode == "naive" ? dpgen::DagMode::kNaive : dpgen::DagMode::kParserDerived;
  for (auto* cmd : {compile, analyze, simulate}) {
    if (cmd->parsed()) o.out_given = cmd->count("--out") > 0;
  }

  try {
    if (compile->parsed()) return cmd_compile(o);
    if (analyze->parsed()) return cmd_analyze(o);
    return cmd_simulate(o);
  } catch (const dpgen::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
