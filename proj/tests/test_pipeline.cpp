// Copyright 2026 The defect-forge authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dforge/circuit_io.hpp"
#include "dforge/pipeline.hpp"
#include "helpers.hpp"

using namespace dforge;
using dforge::testing::fixture_path;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_dir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("dforge_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("compile: T-gadget fixture artifact set and counts") {
  PipelineConfig cfg;
  cfg.input_path = fixture_path("t_gadget.qc");
  cfg.out_dir = temp_dir("tfix").string();
  cfg.seed = 3;
  std::ostringstream diag;
  REQUIRE(cmd_compile(cfg, diag) == 0);

  const fs::path dir(cfg.out_dir);
  CHECK(fs::exists(dir / "t_gadget.icm.qc"));
  CHECK(fs::exists(dir / "t_gadget.wires.json"));
  CHECK(fs::exists(dir / "t_gadget.assembly.json"));
  CHECK(fs::exists(dir / "t_gadget.report.json"));

  nlohmann::json report = nlohmann::json::parse(slurp(dir / "t_gadget.report.json"));
  CHECK(report.at("qubit_count") == 6);
  CHECK(report.at("cnot_count") == 6);
  CHECK(report.at("inits").at("a") == 1);
  CHECK(report.at("inits").at("y") == 1);
  CHECK(report.at("inits").at("zero") == 2);
  CHECK(report.at("inits").at("plus") == 1);
  CHECK(report.at("distillation").at("A").at("required") == 1);
  CHECK(report.at("distillation").at("Y").at("required") == 1);
  // default config: one state of each kind needs three boxes of each kind
  CHECK(report.at("distillation").at("A").at("boxes") == 3);
  CHECK(report.at("distillation").at("Y").at("boxes") == 3);
}

TEST_CASE("compile: empty circuit still emits all artifacts") {
  const fs::path dir = temp_dir("empty");
  std::ofstream(dir / "empty.qc") << "# nothing\n";
  PipelineConfig cfg;
  cfg.input_path = (dir / "empty.qc").string();
  cfg.out_dir = (dir / "out").string();
  std::ostringstream diag;
  REQUIRE(cmd_compile(cfg, diag) == 0);
  nlohmann::json report = nlohmann::json::parse(slurp(fs::path(cfg.out_dir) / "empty.report.json"));
  CHECK(report.at("qubit_count") == 0);
  CHECK(report.at("cnot_count") == 0);
  CHECK(report.at("t_count") == 0);
  CHECK(report.at("assembly").at("bbox_volume") == 0);
  nlohmann::json assembly =
      nlohmann::json::parse(slurp(fs::path(cfg.out_dir) / "empty.assembly.json"));
  CHECK(assembly.at("defects").empty());
  CHECK(assembly.at("bbox").is_null());
}

TEST_CASE("compile: deterministic artifacts for a fixed seed") {
  const fs::path dir = temp_dir("det");
  std::ofstream(dir / "prog.qc")
      << "input psi\nt psi\nh psi\nt psi\noutput psi\n";
  PipelineConfig cfg;
  cfg.input_path = (dir / "prog.qc").string();
  cfg.seed = 42;
  cfg.emit_obj = true;

  std::ostringstream diag;
  cfg.out_dir = (dir / "run1").string();
  REQUIRE(cmd_compile(cfg, diag) == 0);
  cfg.out_dir = (dir / "run2").string();
  REQUIRE(cmd_compile(cfg, diag) == 0);

  for (const char* name : {"prog.icm.qc", "prog.wires.json", "prog.assembly.json",
                           "prog.report.json", "prog.assembly.obj"}) {
    CAPTURE(name);
    CHECK(slurp(dir / "run1" / name) == slurp(dir / "run2" / name));
  }
}

TEST_CASE("compile: stop-after icm resumes to the same wires and assembly") {
  const fs::path dir = temp_dir("resume");
  std::ofstream(dir / "prog.qc") << "input psi\ns psi\nt psi\noutput psi\n";

  PipelineConfig full;
  full.input_path = (dir / "prog.qc").string();
  full.out_dir = (dir / "full").string();
  full.seed = 9;
  std::ostringstream diag;
  REQUIRE(cmd_compile(full, diag) == 0);

  PipelineConfig icm_only = full;
  icm_only.out_dir = (dir / "partial").string();
  icm_only.stop_after = Stage::Icm;
  REQUIRE(cmd_compile(icm_only, diag) == 0);
  CHECK(fs::exists(dir / "partial" / "prog.icm.qc"));
  CHECK_FALSE(fs::exists(dir / "partial" / "prog.wires.json"));

  PipelineConfig resumed = full;
  resumed.input_path = (dir / "partial" / "prog.icm.qc").string();
  resumed.out_dir = (dir / "resumed").string();
  REQUIRE(cmd_compile(resumed, diag) == 0);

  // the ICM artifact re-compiles to identical wires and assembly
  CHECK(slurp(dir / "full" / "prog.wires.json") ==
        slurp(dir / "resumed" / "prog.icm.wires.json"));
  CHECK(slurp(dir / "full" / "prog.assembly.json") ==
        slurp(dir / "resumed" / "prog.icm.assembly.json"));
  CHECK(slurp(dir / "full" / "prog.icm.qc") == slurp(dir / "resumed" / "prog.icm.icm.qc"));
}

TEST_CASE("compile: nonzero exit and stage tag on bad input") {
  PipelineConfig cfg;
  cfg.input_path = "/nonexistent/input.qc";
  std::ostringstream diag;
  CHECK(cmd_compile(cfg, diag) == 1);
  CHECK(diag.str().find("[parse]") != std::string::npos);
}

TEST_CASE("verify: gadget expansions pass, corrupted fixture fails") {
  std::ostringstream out;
  const fs::path dir = temp_dir("verify");
  std::ofstream(dir / "s.qc") << "input psi\ns psi\noutput psi\n";
  CHECK(cmd_verify((dir / "s.qc").string(), 20, 5, 6, out) == 0);

  out.str("");
  CHECK(cmd_verify(fixture_path("t_gadget.qc"), 20, 5, 4, out) == 0);
  CHECK(out.str().find("PASS") != std::string::npos);

  out.str("");
  CHECK(cmd_verify(fixture_path("t_gadget_corrupt.qc"), 20, 5, 4, out) == 2);
  CHECK(out.str().find("FAIL") != std::string::npos);
}

TEST_CASE("verify: capacity exit code") {
  const fs::path dir = temp_dir("cap");
  {
    std::ofstream big(dir / "big.qc");
    for (int i = 0; i < 21; ++i) big << "qubit q" << i << "\ninit q" << i << " |0>\n";
    for (int i = 0; i < 21; ++i) big << "measure q" << i << " Z\n";
  }
  std::ostringstream out;
  CHECK(cmd_verify((dir / "big.qc").string(), 20, 0, 1, out) == 3);
}

TEST_CASE("stats: T counts and box projections") {
  const fs::path dir = temp_dir("stats");
  std::ofstream(dir / "one_t.qc") << "input psi\nt psi\noutput psi\n";
  PipelineConfig cfg;
  std::ostringstream out;
  REQUIRE(cmd_stats((dir / "one_t.qc").string(), cfg, out) == 0);
  const std::string text = out.str();
  CHECK(text.find("t_count: 1") != std::string::npos);
  CHECK(text.find("required_A: 1") != std::string::npos);
  CHECK(text.find("required_Y: 1") != std::string::npos);
  CHECK(text.find("boxes_A: 3") != std::string::npos);  // 1 of n at p=0.9 -> 3

  std::ofstream(dir / "clifford.qc") << "input psi\nh psi\ns psi\noutput psi\n";
  out.str("");
  REQUIRE(cmd_stats((dir / "clifford.qc").string(), cfg, out) == 0);
  CHECK(out.str().find("t_count: 0") != std::string::npos);
  CHECK(out.str().find("required_A: 0") != std::string::npos);

  {
    std::ofstream ten(dir / "ten_t.qc");
    ten << "input psi\n";
    for (int i = 0; i < 10; ++i) ten << "t psi\n";
    ten << "output psi\n";
  }
  out.str("");
  REQUIRE(cmd_stats((dir / "ten_t.qc").string(), cfg, out) == 0);
  CHECK(out.str().find("required_A: 10") != std::string::npos);
  DistillationSpec spec{MagicKind::A, 0.9, {8, 6, 6}};
  const std::size_t expect = boxes_needed(10, spec, 0.999);
  CHECK(out.str().find("boxes_A: " + std::to_string(expect)) != std::string::npos);
}

TEST_CASE("pipeline: verify passes on every compiled stage of a mixed program") {
  const fs::path dir = temp_dir("mixed");
  std::ofstream(dir / "mixed.qc") << "input a\nqubit b\ninit b |0>\nt a\ncnot a b\nh b\n"
                                  << "measure a Z\noutput b\n";
  std::ostringstream out;
  CHECK(cmd_verify((dir / "mixed.qc").string(), 20, 1, 4, out) == 0);
}

TEST_CASE("compile: stage-tagged diagnostic when planning cannot reach the target") {
  const fs::path dir = temp_dir("unreachable");
  std::ofstream(dir / "prog.qc") << "input psi\nt psi\noutput psi\n";
  PipelineConfig cfg;
  cfg.input_path = (dir / "prog.qc").string();
  cfg.out_dir = (dir / "out").string();
  cfg.distill.at(MagicKind::A).success_prob = 1e-6;
  cfg.box_cap = 16;
  std::ostringstream diag;
  CHECK(cmd_compile(cfg, diag) == 1);
  CHECK(diag.str().find("[compile]") != std::string::npos);
}

TEST_CASE("end-to-end: two-qubit entangling program with Ts verifies and assembles") {
  const fs::path dir = temp_dir("e2e");
  std::ofstream(dir / "prog.qc") << "input a\ninput b\nt a\ncnot a b\nh b\n"
                                 << "cnot b a\noutput a\noutput b\n";
  std::ostringstream out;
  CHECK(cmd_verify((dir / "prog.qc").string(), 20, 11, 2, out) == 0);

  PipelineConfig cfg;
  cfg.input_path = (dir / "prog.qc").string();
  cfg.out_dir = (dir / "out").string();
  cfg.seed = 2;
  std::ostringstream diag;
  REQUIRE(cmd_compile(cfg, diag) == 0);
  CompileResult r = compile_circuit(load_circuit_file(cfg.input_path), cfg);
  CHECK(check_assembly_invariants(r.assembly).empty());
  CHECK(r.report.wire_count <= r.report.qubit_count);
  CHECK(r.report.required.at(MagicKind::A) == 1);   // one T gadget
  CHECK(r.report.required.at(MagicKind::Y) == 4);   // one T + three from H
}

TEST_CASE("compile: already-scheduled multi-episode input keeps its layout") {
  const fs::path dir = temp_dir("reuse");
  std::ofstream(dir / "reuse.qc") << "qubit w0\nqubit w1\ninit w0 |0>\ninit w1 |+>\n"
                                  << "cnot w1 w0\nmeasure w0 Z\ninit w0 |Y>\ncnot w1 w0\n"
                                  << "measure w0 X\noutput w1\n";
  PipelineConfig cfg;
  cfg.input_path = (dir / "reuse.qc").string();
  cfg.out_dir = (dir / "out").string();
  std::ostringstream diag;
  REQUIRE(cmd_compile(cfg, diag) == 0);
  CompileResult r = compile_circuit(load_circuit_file(cfg.input_path), cfg);
  CHECK(r.report.wire_count == 2);
  CHECK(r.assembly.braids.size() == 2);
  CHECK(check_assembly_invariants(r.assembly).empty());
}
