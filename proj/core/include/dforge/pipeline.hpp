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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "dforge/circuit.hpp"
#include "dforge/distill.hpp"
#include "dforge/geometry.hpp"
#include "dforge/icm.hpp"
#include "dforge/schedule.hpp"

namespace dforge {

enum class Stage { Parse, Icm, Schedule, Assembly };

struct PipelineConfig {
  std::string input_path;
  std::string out_dir = ".";
  double reliability_target = 0.999;
  std::map<MagicKind, DistillationSpec> distill{
      {MagicKind::A, {MagicKind::A, 0.9, {8, 6, 6}}},
      {MagicKind::Y, {MagicKind::Y, 0.9, {4, 4, 4}}},
  };
  std::uint64_t seed = 0;
  Stage stop_after = Stage::Assembly;
  bool emit_obj = false;
  std::size_t box_cap = 4096;
};

struct RunReport {
  std::size_t qubit_count = 0;   // wires of the ICM circuit
  std::size_t wire_count = 0;    // after scheduling
  std::size_t max_live = 0;
  std::size_t cnot_count = 0;
  std::size_t t_count = 0;       // |pi/4| Z rotations before expansion
  std::map<InitState, std::size_t> inits;
  std::map<MagicKind, std::size_t> required;
  std::map<MagicKind, std::size_t> box_counts;
  std::map<MagicKind, double> achieved;
  std::uint64_t bbox_volume = 0;
  std::uint64_t occupied_cells = 0;
  double occupancy = 0.0;  // reported rounded to 3 decimals
};

/// Everything a compile run produces, stage by stage.
struct CompileResult {
  Circuit parsed;
  Circuit normalized;
  IcmExpansion expansion;
  std::vector<Lifetime> lifetimes;
  WireAssignment wires;
  Circuit scheduled;
  DistillationPlan plan;
  std::vector<BoxPlacement> placements;
  std::map<std::size_t, std::size_t> matching;
  Assembly assembly;
  RunReport report;
};

/// Runs parse -> normalize -> expand -> schedule -> plan -> assemble on an
/// in-memory circuit; stages beyond `stop_after` stay empty. Heralding draws
/// come from cfg.seed; a draw that leaves too few successes replans with
/// more boxes (bounded, deterministic).
[[nodiscard]] CompileResult compile_circuit(const Circuit& input, const PipelineConfig& cfg);

/// File-based compile: writes `<stem>.icm.qc`, `<stem>.wires.json`,
/// `<stem>.assembly.json` and `<stem>.report.json` under cfg.out_dir
/// (artifact set truncated by stop_after; .assembly.obj with emit_obj).
/// Timings go to the log only, so artifacts are byte-stable for a fixed
/// seed. Returns 0 on success, 1 with a stage-tagged diagnostic otherwise.
int cmd_compile(const PipelineConfig& cfg, std::ostream& diag);

/// Branch equivalence against the oracle: expands non-ICM inputs and checks
/// every branch against the original circuit; bare ICM inputs are checked
/// for mutual Pauli equivalence across branches. Prints a per-branch
/// fidelity table. Exit 0 = pass, 2 = a branch failed, 3 = capacity.
int cmd_verify(const std::string& path, std::size_t max_qubits, std::uint64_t seed,
               std::size_t samples, std::ostream& out);

/// T count, required magic states and projected box counts under cfg.
int cmd_stats(const std::string& path, const PipelineConfig& cfg, std::ostream& out);

[[nodiscard]] std::string report_json(const RunReport& report, const CompileResult& result,
                                      const PipelineConfig& cfg);

}  // namespace dforge
