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

#include "dforge/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dforge/circuit_io.hpp"
#include "dforge/log.hpp"
#include "dforge/state_oracle.hpp"
#include "dforge/verify.hpp"

namespace dforge {

namespace {

using ordered_json = nlohmann::ordered_json;

class StageTimer {
 public:
  explicit StageTimer(std::string name)
      : name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    const auto us = std::chrono::duration_cast<std::chrono::microseconds>(
                        std::chrono::steady_clock::now() - start_)
                        .count();
    log(LogLevel::Info, "stage " + name_ + ": " + std::to_string(us) + "us");
  }

 private:
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

bool stage_at_least(Stage a, Stage b) { return static_cast<int>(a) >= static_cast<int>(b); }

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << content;
}

}  // namespace

CompileResult compile_circuit(const Circuit& input, const PipelineConfig& cfg) {
  CompileResult r;
  r.parsed = input;
  if (cfg.stop_after == Stage::Parse) return r;

  {
    StageTimer t("icm");
    r.normalized = normalize_gates(r.parsed);
    r.report.t_count = count_t_rotations(r.normalized);
    r.expansion = expand_all(r.normalized);
  }
  r.report.qubit_count = r.expansion.circuit.qubits.size();
  r.report.cnot_count = count_cnots(r.expansion.circuit);
  r.report.inits = init_histogram(r.expansion.circuit);
  if (cfg.stop_after == Stage::Icm) return r;

  {
    StageTimer t("schedule");
    std::map<QubitId, int> init_counts;
    bool already_scheduled = false;
    for (const auto& op : r.expansion.circuit.ops)
      if (const auto* in = std::get_if<InitOp>(&op))
        if (++init_counts[in->qubit] > 1) already_scheduled = true;

    if (already_scheduled) {
      // Input wires already host multiple episodes: keep the layout and
      // report per-wire occupancy spans instead of re-packing.
      const Circuit& c = r.expansion.circuit;
      for (std::size_t i = 0; i < c.qubits.size(); ++i) r.wires.wire_of[c.qubits[i]] = i;
      r.wires.wire_count = c.qubits.size();
      std::map<QubitId, Lifetime> span;
      for (const auto& e : extract_episodes(c)) {
        const QubitId& q = c.qubits[e.wire];
        auto it = span.find(q);
        if (it == span.end())
          span[q] = {q, e.birth, e.death};
        else {
          it->second.birth = std::min(it->second.birth, e.birth);
          it->second.death = std::max(it->second.death, e.death);
        }
      }
      for (const auto& q : c.qubits)
        if (span.count(q)) r.lifetimes.push_back(span.at(q));
      r.scheduled = c;
    } else {
      r.lifetimes = compute_lifetimes(r.expansion.circuit);
      r.wires = assign_wires(r.lifetimes);
      r.scheduled = rewrite_on_wires(r.expansion.circuit, r.wires);
    }
  }
  r.report.wire_count = r.wires.wire_count;
  r.report.max_live = max_simultaneous_live(r.lifetimes);
  if (cfg.stop_after == Stage::Schedule) return r;

  {
    StageTimer t("assembly");
    r.plan.required = count_required(r.expansion.circuit);
    r.plan.reliability_target = cfg.reliability_target;
    for (const auto& [kind, spec] : cfg.distill)
      r.plan.boxes[kind] =
          boxes_needed(r.plan.required.at(kind), spec, cfg.reliability_target, cfg.box_cap);

    // Heralding: draw, and if a kind came up short of its required count,
    // grow that row and redraw. Bounded and fully determined by the seed.
    const auto sites = magic_init_sites(r.scheduled);
    for (int attempt = 0;; ++attempt) {
      if (attempt > 64)
        throw PlanError(PlanError::Kind::InsufficientSuccesses,
                        "replanning did not converge");
      r.placements = place_boxes(r.plan, cfg.distill);
      apply_success_mask(r.placements, cfg.distill,
                         cfg.seed + 0x9e3779b97f4a7c15ULL * std::uint64_t(attempt));
      std::map<MagicKind, std::size_t> successes{{MagicKind::A, 0}, {MagicKind::Y, 0}};
      for (const auto& b : r.placements)
        if (b.succeeded) ++successes[b.kind];
      bool ok = true;
      for (const auto& [kind, need] : r.plan.required) {
        if (successes[kind] < need) {
          r.plan.boxes[kind] += need - successes[kind];
          ok = false;
        }
      }
      if (ok) break;
      log(LogLevel::Info, "heralding came up short, replanning (attempt " +
                              std::to_string(attempt + 1) + ")");
    }
    for (const auto& [kind, spec] : cfg.distill)
      r.plan.achieved[kind] =
          success_tail(r.plan.boxes.at(kind), spec.success_prob, r.plan.required.at(kind));

    r.matching = wire_outputs(r.placements, sites);
    r.assembly = build_assembly(r.scheduled, r.placements, r.matching);
  }

  for (const auto& [kind, n] : r.plan.boxes) r.report.box_counts[kind] = n;
  r.report.required = r.plan.required;
  r.report.achieved = r.plan.achieved;
  if (!r.assembly.empty()) {
    const Metrics m = compute_metrics(r.assembly);
    r.report.bbox_volume = m.bbox_volume;
    r.report.occupied_cells = m.occupied_cells;
    r.report.occupancy = round3(m.occupancy);
  }
  return r;
}

std::string report_json(const RunReport& report, const CompileResult& result,
                        const PipelineConfig& cfg) {
  ordered_json doc;
  doc["version"] = 1;
  doc["seed"] = cfg.seed;
  doc["qubit_count"] = report.qubit_count;
  doc["wire_count"] = report.wire_count;
  doc["max_live"] = report.max_live;
  doc["cnot_count"] = report.cnot_count;
  doc["t_count"] = report.t_count;
  doc["inits"] = {{"zero", report.inits.count(InitState::Zero) ? report.inits.at(InitState::Zero) : 0},
                  {"plus", report.inits.count(InitState::Plus) ? report.inits.at(InitState::Plus) : 0},
                  {"a", report.inits.count(InitState::A) ? report.inits.at(InitState::A) : 0},
                  {"y", report.inits.count(InitState::Y) ? report.inits.at(InitState::Y) : 0}};

  ordered_json distill;
  distill["reliability_target"] = cfg.reliability_target;
  for (MagicKind kind : {MagicKind::A, MagicKind::Y}) {
    ordered_json jk;
    jk["required"] = report.required.count(kind) ? report.required.at(kind) : 0;
    jk["boxes"] = report.box_counts.count(kind) ? report.box_counts.at(kind) : 0;
    jk["achieved"] = report.achieved.count(kind) ? report.achieved.at(kind) : 1.0;
    jk["success_prob"] = cfg.distill.at(kind).success_prob;
    const Point3& d = cfg.distill.at(kind).box_dims;
    jk["box_dims"] = {d.x, d.y, d.z};
    distill[to_string(kind)] = std::move(jk);
  }
  distill["placements"] = ordered_json::array();
  for (const auto& b : result.placements) {
    distill["placements"].push_back({{"kind", to_string(b.kind)},
                                     {"origin", {b.origin.x, b.origin.y, b.origin.z}},
                                     {"dims", {b.dims.x, b.dims.y, b.dims.z}},
                                     {"succeeded", b.succeeded},
                                     {"pin", {b.pin.x, b.pin.y, b.pin.z}}});
  }
  doc["distillation"] = std::move(distill);

  doc["assembly"] = {{"bbox_volume", report.bbox_volume},
                     {"occupied_cells", report.occupied_cells},
                     {"occupancy", report.occupancy}};
  doc["corrections"] = nlohmann::ordered_json::parse(corrections_report(result.expansion.rules));
  return doc.dump(2) + "\n";
}

int cmd_compile(const PipelineConfig& cfg, std::ostream& diag) {
  namespace fs = std::filesystem;
  std::string stage = "parse";
  try {
    Circuit input = load_circuit_file(cfg.input_path);
    stage = "compile";
    CompileResult r = compile_circuit(input, cfg);

    stage = "write";
    const fs::path out_dir(cfg.out_dir);
    fs::create_directories(out_dir);
    const std::string stem = fs::path(cfg.input_path).stem().string();

    if (stage_at_least(cfg.stop_after, Stage::Icm))
      write_file(out_dir / (stem + ".icm.qc"), print_circuit(r.expansion.circuit));
    if (stage_at_least(cfg.stop_after, Stage::Schedule))
      write_file(out_dir / (stem + ".wires.json"), wire_map_report(r.lifetimes, r.wires));
    if (stage_at_least(cfg.stop_after, Stage::Assembly)) {
      write_file(out_dir / (stem + ".assembly.json"), export_assembly(r.assembly));
      if (cfg.emit_obj)
        write_file(out_dir / (stem + ".assembly.obj"), export_assembly_obj(r.assembly));
      write_file(out_dir / (stem + ".report.json"), report_json(r.report, r, cfg));
    }
    return 0;
  } catch (const std::exception& e) {
    diag << "error [" << stage << "]: " << e.what() << "\n";
    return 1;
  }
}

namespace {

std::map<QubitId, StateVector> sample_inputs(const Circuit& c, std::mt19937_64& rng) {
  std::map<QubitId, StateVector> inputs;
  for (const auto& q : c.inputs) inputs[q] = random_single_qubit_state(rng, q);
  return inputs;
}

void print_rows(const EquivalenceReport& rep, std::ostream& out) {
  for (const auto& row : rep.rows) {
    out << "  branch " << (row.bits.empty() ? "-" : row.bits) << "  p=" << row.probability
        << "  fidelity=" << row.fidelity << "  " << (row.pass ? "PASS" : "FAIL") << "\n";
  }
  if (!rep.message.empty()) out << "  " << rep.message << "\n";
}

}  // namespace

int cmd_verify(const std::string& path, std::size_t max_qubits, std::uint64_t seed,
               std::size_t samples, std::ostream& out) {
  try {
    Circuit c = load_circuit_file(path);
    std::mt19937_64 rng(seed);
    const std::size_t cap = std::min<std::size_t>(max_qubits, kMaxOracleQubits);

    bool all_pass = true;
    if (is_icm(c)) {
      if (c.qubits.size() > cap)
        throw OracleError(OracleError::Kind::CapacityExceeded,
                          "circuit exceeds max qubits for verification");
      const std::size_t runs = c.inputs.empty() ? 1 : samples;
      for (std::size_t s = 0; s < runs; ++s) {
        auto inputs = sample_inputs(c, rng);
        auto rep = mutual_pauli_equivalence(c, inputs);
        out << "sample " << s << " (branch agreement up to output Paulis)\n";
        print_rows(rep, out);
        all_pass = all_pass && rep.pass;
      }
    } else {
      Circuit normalized = normalize_gates(c);
      IcmExpansion exp = expand_all(normalized);
      if (exp.circuit.qubits.size() > cap)
        throw OracleError(OracleError::Kind::CapacityExceeded,
                          "expanded circuit exceeds max qubits for verification");
      const std::size_t runs = c.inputs.empty() ? 1 : samples;
      for (std::size_t s = 0; s < runs; ++s) {
        auto inputs = sample_inputs(c, rng);
        auto rep = check_expansion_equivalence(c, exp, inputs);
        out << "sample " << s << " (expansion vs original, tracked corrections)\n";
        print_rows(rep, out);
        all_pass = all_pass && rep.pass;
      }
    }
    out << (all_pass ? "verify: PASS" : "verify: FAIL") << "\n";
    return all_pass ? 0 : 2;
  } catch (const OracleError& e) {
    if (e.kind == OracleError::Kind::CapacityExceeded) {
      out << "verify: " << e.what() << "\n";
      return 3;
    }
    out << "verify: error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    out << "verify: error: " << e.what() << "\n";
    return 2;
  }
}

int cmd_stats(const std::string& path, const PipelineConfig& cfg, std::ostream& out) {
  try {
    Circuit c = load_circuit_file(path);
    Circuit normalized = normalize_gates(c);
    IcmExpansion exp = expand_all(normalized);
    const auto required = count_required(exp.circuit);

    out << "qubits: " << c.qubits.size() << "\n";
    out << "ops: " << c.ops.size() << "\n";
    out << "t_count: " << count_t_rotations(normalized) << "\n";
    out << "icm_qubits: " << exp.circuit.qubits.size() << "\n";
    out << "icm_cnots: " << count_cnots(exp.circuit) << "\n";
    for (MagicKind kind : {MagicKind::A, MagicKind::Y}) {
      const std::size_t need = required.at(kind);
      const std::size_t boxes =
          boxes_needed(need, cfg.distill.at(kind), cfg.reliability_target, cfg.box_cap);
      out << "required_" << to_string(kind) << ": " << need << "\n";
      out << "boxes_" << to_string(kind) << ": " << boxes << "\n";
    }
    return 0;
  } catch (const std::exception& e) {
    out << "stats: error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace dforge
