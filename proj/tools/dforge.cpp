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

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dforge/pipeline.hpp"

namespace {

dforge::Stage parse_stage(const std::string& s) {
  if (s == "parse") return dforge::Stage::Parse;
  if (s == "icm") return dforge::Stage::Icm;
  if (s == "schedule") return dforge::Stage::Schedule;
  if (s == "assembly") return dforge::Stage::Assembly;
  throw CLI::ValidationError("--stop-after", "expected parse|icm|schedule|assembly");
}

dforge::Point3 parse_dims(const std::vector<int>& v, const std::string& flag) {
  if (v.size() != 3 || v[0] <= 0 || v[1] <= 0 || v[2] <= 0)
    throw CLI::ValidationError(flag, "expected three positive integers");
  return {v[0], v[1], v[2]};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"defect-forge: Clifford+T to surface-code defect assembly compiler"};
  app.require_subcommand(1);

  dforge::PipelineConfig cfg;
  std::string stop_after = "assembly";
  std::vector<int> dims_a{8, 6, 6};
  std::vector<int> dims_y{4, 4, 4};

  auto* compile = app.add_subcommand("compile", "compile a .qc circuit to all artifacts");
  compile->add_option("--input", cfg.input_path, ".qc input file")->required();
  compile->add_option("--out-dir", cfg.out_dir, "artifact directory (default .)");
  compile->add_option("--target-reliability", cfg.reliability_target,
                      "distillation reliability target (default 0.999)");
  compile->add_option("--distill-p-a", cfg.distill.at(dforge::MagicKind::A).success_prob,
                      "A-box success probability");
  compile->add_option("--distill-p-y", cfg.distill.at(dforge::MagicKind::Y).success_prob,
                      "Y-box success probability");
  compile->add_option("--box-dims-a", dims_a, "A box dims dx dy dz")->expected(3);
  compile->add_option("--box-dims-y", dims_y, "Y box dims dx dy dz")->expected(3);
  compile->add_option("--seed", cfg.seed, "seed for heralding draws (default 0)");
  compile->add_option("--stop-after", stop_after, "parse|icm|schedule|assembly");
  compile->add_flag("--emit-obj", cfg.emit_obj, "also write an .obj line export");

  std::string verify_path;
  std::size_t max_qubits = 20;
  std::size_t samples = 10;
  std::uint64_t verify_seed = 0;
  auto* verify = app.add_subcommand("verify", "oracle branch-equivalence check");
  verify->add_option("--input", verify_path, ".qc input file")->required();
  verify->add_option("--max-qubits", max_qubits, "refuse larger circuits (cap 20)");
  verify->add_option("--samples", samples, "random input states to try (default 10)");
  verify->add_option("--seed", verify_seed, "seed for input sampling");

  std::string stats_path;
  auto* stats = app.add_subcommand("stats", "T count and distillation projection");
  stats->add_option("--input", stats_path, ".qc input file")->required();
  stats->add_option("--target-reliability", cfg.reliability_target);
  stats->add_option("--distill-p-a", cfg.distill.at(dforge::MagicKind::A).success_prob);
  stats->add_option("--distill-p-y", cfg.distill.at(dforge::MagicKind::Y).success_prob);

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.distill.at(dforge::MagicKind::A).box_dims = parse_dims(dims_a, "--box-dims-a");
    cfg.distill.at(dforge::MagicKind::Y).box_dims = parse_dims(dims_y, "--box-dims-y");
    cfg.stop_after = parse_stage(stop_after);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  }

  if (compile->parsed()) return dforge::cmd_compile(cfg, std::cerr);
  if (verify->parsed())
    return dforge::cmd_verify(verify_path, max_qubits, verify_seed, samples, std::cout);
  if (stats->parsed()) return dforge::cmd_stats(stats_path, cfg, std::cout);
  return 1;
}
