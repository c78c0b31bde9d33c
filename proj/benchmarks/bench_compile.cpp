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

#include <benchmark/benchmark.h>

#include <random>
#include <sstream>

#include "dforge/circuit_io.hpp"
#include "dforge/icm.hpp"
#include "dforge/pipeline.hpp"
#include "dforge/schedule.hpp"
#include "dforge/state_oracle.hpp"

namespace {

std::string serial_t_program(int n) {
  std::ostringstream os;
  os << "input psi\n";
  for (int i = 0; i < n; ++i) os << "t psi\n";
  os << "output psi\n";
  return os.str();
}

void BM_ParseSerialT(benchmark::State& state) {
  const std::string text = serial_t_program(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto c = dforge::parse_circuit(text);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_ParseSerialT)->Arg(8)->Arg(64);

void BM_ExpandSerialT(benchmark::State& state) {
  auto c = dforge::normalize_gates(dforge::parse_circuit(serial_t_program(
      static_cast<int>(state.range(0)))));
  (void)dforge::gadget_table(dforge::GadgetKind::T);  // exclude one-time derivation
  for (auto _ : state) {
    auto exp = dforge::expand_all(c);
    benchmark::DoNotOptimize(exp);
  }
}
BENCHMARK(BM_ExpandSerialT)->Arg(8)->Arg(64);

void BM_OracleTGadgetBranches(benchmark::State& state) {
  auto c = dforge::normalize_gates(dforge::parse_circuit(serial_t_program(1)));
  auto exp = dforge::expand_all(c);
  std::mt19937_64 rng(1);
  auto in = dforge::random_single_qubit_state(rng, "psi");
  for (auto _ : state) {
    auto branches = dforge::measure_all_branches(exp.circuit, {{"psi", in}});
    benchmark::DoNotOptimize(branches);
  }
}
BENCHMARK(BM_OracleTGadgetBranches);

void BM_AssignWires(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::vector<dforge::Lifetime> lts;
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t b = rng() % (4 * n);
    lts.push_back({"q" + std::to_string(i), b, b + 1 + rng() % n});
  }
  for (auto _ : state) {
    auto wa = dforge::assign_wires(lts);
    benchmark::DoNotOptimize(wa);
  }
}
BENCHMARK(BM_AssignWires)->Arg(64)->Arg(1024);

void BM_CompileSerialT(benchmark::State& state) {
  auto c = dforge::parse_circuit(serial_t_program(static_cast<int>(state.range(0))));
  (void)dforge::gadget_table(dforge::GadgetKind::T);
  dforge::PipelineConfig cfg;
  for (auto _ : state) {
    auto r = dforge::compile_circuit(c, cfg);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_CompileSerialT)->Arg(8)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
