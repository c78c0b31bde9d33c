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

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "dforge/circuit.hpp"

namespace dforge {

/// Half-open liveness interval [birth, death) in op-index time. birth is the
/// Init position (0 for inputs), death the measurement position (ops length
/// for survivors). Because births are Init ops and deaths are measurement
/// ops, two distinct qubits never collide on an interior index.
struct Lifetime {
  QubitId qubit;
  std::size_t birth;
  std::size_t death;
};

struct WireAssignment {
  std::map<QubitId, std::size_t> wire_of;
  std::size_t wire_count = 0;
};

/// One Lifetime per qubit; requires is_icm and a single episode per qubit.
/// Declared-but-unused qubits are treated like inputs ([0, ops length)).
[[nodiscard]] std::vector<Lifetime> compute_lifetimes(const Circuit& c);

/// First-fit greedy over lifetimes sorted by (birth, death, name). Two
/// qubits share a wire only when the earlier death is strictly below the
/// later birth; on interval sets where births and deaths never coincide this
/// yields exactly the max-liveness wire count (interval-graph coloring).
[[nodiscard]] WireAssignment assign_wires(const std::vector<Lifetime>& lifetimes);

/// Brute-force sweep: max over op indices of the number of live intervals.
[[nodiscard]] std::size_t max_simultaneous_live(const std::vector<Lifetime>& lifetimes);

/// Renames qubits onto their wires ("w0", "w1", ...). Episodes on a shared
/// wire become consecutive init..measure runs; op order and selective
/// controller bindings are untouched, so oracle semantics are preserved.
/// Throws CompileError OverlapViolation if the assignment stacks
/// overlapping lifetimes.
[[nodiscard]] Circuit rewrite_on_wires(const Circuit& c, const WireAssignment& w);

/// JSON report {qubits: {qubit -> wire}, wire_count, max_live}.
[[nodiscard]] std::string wire_map_report(const std::vector<Lifetime>& lifetimes,
                                          const WireAssignment& w);

}  // namespace dforge
