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

#include <string>
#include <string_view>

#include "dforge/circuit.hpp"

namespace dforge {

/// Parses the line-based `.qc` format (see docs/qc-format.md):
///   qubit <id> | input <id> | init <id> <state> | h|s|v|t <id>
///   | rz|rx <id> <num>/<den>pi | cnot <ctrl> <tgt> | measure <id> Z|X
///   | smeasure <id> ctrl=<id> zero=Z|X one=Z|X | output <id>
/// States are written |0>, |+>, |A>, |Y>; '#' starts a comment. Throws
/// ParseError carrying line and column on failure; the returned circuit is
/// validated.
[[nodiscard]] Circuit parse_circuit(std::string_view text);

/// Deterministic printer: declarations first (declaration order), then ops in
/// index order, then outputs. parse_circuit(print_circuit(c)) is structurally
/// equal to c.
[[nodiscard]] std::string print_circuit(const Circuit& c);

[[nodiscard]] Circuit load_circuit_file(const std::string& path);

/// Structural equality (qubits, inputs, ops, outputs).
[[nodiscard]] bool circuits_equal(const Circuit& a, const Circuit& b);

}  // namespace dforge
