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

#include <map>
#include <string>
#include <vector>

#include "dforge/circuit.hpp"
#include "dforge/icm.hpp"
#include "dforge/state_oracle.hpp"

namespace dforge {

/// How tracked corrections are realized while enumerating branches:
/// Deferred keeps them in the Pauli frame and applies the accumulated frame
/// to the surviving wires at the very end; Inline executes each correction
/// as a gate the moment its rule fires. The two must agree — that agreement
/// is the frame-tracking soundness check.
enum class CorrectionMode { Deferred, Inline };

struct CorrectedBranch {
  /// Logical (frame-adjusted) outcome bits of all measurements, op order.
  std::string logical_bits;
  /// Logical bits of pass-through measurements only (those not owned by a
  /// gadget rule); this is the key that matches branches of the original
  /// circuit.
  std::string key;
  std::vector<OutcomeRecord> raw;
  double probability = 1.0;
  /// Final state: corrections applied, measured-and-dead wires rotated back
  /// to |0> so states are comparable across branches and modes.
  StateVector state;
};

/// Branch enumeration of an ICM circuit with Pauli-frame tracking. Selective
/// measurement bases and rule lookups resolve against logical bits, which is
/// what a classical tracker feeds the control hardware.
[[nodiscard]] std::vector<CorrectedBranch> enumerate_with_corrections(
    const Circuit& icm, const TrackingRules& rules,
    const std::map<QubitId, StateVector>& inputs, CorrectionMode mode);

struct BranchRow {
  std::string bits;  // raw outcome bits, op order
  std::string key;
  double probability = 0.0;
  double fidelity = 0.0;
  bool pass = false;
};

struct EquivalenceReport {
  bool pass = true;
  std::vector<BranchRow> rows;
  std::string message;
};

/// Checks that an expansion reproduces the original circuit branch for
/// branch: every corrected branch state must match the original's branch
/// with the same measurement key up to global phase, and per-key
/// probabilities must agree within tol.
[[nodiscard]] EquivalenceReport check_expansion_equivalence(
    const Circuit& original, const IcmExpansion& expansion,
    const std::map<QubitId, StateVector>& inputs, double tol = kFidelityTol);

/// For a bare ICM circuit with no tracking rules: checks that all branches
/// agree with the first branch up to Pauli operators on the surviving wires
/// (the "same rotation irrespective of outcomes" property).
[[nodiscard]] EquivalenceReport mutual_pauli_equivalence(
    const Circuit& icm, const std::map<QubitId, StateVector>& inputs,
    double tol = kFidelityTol);

/// Wires still live after the last op (inputs and init'd wires minus
/// measured ones, episode-aware).
[[nodiscard]] std::vector<QubitId> final_live_wires(const Circuit& c);

}  // namespace dforge
