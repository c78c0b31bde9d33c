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
#include <map>
#include <string>
#include <vector>

#include "dforge/circuit.hpp"
#include "dforge/state_oracle.hpp"

namespace dforge {

/// Tracked correction, up to global phase (XZ stands for Y).
enum class Pauli : std::uint8_t { I, X, Z, XZ };

[[nodiscard]] Pauli pauli_mul(Pauli a, Pauli b);
[[nodiscard]] std::string to_string(Pauli p);
[[nodiscard]] Pauli pauli_from_string(const std::string& s);
void apply_pauli(StateVector& s, const QubitId& q, Pauli p);

struct FrameBits {
  bool x = false;
  bool z = false;
  friend bool operator==(const FrameBits&, const FrameBits&) = default;
};

/// Classical record of pending X/Z corrections, one entry per live wire.
/// CNOT conjugation copies control.x onto target.x and target.z onto
/// control.z; a measurement retires the wire after using its bit to adjust
/// the raw outcome (Z basis reads x, X basis reads z).
struct PauliFrame {
  std::map<QubitId, FrameBits> bits;

  void on_init(const QubitId& q) { bits[q] = {}; }
  void on_cnot(const QubitId& control, const QubitId& target);
  void flip(const QubitId& q, Pauli p);
  /// Logical outcome for a raw measured bit; retires the wire.
  [[nodiscard]] int on_measure(const QubitId& q, MeasurementBasis basis, int raw_bit);

  friend bool operator==(const PauliFrame&, const PauliFrame&) = default;
};

/// Pure functional form: applies one of {Cnot, Measure, Init} to a frame.
/// (Measurement outcome adjustment is on_measure; this handles the frame
/// book-keeping only.)
[[nodiscard]] PauliFrame propagate_frame(PauliFrame frame, const Operation& op);

enum class GadgetKind { S, Sdag, V, Vdag, T, Tdag };

[[nodiscard]] std::string to_string(GadgetKind k);

/// One teleportation gadget instance. `new_ops` always passes is_icm.
/// `measurement_offsets` index into new_ops in table-key order (controller
/// first for the T family); key bit i is measurement i's outcome, and the
/// table maps every key to the Pauli XORed into output_wire's frame.
/// Tables are not transcribed from anywhere: they are derived once per kind
/// by enumerating every measurement branch in the state oracle and solving
/// for the Pauli that restores the target rotation.
struct GadgetExpansion {
  GadgetKind kind;
  std::vector<Operation> new_ops;
  std::vector<QubitId> ancillas;
  QubitId output_wire;
  std::vector<std::size_t> measurement_offsets;
  std::map<std::uint32_t, Pauli> correction_rule;
};

/// Allocates gadget ancilla names from one monotonic counter, skipping any
/// name already taken by the circuit.
class AncillaAllocator {
 public:
  explicit AncillaAllocator(const Circuit& c);
  [[nodiscard]] QubitId fresh();

 private:
  std::vector<QubitId> taken_;
  std::size_t next_ = 0;
};

// Gadget builders. `data` must be live. The S gadget uses one |Y> ancilla,
// one CNOT (data -> ancilla) and an M_Z; the V gadget is its X<->Z dual
// (CNOT ancilla -> data, M_X); the T gadget is the six-wire network with
// five ancillas (|A>,|0>,|Y>,|+>,|0>), six CNOTs, a Z measurement of the
// data wire as controller and four selective measurements. Negative angles
// reuse the same structure with the opposite outcome convention (the T
// family swaps the selective basis columns).
[[nodiscard]] GadgetExpansion expand_s(const QubitId& data, AncillaAllocator& alloc,
                                       bool dagger = false);
[[nodiscard]] GadgetExpansion expand_v(const QubitId& data, AncillaAllocator& alloc,
                                       bool dagger = false);
[[nodiscard]] GadgetExpansion expand_t(const QubitId& data, AncillaAllocator& alloc,
                                       bool dagger = false);

/// Target single-qubit unitary a gadget implements.
[[nodiscard]] Mat2 gadget_target(GadgetKind k);

/// Branch-correction table for a gadget kind, derived by the oracle on first
/// use and cached. Key packing: bit i = outcome of measurement i in
/// measurement_offsets order.
[[nodiscard]] const std::map<std::uint32_t, Pauli>& gadget_table(GadgetKind k);

/// Unconditional frame flip recorded during expansion (from Rz(pi)/Rx(pi)).
/// Applies once `at_op` emitted operations have executed.
struct FlipEvent {
  std::size_t at_op;
  QubitId wire;
  Pauli pauli;
};

/// Correction rule for one expanded gadget instance. `measurement_ops` are
/// absolute op indices in the expanded circuit, in table-key order; the rule
/// fires when the last of them has been resolved.
struct GadgetRule {
  std::string id;
  GadgetKind kind;
  std::vector<std::size_t> measurement_ops;
  QubitId output_wire;
  std::map<std::uint32_t, Pauli> table;
};

struct TrackingRules {
  std::vector<FlipEvent> flips;
  std::vector<GadgetRule> gadgets;
  std::map<QubitId, QubitId> aliases;  // original qubit -> final wire
};

struct IcmExpansion {
  Circuit circuit;
  TrackingRules rules;
};

/// Expands a normalized circuit (no Gate ops; rotations only +-pi/4, +-pi/2,
/// pi about Z or X) into ICM form. Rz(pi)/Rx(pi) become frame-only flips;
/// +-pi/2 become S/V gadgets; +-pi/4 become T gadgets (the output moves to a
/// fresh wire). Init/Cnot/Measure/SelectiveMeasure pass through with wire
/// renaming. The result always satisfies is_icm.
[[nodiscard]] IcmExpansion expand_all(const Circuit& c);

/// Correction-rule table as a JSON document keyed by gadget instance id.
[[nodiscard]] std::string corrections_report(const TrackingRules& rules);

}  // namespace dforge
