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
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dforge/angle.hpp"
#include "dforge/errors.hpp"

namespace dforge {

using QubitId = std::string;

/// The four states a wire may be initialised into. Everything a circuit can
/// prepare in ICM form is one of these.
enum class InitState { Zero, Plus, A, Y };

enum class MeasurementBasis { Z, X };

enum class GateKind { H, S, V, T };

enum class Axis { X, Z };

struct InitOp {
  QubitId qubit;
  InitState state;
};

struct GateOp {
  GateKind kind;
  QubitId qubit;
};

struct RotationOp {
  Axis axis;
  PiRational angle;
  QubitId qubit;
};

struct CnotOp {
  QubitId control;
  QubitId target;
};

struct MeasureOp {
  QubitId qubit;
  MeasurementBasis basis;
};

/// Measurement whose basis depends on one previously recorded outcome bit.
/// `controller_op` is resolved during validation to the op index of the plain
/// measurement that produces the controlling bit; rewrites that rename qubits
/// keep op indices stable, so the binding survives wire reuse.
struct SelectiveMeasureOp {
  QubitId qubit;
  QubitId controller;
  MeasurementBasis basis_if_zero;
  MeasurementBasis basis_if_one;
  std::size_t controller_op = SIZE_MAX;
};

using Operation =
    std::variant<InitOp, GateOp, RotationOp, CnotOp, MeasureOp, SelectiveMeasureOp>;

/// A circuit over named wires. A wire hosts one or more episodes, each of the
/// form [Init] gates* [Measure]; a fresh Init after a measurement starts a new
/// episode (this is what wire reuse produces). Declared inputs start live
/// without an Init and may only host the first episode of their wire.
struct Circuit {
  std::vector<QubitId> qubits;   // declaration order
  std::vector<QubitId> inputs;   // subset of qubits, declared `input`
  std::vector<Operation> ops;
  std::vector<QubitId> outputs;  // must stay unmeasured

  [[nodiscard]] bool is_input(const QubitId& q) const;
  [[nodiscard]] bool is_declared(const QubitId& q) const;
};

/// Throws ParseError (with op index reported as the "line") if the circuit
/// violates the structural invariants; resolves SelectiveMeasure controller
/// bindings in place.
void validate_circuit(Circuit& c);

/// True iff ops contain only Init, Cnot, Measure and SelectiveMeasure.
[[nodiscard]] bool is_icm(const Circuit& c);

/// Rewrites every Gate op into exact rotations:
///   H -> Rz(pi/2) Rx(pi/2) Rz(pi/2),  S -> Rz(pi/2),
///   V -> Rx(pi/2),                    T -> Rz(pi/4).
/// Rotation ops pass through unchanged. Throws CompileError UnsupportedAngle
/// for rotations outside {+-pi/4, +-pi/2, pi}.
[[nodiscard]] Circuit normalize_gates(const Circuit& c);

/// Qubits referenced by an operation (1 or 2).
[[nodiscard]] std::vector<QubitId> op_qubits(const Operation& op);

// Small counting helpers shared by reports and tests.
[[nodiscard]] std::size_t count_cnots(const Circuit& c);
[[nodiscard]] std::size_t count_t_rotations(const Circuit& c);  // |angle| == pi/4 about Z
[[nodiscard]] std::map<InitState, std::size_t> init_histogram(const Circuit& c);

[[nodiscard]] std::string to_string(InitState s);
[[nodiscard]] std::string to_string(MeasurementBasis b);
[[nodiscard]] std::string to_string(GateKind g);
[[nodiscard]] std::string to_string(Axis a);

}  // namespace dforge
