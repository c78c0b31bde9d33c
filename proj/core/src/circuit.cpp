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

#include "dforge/circuit.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace dforge {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

enum class WireState { Undeclared, Dormant, Live, Measured };

}  // namespace

bool Circuit::is_input(const QubitId& q) const {
  return std::find(inputs.begin(), inputs.end(), q) != inputs.end();
}

bool Circuit::is_declared(const QubitId& q) const {
  return std::find(qubits.begin(), qubits.end(), q) != qubits.end();
}

void validate_circuit(Circuit& c) {
  std::unordered_map<QubitId, WireState> state;
  std::unordered_map<QubitId, std::size_t> last_plain_measure;
  std::unordered_set<QubitId> seen;
  for (const auto& q : c.qubits) {
    if (!seen.insert(q).second)
      throw ParseError(ParseError::Kind::DuplicateQubit, 0, 0, "duplicate qubit '" + q + "'");
    state[q] = WireState::Dormant;
  }
  for (const auto& q : c.inputs) {
    if (!state.count(q))
      throw ParseError(ParseError::Kind::UnknownQubit, 0, 0, "unknown input '" + q + "'");
    state[q] = WireState::Live;
  }

  auto require_declared = [&](const QubitId& q, std::size_t idx) {
    if (!state.count(q))
      throw ParseError(ParseError::Kind::UnknownQubit, idx, 0, "unknown qubit '" + q + "'");
  };
  auto require_live = [&](const QubitId& q, std::size_t idx) {
    require_declared(q, idx);
    switch (state[q]) {
      case WireState::Live:
        return;
      case WireState::Measured:
        throw ParseError(ParseError::Kind::UseAfterMeasure, idx, 0,
                         "operation on measured qubit '" + q + "'");
      default:
        throw ParseError(ParseError::Kind::UseBeforeInit, idx, 0,
                         "operation on uninitialised qubit '" + q + "'");
    }
  };

  for (std::size_t i = 0; i < c.ops.size(); ++i) {
    std::visit(
        overloaded{
            [&](const InitOp& op) {
              require_declared(op.qubit, i);
              if (state[op.qubit] == WireState::Live)
                throw ParseError(ParseError::Kind::DuplicateQubit, i, 0,
                                 "init on live qubit '" + op.qubit + "'");
              // Init on a measured wire starts a new episode (wire reuse).
              state[op.qubit] = WireState::Live;
            },
            [&](const GateOp& op) { require_live(op.qubit, i); },
            [&](const RotationOp& op) { require_live(op.qubit, i); },
            [&](const CnotOp& op) {
              if (op.control == op.target)
                throw ParseError(ParseError::Kind::SyntaxError, i, 0,
                                 "cnot control equals target");
              require_live(op.control, i);
              require_live(op.target, i);
            },
            [&](const MeasureOp& op) {
              require_live(op.qubit, i);
              state[op.qubit] = WireState::Measured;
              last_plain_measure[op.qubit] = i;
            },
            [&](SelectiveMeasureOp& op) {
              require_live(op.qubit, i);
              if (op.controller_op == SIZE_MAX) {
                // Bind to the latest plain measurement of the controller. A
                // pre-resolved binding (op index survives renames) is kept.
                auto it = last_plain_measure.find(op.controller);
                if (it == last_plain_measure.end())
                  throw ParseError(ParseError::Kind::ControllerNotMeasured, i, 0,
                                   "controller '" + op.controller + "' not measured before use");
                op.controller_op = it->second;
              } else {
                const bool ok = op.controller_op < i &&
                                std::holds_alternative<MeasureOp>(c.ops[op.controller_op]) &&
                                std::get<MeasureOp>(c.ops[op.controller_op]).qubit ==
                                    op.controller;
                if (!ok)
                  throw ParseError(ParseError::Kind::ControllerNotMeasured, i, 0,
                                   "stale controller binding for '" + op.controller + "'");
              }
              state[op.qubit] = WireState::Measured;
            },
        },
        c.ops[i]);
  }

  for (const auto& q : c.outputs) {
    require_declared(q, c.ops.size());
    if (state[q] == WireState::Measured)
      throw ParseError(ParseError::Kind::UseAfterMeasure, c.ops.size(), 0,
                       "output qubit '" + q + "' is measured");
  }
}

bool is_icm(const Circuit& c) {
  for (const auto& op : c.ops) {
    if (std::holds_alternative<GateOp>(op) || std::holds_alternative<RotationOp>(op))
      return false;
  }
  return true;
}

namespace {

void check_supported(const RotationOp& op) {
  const PiRational& a = op.angle;
  const bool ok = (a == kPi) || (a == kPiHalf) || (a == kPiHalf.negated()) ||
                  (a == kPiQuarter) || (a == kPiQuarter.negated());
  if (!ok)
    throw CompileError(CompileError::Kind::UnsupportedAngle,
                       "unsupported rotation angle " + a.str() +
                           " (expected one of +-1/4pi, +-1/2pi, 1/1pi)");
}

}  // namespace

Circuit normalize_gates(const Circuit& c) {
  Circuit out;
  out.qubits = c.qubits;
  out.inputs = c.inputs;
  out.outputs = c.outputs;
  out.ops.reserve(c.ops.size());
  for (const auto& op : c.ops) {
    if (const auto* g = std::get_if<GateOp>(&op)) {
      switch (g->kind) {
        case GateKind::H:
          out.ops.push_back(RotationOp{Axis::Z, kPiHalf, g->qubit});
          out.ops.push_back(RotationOp{Axis::X, kPiHalf, g->qubit});
          out.ops.push_back(RotationOp{Axis::Z, kPiHalf, g->qubit});
          break;
        case GateKind::S:
          out.ops.push_back(RotationOp{Axis::Z, kPiHalf, g->qubit});
          break;
        case GateKind::V:
          out.ops.push_back(RotationOp{Axis::X, kPiHalf, g->qubit});
          break;
        case GateKind::T:
          out.ops.push_back(RotationOp{Axis::Z, kPiQuarter, g->qubit});
          break;
      }
    } else {
      if (const auto* r = std::get_if<RotationOp>(&op)) check_supported(*r);
      out.ops.push_back(op);
    }
  }
  validate_circuit(out);
  return out;
}

std::vector<QubitId> op_qubits(const Operation& op) {
  return std::visit(
      overloaded{
          [](const InitOp& o) { return std::vector<QubitId>{o.qubit}; },
          [](const GateOp& o) { return std::vector<QubitId>{o.qubit}; },
          [](const RotationOp& o) { return std::vector<QubitId>{o.qubit}; },
          [](const CnotOp& o) { return std::vector<QubitId>{o.control, o.target}; },
          [](const MeasureOp& o) { return std::vector<QubitId>{o.qubit}; },
          [](const SelectiveMeasureOp& o) { return std::vector<QubitId>{o.qubit}; },
      },
      op);
}

std::size_t count_cnots(const Circuit& c) {
  std::size_t n = 0;
  for (const auto& op : c.ops)
    if (std::holds_alternative<CnotOp>(op)) ++n;
  return n;
}

std::size_t count_t_rotations(const Circuit& c) {
  std::size_t n = 0;
  for (const auto& op : c.ops) {
    if (const auto* r = std::get_if<RotationOp>(&op)) {
      if (r->axis == Axis::Z && (r->angle == kPiQuarter || r->angle == kPiQuarter.negated()))
        ++n;
    }
    if (const auto* g = std::get_if<GateOp>(&op))
      if (g->kind == GateKind::T) ++n;
  }
  return n;
}

std::map<InitState, std::size_t> init_histogram(const Circuit& c) {
  std::map<InitState, std::size_t> h{{InitState::Zero, 0},
                                     {InitState::Plus, 0},
                                     {InitState::A, 0},
                                     {InitState::Y, 0}};
  for (const auto& op : c.ops)
    if (const auto* in = std::get_if<InitOp>(&op)) ++h[in->state];
  return h;
}

std::string to_string(InitState s) {
  switch (s) {
    case InitState::Zero: return "|0>";
    case InitState::Plus: return "|+>";
    case InitState::A: return "|A>";
    case InitState::Y: return "|Y>";
  }
  return "?";
}

std::string to_string(MeasurementBasis b) {
  return b == MeasurementBasis::Z ? "Z" : "X";
}

std::string to_string(GateKind g) {
  switch (g) {
    case GateKind::H: return "h";
    case GateKind::S: return "s";
    case GateKind::V: return "v";
    case GateKind::T: return "t";
  }
  return "?";
}

std::string to_string(Axis a) { return a == Axis::Z ? "rz" : "rx"; }

}  // namespace dforge
