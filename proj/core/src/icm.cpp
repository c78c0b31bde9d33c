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

#include "dforge/icm.hpp"

#include <algorithm>
#include <cassert>
#include <mutex>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace dforge {

namespace {
using ordered_json = nlohmann::ordered_json;
}

Pauli pauli_mul(Pauli a, Pauli b) {
  return static_cast<Pauli>(static_cast<std::uint8_t>(a) ^ static_cast<std::uint8_t>(b));
}

std::string to_string(Pauli p) {
  switch (p) {
    case Pauli::I: return "I";
    case Pauli::X: return "X";
    case Pauli::Z: return "Z";
    case Pauli::XZ: return "XZ";
  }
  return "?";
}

Pauli pauli_from_string(const std::string& s) {
  if (s == "I") return Pauli::I;
  if (s == "X") return Pauli::X;
  if (s == "Z") return Pauli::Z;
  if (s == "XZ") return Pauli::XZ;
  throw std::invalid_argument("not a Pauli label: " + s);
}

void apply_pauli(StateVector& s, const QubitId& q, Pauli p) {
  if (p == Pauli::X || p == Pauli::XZ) apply_single(s, q, pauli_x());
  if (p == Pauli::Z || p == Pauli::XZ) apply_single(s, q, pauli_z());
}

void PauliFrame::on_cnot(const QubitId& control, const QubitId& target) {
  auto& c = bits.at(control);
  auto& t = bits.at(target);
  t.x = t.x != c.x;
  c.z = c.z != t.z;
}

void PauliFrame::flip(const QubitId& q, Pauli p) {
  auto& b = bits.at(q);
  if (p == Pauli::X || p == Pauli::XZ) b.x = !b.x;
  if (p == Pauli::Z || p == Pauli::XZ) b.z = !b.z;
}

int PauliFrame::on_measure(const QubitId& q, MeasurementBasis basis, int raw_bit) {
  auto it = bits.find(q);
  const bool adj = basis == MeasurementBasis::Z ? it->second.x : it->second.z;
  bits.erase(it);
  return raw_bit ^ static_cast<int>(adj);
}

PauliFrame propagate_frame(PauliFrame frame, const Operation& op) {
  if (const auto* x = std::get_if<CnotOp>(&op)) {
    frame.on_cnot(x->control, x->target);
  } else if (const auto* m = std::get_if<MeasureOp>(&op)) {
    frame.bits.erase(m->qubit);
  } else if (const auto* sm = std::get_if<SelectiveMeasureOp>(&op)) {
    frame.bits.erase(sm->qubit);
  } else if (const auto* in = std::get_if<InitOp>(&op)) {
    frame.on_init(in->qubit);
  }
  return frame;
}

std::string to_string(GadgetKind k) {
  switch (k) {
    case GadgetKind::S: return "s";
    case GadgetKind::Sdag: return "s_dag";
    case GadgetKind::V: return "v";
    case GadgetKind::Vdag: return "v_dag";
    case GadgetKind::T: return "t";
    case GadgetKind::Tdag: return "t_dag";
  }
  return "?";
}

AncillaAllocator::AncillaAllocator(const Circuit& c) : taken_(c.qubits) {}

QubitId AncillaAllocator::fresh() {
  for (;;) {
    QubitId name = "anc" + std::to_string(next_++);
    if (std::find(taken_.begin(), taken_.end(), name) == taken_.end()) {
      taken_.push_back(name);
      return name;
    }
  }
}

namespace {

/// Gadget structure without its correction table.
struct GadgetStructure {
  std::vector<Operation> ops;
  std::vector<QubitId> ancillas;
  QubitId output_wire;
  std::vector<std::size_t> measurement_offsets;
};

GadgetStructure s_structure(const QubitId& data, const QubitId& anc) {
  GadgetStructure g;
  g.ancillas = {anc};
  g.ops = {InitOp{anc, InitState::Y}, CnotOp{data, anc}, MeasureOp{anc, MeasurementBasis::Z}};
  g.output_wire = data;
  g.measurement_offsets = {2};
  return g;
}

GadgetStructure v_structure(const QubitId& data, const QubitId& anc) {
  GadgetStructure g;
  g.ancillas = {anc};
  g.ops = {InitOp{anc, InitState::Y}, CnotOp{anc, data}, MeasureOp{anc, MeasurementBasis::X}};
  g.output_wire = data;
  g.measurement_offsets = {2};
  return g;
}

GadgetStructure t_structure(const QubitId& data, const std::vector<QubitId>& anc,
                            bool dagger) {
  // Row order |A>, |0>, |Y>, |+>, |0>; the last |0> carries the output.
  // Selective bases per row: controller 0 selects the Pauli-only teleport
  // chain X,Z,Z,X, controller 1 the S-applying chain Z,X,X,Z that undoes the
  // wrong-direction pi/4 rotation. (The all-branch oracle enumeration pins
  // this assignment; the reverse one leaves a bare S on half the branches.)
  // The dagger variant swaps the columns.
  GadgetStructure g;
  g.ancillas = anc;
  const MeasurementBasis Z = MeasurementBasis::Z, X = MeasurementBasis::X;
  auto sel = [&](const QubitId& q, MeasurementBasis zero, MeasurementBasis one) {
    if (dagger) std::swap(zero, one);
    return SelectiveMeasureOp{q, data, zero, one};
  };
  g.ops = {
      InitOp{anc[0], InitState::A},    InitOp{anc[1], InitState::Zero},
      InitOp{anc[2], InitState::Y},    InitOp{anc[3], InitState::Plus},
      InitOp{anc[4], InitState::Zero},
      CnotOp{anc[0], data},            CnotOp{anc[0], anc[1]},
      CnotOp{anc[2], anc[0]},          CnotOp{anc[3], anc[1]},
      CnotOp{anc[2], anc[4]},          CnotOp{anc[3], anc[4]},
      MeasureOp{data, Z},
      sel(anc[0], X, Z),
      sel(anc[1], Z, X),
      sel(anc[2], Z, X),
      sel(anc[3], X, Z),
  };
  g.output_wire = anc[4];
  g.measurement_offsets = {11, 12, 13, 14, 15};
  return g;
}

GadgetStructure make_structure(GadgetKind k, const QubitId& data,
                               const std::vector<QubitId>& anc) {
  switch (k) {
    case GadgetKind::S:
    case GadgetKind::Sdag: return s_structure(data, anc[0]);
    case GadgetKind::V:
    case GadgetKind::Vdag: return v_structure(data, anc[0]);
    case GadgetKind::T: return t_structure(data, anc, false);
    case GadgetKind::Tdag: return t_structure(data, anc, true);
  }
  throw std::logic_error("unreachable");
}

std::size_t ancilla_count(GadgetKind k) {
  return (k == GadgetKind::T || k == GadgetKind::Tdag) ? 5 : 1;
}

/// Rotates every measured wire of a branch state back to |0>.
void canonicalize_measured(StateVector& s, const std::vector<OutcomeRecord>& outcomes) {
  for (const auto& rec : outcomes) {
    if (rec.basis == MeasurementBasis::X) apply_single(s, rec.qubit, gate_matrix(GateKind::H));
    if (rec.bit == 1) apply_single(s, rec.qubit, pauli_x());
  }
}

/// Derives the branch->Pauli table by full enumeration in the oracle: for a
/// handful of fixed pseudo-random inputs, every branch state must equal some
/// Pauli times the target rotation of the input, and the same Pauli must fit
/// every input. Throws if any branch has no consistent Pauli (which would
/// mean the gadget structure does not implement its rotation).
std::map<std::uint32_t, Pauli> derive_table(GadgetKind k) {
  const QubitId data = "psi";
  std::vector<QubitId> anc;
  for (std::size_t i = 0; i < ancilla_count(k); ++i) anc.push_back("g" + std::to_string(i));
  GadgetStructure st = make_structure(k, data, anc);

  Circuit c;
  c.qubits.push_back(data);
  for (const auto& a : anc) c.qubits.push_back(a);
  c.inputs = {data};
  c.ops = st.ops;
  c.outputs = {st.output_wire};
  validate_circuit(c);

  const Mat2 target = gadget_target(k);
  std::mt19937_64 rng(0x5eedf00dULL);
  std::map<std::uint32_t, Pauli> table;

  for (int sample = 0; sample < 3; ++sample) {
    StateVector in = random_single_qubit_state(rng, data);
    StateVector ref;
    ref.qubit_order = {st.output_wire};
    ref.amps = {target[0] * in.amps[0] + target[1] * in.amps[1],
                target[2] * in.amps[0] + target[3] * in.amps[1]};

    auto branches = measure_all_branches(c, {{data, in}});
    for (const auto& br : branches) {
      std::uint32_t key = 0;
      for (std::size_t i = 0; i < st.measurement_offsets.size(); ++i)
        for (const auto& rec : br.outcomes)
          if (rec.op_index == st.measurement_offsets[i]) key |= std::uint32_t(rec.bit) << i;

      StateVector canon = br.state;
      canonicalize_measured(canon, br.outcomes);
      StateVector out = extract_assuming_zero(canon, {st.output_wire});

      bool found = false;
      for (Pauli p : {Pauli::I, Pauli::X, Pauli::Z, Pauli::XZ}) {
        StateVector cand = ref;
        apply_pauli(cand, st.output_wire, p);
        if (fidelity(out, cand) >= 1.0 - kFidelityTol) {
          auto it = table.find(key);
          if (it == table.end())
            table.emplace(key, p);
          else if (it->second != p)
            throw std::logic_error("gadget " + to_string(k) +
                                   ": inconsistent Pauli across inputs for branch key " +
                                   std::to_string(key));
          found = true;
          break;
        }
      }
      if (!found)
        throw std::logic_error("gadget " + to_string(k) +
                               ": branch not Pauli-equivalent to target, key " +
                               std::to_string(key));
    }
  }
  return table;
}

}  // namespace

Mat2 gadget_target(GadgetKind k) {
  const double h = std::numbers::pi / 2.0, q = std::numbers::pi / 4.0;
  switch (k) {
    case GadgetKind::S: return rz_matrix(h);
    case GadgetKind::Sdag: return rz_matrix(-h);
    case GadgetKind::V: return rx_matrix(h);
    case GadgetKind::Vdag: return rx_matrix(-h);
    case GadgetKind::T: return rz_matrix(q);
    case GadgetKind::Tdag: return rz_matrix(-q);
  }
  throw std::logic_error("unreachable");
}

const std::map<std::uint32_t, Pauli>& gadget_table(GadgetKind k) {
  static std::mutex mu;
  static std::map<GadgetKind, std::map<std::uint32_t, Pauli>> cache;
  std::scoped_lock lock(mu);
  auto it = cache.find(k);
  if (it == cache.end()) it = cache.emplace(k, derive_table(k)).first;
  return it->second;
}

namespace {

GadgetExpansion finish(GadgetKind k, GadgetStructure&& st) {
  GadgetExpansion g;
  g.kind = k;
  g.new_ops = std::move(st.ops);
  g.ancillas = std::move(st.ancillas);
  g.output_wire = std::move(st.output_wire);
  g.measurement_offsets = std::move(st.measurement_offsets);
  g.correction_rule = gadget_table(k);
  return g;
}

}  // namespace

GadgetExpansion expand_s(const QubitId& data, AncillaAllocator& alloc, bool dagger) {
  const GadgetKind k = dagger ? GadgetKind::Sdag : GadgetKind::S;
  return finish(k, make_structure(k, data, {alloc.fresh()}));
}

GadgetExpansion expand_v(const QubitId& data, AncillaAllocator& alloc, bool dagger) {
  const GadgetKind k = dagger ? GadgetKind::Vdag : GadgetKind::V;
  return finish(k, make_structure(k, data, {alloc.fresh()}));
}

GadgetExpansion expand_t(const QubitId& data, AncillaAllocator& alloc, bool dagger) {
  const GadgetKind k = dagger ? GadgetKind::Tdag : GadgetKind::T;
  std::vector<QubitId> anc;
  for (int i = 0; i < 5; ++i) anc.push_back(alloc.fresh());
  return finish(k, make_structure(k, data, anc));
}

IcmExpansion expand_all(const Circuit& c) {
  for (const auto& op : c.ops)
    if (std::holds_alternative<GateOp>(op))
      throw CompileError(CompileError::Kind::NotNormalized,
                         "expand_all requires a normalized circuit (found a named gate)");

  IcmExpansion res;
  Circuit& out = res.circuit;
  out.qubits = c.qubits;
  out.inputs = c.inputs;

  AncillaAllocator alloc(c);
  std::map<QubitId, QubitId> alias;
  for (const auto& q : c.qubits) alias[q] = q;
  std::map<std::size_t, QubitId> measured_wire;  // original op index -> emitted wire

  std::size_t gadget_counter = 0;
  auto splice = [&](GadgetExpansion&& g) {
    const std::size_t base = out.ops.size();
    for (const auto& a : g.ancillas) out.qubits.push_back(a);
    for (auto& op : g.new_ops) out.ops.push_back(std::move(op));
    GadgetRule rule;
    rule.id = "g" + std::to_string(gadget_counter++);
    rule.kind = g.kind;
    for (std::size_t off : g.measurement_offsets) rule.measurement_ops.push_back(base + off);
    rule.output_wire = g.output_wire;
    rule.table = std::move(g.correction_rule);
    res.rules.gadgets.push_back(std::move(rule));
  };

  for (std::size_t i = 0; i < c.ops.size(); ++i) {
    const Operation& op = c.ops[i];
    if (const auto* in = std::get_if<InitOp>(&op)) {
      out.ops.push_back(InitOp{alias[in->qubit], in->state});
    } else if (const auto* r = std::get_if<RotationOp>(&op)) {
      const QubitId wire = alias[r->qubit];
      if (r->angle == kPi) {
        res.rules.flips.push_back(
            {out.ops.size(), wire, r->axis == Axis::Z ? Pauli::Z : Pauli::X});
      } else if (r->angle == kPiHalf || r->angle == kPiHalf.negated()) {
        const bool dag = r->angle.num < 0;
        splice(r->axis == Axis::Z ? expand_s(wire, alloc, dag) : expand_v(wire, alloc, dag));
      } else if (r->axis == Axis::Z &&
                 (r->angle == kPiQuarter || r->angle == kPiQuarter.negated())) {
        auto g = expand_t(wire, alloc, r->angle.num < 0);
        const QubitId new_wire = g.output_wire;
        splice(std::move(g));
        alias[r->qubit] = new_wire;
      } else {
        throw CompileError(CompileError::Kind::UnsupportedAngle,
                           "expand_all: unsupported rotation " + to_string(r->axis) + " " +
                               r->angle.str());
      }
    } else if (const auto* x = std::get_if<CnotOp>(&op)) {
      out.ops.push_back(CnotOp{alias[x->control], alias[x->target]});
    } else if (const auto* m = std::get_if<MeasureOp>(&op)) {
      measured_wire[i] = alias[m->qubit];
      out.ops.push_back(MeasureOp{alias[m->qubit], m->basis});
    } else if (const auto* sm = std::get_if<SelectiveMeasureOp>(&op)) {
      if (sm->controller_op == SIZE_MAX)
        throw std::invalid_argument("expand_all: circuit was not validated");
      SelectiveMeasureOp e = *sm;
      e.qubit = alias[sm->qubit];
      e.controller = measured_wire.at(sm->controller_op);
      e.controller_op = SIZE_MAX;
      out.ops.push_back(e);
    }
  }

  for (const auto& q : c.outputs) out.outputs.push_back(alias[q]);
  res.rules.aliases = std::move(alias);
  validate_circuit(out);
  assert(is_icm(out));
  return res;
}

std::string corrections_report(const TrackingRules& rules) {
  ordered_json doc;
  doc["version"] = 1;
  doc["aliases"] = ordered_json::object();
  for (const auto& [q, w] : rules.aliases) doc["aliases"][q] = w;
  doc["flips"] = ordered_json::array();
  for (const auto& f : rules.flips)
    doc["flips"].push_back(
        {{"at_op", f.at_op}, {"wire", f.wire}, {"pauli", to_string(f.pauli)}});
  doc["gadgets"] = ordered_json::array();
  for (const auto& g : rules.gadgets) {
    ordered_json jg;
    jg["id"] = g.id;
    jg["kind"] = to_string(g.kind);
    jg["output"] = g.output_wire;
    jg["measurement_ops"] = g.measurement_ops;
    ordered_json table = ordered_json::object();
    for (const auto& [key, p] : g.table) {
      std::string bits(g.measurement_ops.size(), '0');
      for (std::size_t i = 0; i < bits.size(); ++i)
        if (key & (std::uint32_t(1) << i)) bits[i] = '1';
      table[bits] = to_string(p);
    }
    jg["table"] = std::move(table);
    doc["gadgets"].push_back(std::move(jg));
  }
  return doc.dump(2) + "\n";
}

}  // namespace dforge
