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

#include "dforge/verify.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace dforge {

namespace {

struct SimNode {
  StateVector state;
  PauliFrame frame;
  std::vector<OutcomeRecord> raw;
  std::unordered_map<std::size_t, int> logical;  // op index -> logical bit
  double probability = 1.0;
  std::size_t next_op = 0;
};

/// Rotates the last measurement eigenstate of each dead wire back to |0>.
void canonicalize_dead(StateVector& s, const std::vector<OutcomeRecord>& raw,
                       const std::vector<QubitId>& live) {
  std::unordered_set<std::string> live_set(live.begin(), live.end());
  std::unordered_set<std::string> done;
  for (auto it = raw.rbegin(); it != raw.rend(); ++it) {
    if (live_set.count(it->qubit) || !done.insert(it->qubit).second) continue;
    if (it->basis == MeasurementBasis::X) apply_single(s, it->qubit, gate_matrix(GateKind::H));
    if (it->bit == 1) apply_single(s, it->qubit, pauli_x());
  }
}

}  // namespace

std::vector<QubitId> final_live_wires(const Circuit& c) {
  std::map<QubitId, bool> live;
  for (const auto& q : c.inputs) live[q] = true;
  for (const auto& op : c.ops) {
    if (const auto* in = std::get_if<InitOp>(&op)) live[in->qubit] = true;
    if (const auto* m = std::get_if<MeasureOp>(&op)) live[m->qubit] = false;
    if (const auto* sm = std::get_if<SelectiveMeasureOp>(&op)) live[sm->qubit] = false;
  }
  std::vector<QubitId> out;
  for (const auto& q : c.qubits)
    if (live.count(q) && live.at(q)) out.push_back(q);
  return out;
}

std::vector<CorrectedBranch> enumerate_with_corrections(
    const Circuit& icm, const TrackingRules& rules,
    const std::map<QubitId, StateVector>& inputs, CorrectionMode mode) {
  if (!is_icm(icm))
    throw CompileError(CompileError::Kind::NotIcm,
                       "enumerate_with_corrections requires an ICM circuit");

  // Index the rules for replay.
  std::unordered_map<std::size_t, std::vector<const FlipEvent*>> flips_at;
  for (const auto& f : rules.flips) flips_at[f.at_op].push_back(&f);
  std::unordered_map<std::size_t, const GadgetRule*> rule_firing_at;
  std::unordered_set<std::size_t> gadget_measures;
  for (const auto& g : rules.gadgets) {
    rule_firing_at[g.measurement_ops.back()] = &g;
    for (std::size_t m : g.measurement_ops) gadget_measures.insert(m);
  }

  const std::vector<QubitId> live = final_live_wires(icm);
  const bool deferred = mode == CorrectionMode::Deferred;

  auto apply_flips = [&](SimNode& n, std::size_t pos) {
    auto it = flips_at.find(pos);
    if (it == flips_at.end()) return;
    for (const FlipEvent* f : it->second) {
      if (deferred)
        n.frame.flip(f->wire, f->pauli);
      else
        apply_pauli(n.state, f->wire, f->pauli);
    }
  };

  std::vector<CorrectedBranch> result;
  std::vector<SimNode> stack;
  {
    SimNode root;
    root.state = initial_state(icm, inputs);
    for (const auto& q : icm.inputs) root.frame.on_init(q);
    stack.push_back(std::move(root));
  }

  while (!stack.empty()) {
    SimNode n = std::move(stack.back());
    stack.pop_back();

    bool dead = false;
    while (n.next_op < icm.ops.size()) {
      apply_flips(n, n.next_op);
      const Operation& op = icm.ops[n.next_op];
      const std::size_t idx = n.next_op;

      if (const auto* in = std::get_if<InitOp>(&op)) {
        for (auto it = n.raw.rbegin(); it != n.raw.rend(); ++it) {
          if (it->qubit == in->qubit) {
            if (it->basis == MeasurementBasis::X)
              apply_single(n.state, it->qubit, gate_matrix(GateKind::H));
            if (it->bit == 1) apply_single(n.state, it->qubit, pauli_x());
            break;
          }
        }
        apply_single(n.state, in->qubit, prep_matrix(in->state));
        n.frame.on_init(in->qubit);
        ++n.next_op;
      } else if (const auto* x = std::get_if<CnotOp>(&op)) {
        apply_cnot(n.state, x->control, x->target);
        n.frame.on_cnot(x->control, x->target);
        ++n.next_op;
      } else {
        QubitId q;
        MeasurementBasis basis;
        if (const auto* m = std::get_if<MeasureOp>(&op)) {
          q = m->qubit;
          basis = m->basis;
        } else {
          const auto& sm = std::get<SelectiveMeasureOp>(op);
          q = sm.qubit;
          basis = n.logical.at(sm.controller_op) == 0 ? sm.basis_if_zero : sm.basis_if_one;
        }

        auto fire_rule = [&](SimNode& node) {
          auto rit = rule_firing_at.find(idx);
          if (rit == rule_firing_at.end()) return;
          const GadgetRule& g = *rit->second;
          std::uint32_t key = 0;
          for (std::size_t i = 0; i < g.measurement_ops.size(); ++i)
            key |= std::uint32_t(node.logical.at(g.measurement_ops[i])) << i;
          const Pauli p = g.table.at(key);
          if (deferred)
            node.frame.flip(g.output_wire, p);
          else
            apply_pauli(node.state, g.output_wire, p);
        };

        auto [p0, s0] = project(n.state, q, basis, 0);
        auto [p1, s1] = project(n.state, q, basis, 1);
        if (p0 <= kAlgebraTol && p1 <= kAlgebraTol)
          throw OracleError(OracleError::Kind::ZeroProbabilityOnly,
                            "all branches vanish at op " + std::to_string(idx));
        if (p1 > kAlgebraTol) {
          SimNode fork = n;
          fork.state = std::move(s1);
          fork.probability *= p1;
          fork.raw.push_back({idx, q, basis, 1});
          fork.logical[idx] = fork.frame.on_measure(q, basis, 1);
          fire_rule(fork);
          fork.next_op = idx + 1;
          stack.push_back(std::move(fork));
        }
        if (p0 > kAlgebraTol) {
          n.state = std::move(s0);
          n.probability *= p0;
          n.raw.push_back({idx, q, basis, 0});
          n.logical[idx] = n.frame.on_measure(q, basis, 0);
          fire_rule(n);
          ++n.next_op;
        } else {
          dead = true;
          break;
        }
      }
    }
    if (dead) continue;
    apply_flips(n, icm.ops.size());

    CorrectedBranch b;
    if (deferred) {
      for (const auto& [wire, f] : n.frame.bits) {
        if (f.x) apply_single(n.state, wire, pauli_x());
        if (f.z) apply_single(n.state, wire, pauli_z());
      }
    }
    canonicalize_dead(n.state, n.raw, live);
    for (const auto& rec : n.raw) {
      const char bit = static_cast<char>('0' + n.logical.at(rec.op_index));
      b.logical_bits.push_back(bit);
      if (!gadget_measures.count(rec.op_index)) b.key.push_back(bit);
    }
    b.raw = std::move(n.raw);
    b.probability = n.probability;
    b.state = std::move(n.state);
    result.push_back(std::move(b));
  }

  std::sort(result.begin(), result.end(), [](const CorrectedBranch& a, const CorrectedBranch& b) {
    return a.logical_bits < b.logical_bits;
  });
  return result;
}

EquivalenceReport check_expansion_equivalence(const Circuit& original,
                                              const IcmExpansion& expansion,
                                              const std::map<QubitId, StateVector>& inputs,
                                              double tol) {
  EquivalenceReport report;

  // Reference branches of the original circuit, canonicalized and keyed by
  // their raw outcome bits in op order.
  struct Ref {
    double probability;
    StateVector state;
  };
  std::map<std::string, Ref> refs;
  const std::vector<QubitId> orig_live = final_live_wires(original);
  for (auto& br : measure_all_branches(original, inputs)) {
    std::string key;
    for (const auto& rec : br.outcomes) key.push_back(static_cast<char>('0' + rec.bit));
    StateVector s = std::move(br.state);
    canonicalize_dead(s, br.outcomes, orig_live);
    refs.emplace(std::move(key), Ref{br.probability, std::move(s)});
  }

  // Wires in the expansion that carry each original qubit at the end.
  std::vector<QubitId> keep;
  for (const auto& q : original.qubits) keep.push_back(expansion.rules.aliases.at(q));

  std::map<std::string, double> key_prob;
  auto corrected = enumerate_with_corrections(expansion.circuit, expansion.rules, inputs,
                                              CorrectionMode::Deferred);
  for (const auto& cb : corrected) {
    BranchRow row;
    for (const auto& rec : cb.raw) row.bits.push_back(static_cast<char>('0' + rec.bit));
    row.key = cb.key;
    row.probability = cb.probability;
    auto it = refs.find(cb.key);
    if (it == refs.end()) {
      row.pass = false;
      report.pass = false;
      report.message = "no original branch with key '" + cb.key + "'";
      report.rows.push_back(std::move(row));
      continue;
    }
    StateVector got = extract_assuming_zero(cb.state, keep);
    got.qubit_order = original.qubits;
    row.fidelity = fidelity(got, it->second.state);
    row.pass = row.fidelity >= 1.0 - tol;
    if (!row.pass) report.pass = false;
    key_prob[cb.key] += cb.probability;
    report.rows.push_back(std::move(row));
  }

  for (const auto& [key, ref] : refs) {
    auto it = key_prob.find(key);
    const double got = it == key_prob.end() ? 0.0 : it->second;
    if (std::abs(got - ref.probability) > tol) {
      report.pass = false;
      report.message = "probability mismatch on key '" + key + "'";
    }
  }
  return report;
}

EquivalenceReport mutual_pauli_equivalence(const Circuit& icm,
                                           const std::map<QubitId, StateVector>& inputs,
                                           double tol) {
  if (!is_icm(icm))
    throw CompileError(CompileError::Kind::NotIcm, "mutual check requires an ICM circuit");
  EquivalenceReport report;
  const std::vector<QubitId> live = final_live_wires(icm);
  if (live.size() > 8) {
    report.pass = false;
    report.message = "too many surviving wires for Pauli search";
    return report;
  }

  auto branches = measure_all_branches(icm, inputs);
  if (branches.empty()) return report;
  std::vector<StateVector> canon;
  canon.reserve(branches.size());
  for (auto& br : branches) {
    StateVector s = br.state;
    canonicalize_dead(s, br.outcomes, live);
    canon.push_back(std::move(s));
  }

  const std::size_t combos = std::size_t{1} << (2 * live.size());
  for (std::size_t bi = 0; bi < branches.size(); ++bi) {
    BranchRow row;
    for (const auto& rec : branches[bi].outcomes)
      row.bits.push_back(static_cast<char>('0' + rec.bit));
    row.probability = branches[bi].probability;
    double best = 0.0;
    for (std::size_t combo = 0; combo < combos; ++combo) {
      StateVector s = canon[bi];
      for (std::size_t w = 0; w < live.size(); ++w)
        apply_pauli(s, live[w], static_cast<Pauli>((combo >> (2 * w)) & 3));
      best = std::max(best, fidelity(s, canon[0]));
      if (best >= 1.0 - tol) break;
    }
    row.fidelity = best;
    row.pass = best >= 1.0 - tol;
    if (!row.pass) {
      report.pass = false;
      if (report.message.empty())
        report.message = "branch " + std::to_string(bi) + " not Pauli-equivalent";
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace dforge
