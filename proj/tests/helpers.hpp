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

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "dforge/circuit.hpp"
#include "dforge/icm.hpp"
#include "dforge/schedule.hpp"
#include "dforge/state_oracle.hpp"

#ifndef DFORGE_FIXTURE_DIR
#define DFORGE_FIXTURE_DIR "tests/fixtures"
#endif

namespace dforge::testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(DFORGE_FIXTURE_DIR) + "/" + name;
}

/// Random unitary Clifford+T circuit: every qubit initialised, no
/// measurements. `for_expansion` avoids Rx(pi/4), which has no gadget.
inline Circuit random_unitary_circuit(std::mt19937_64& rng, std::size_t max_qubits = 4,
                                      std::size_t max_ops = 8, bool for_expansion = true) {
  std::uniform_int_distribution<std::size_t> nq(1, max_qubits);
  const std::size_t n = nq(rng);
  Circuit c;
  for (std::size_t i = 0; i < n; ++i) c.qubits.push_back("q" + std::to_string(i));
  std::uniform_int_distribution<int> state(0, 3);
  for (const auto& q : c.qubits)
    c.ops.push_back(InitOp{q, static_cast<InitState>(state(rng))});

  std::uniform_int_distribution<std::size_t> ops_n(1, max_ops);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_int_distribution<int> kind(0, 7);
  const std::size_t m = ops_n(rng);
  for (std::size_t i = 0; i < m; ++i) {
    const QubitId q = c.qubits[pick(rng)];
    switch (kind(rng)) {
      case 0: c.ops.push_back(GateOp{GateKind::H, q}); break;
      case 1: c.ops.push_back(GateOp{GateKind::S, q}); break;
      case 2: c.ops.push_back(GateOp{GateKind::V, q}); break;
      case 3: c.ops.push_back(GateOp{GateKind::T, q}); break;
      case 4: c.ops.push_back(RotationOp{Axis::Z, PiRational(rng() % 2 ? 1 : -1, 4), q}); break;
      case 5:
        c.ops.push_back(RotationOp{rng() % 2 && !for_expansion ? Axis::X : Axis::Z,
                                   PiRational(1, 1), q});
        break;
      case 6: {
        c.ops.push_back(RotationOp{rng() % 2 ? Axis::X : Axis::Z,
                                   PiRational(rng() % 2 ? 1 : -1, 2), q});
        break;
      }
      default: {
        if (n >= 2) {
          QubitId t = c.qubits[pick(rng)];
          while (t == q) t = c.qubits[pick(rng)];
          c.ops.push_back(CnotOp{q, t});
        } else {
          c.ops.push_back(GateOp{GateKind::H, q});
        }
        break;
      }
    }
  }
  for (const auto& q : c.qubits) c.outputs.push_back(q);
  validate_circuit(c);
  return c;
}

/// Random valid ICM circuit. Keeps the measurement count small enough for
/// exhaustive branch enumeration. An initial `qubit` may be declared as a
/// circuit input.
inline Circuit random_icm_circuit(std::mt19937_64& rng, std::size_t max_qubits = 6,
                                  std::size_t max_measurements = 5, bool allow_inputs = true,
                                  bool allow_smeasure = true) {
  std::uniform_int_distribution<std::size_t> nq(2, max_qubits);
  const std::size_t n = nq(rng);
  Circuit c;
  std::vector<QubitId> live;
  std::vector<QubitId> dormant;
  for (std::size_t i = 0; i < n; ++i) {
    QubitId q = "q" + std::to_string(i);
    c.qubits.push_back(q);
    if (allow_inputs && rng() % 4 == 0) {
      c.inputs.push_back(q);
      live.push_back(q);
    } else {
      dormant.push_back(q);
    }
  }

  std::vector<std::size_t> plain_measures;  // op indices with MeasureOp
  std::size_t measures = 0;
  std::uniform_int_distribution<int> state(0, 3);
  const std::size_t total_ops = 4 + rng() % (3 * n);
  for (std::size_t i = 0; i < total_ops; ++i) {
    const int roll = static_cast<int>(rng() % 10);
    if (!dormant.empty() && (roll < 4 || live.empty())) {
      const std::size_t j = rng() % dormant.size();
      QubitId q = dormant[j];
      dormant.erase(dormant.begin() + static_cast<long>(j));
      c.ops.push_back(InitOp{q, static_cast<InitState>(state(rng))});
      live.push_back(q);
    } else if (live.size() >= 2 && roll < 7) {
      const std::size_t a = rng() % live.size();
      std::size_t b = rng() % live.size();
      while (b == a) b = rng() % live.size();
      c.ops.push_back(CnotOp{live[a], live[b]});
    } else if (!live.empty() && measures < max_measurements) {
      const std::size_t j = rng() % live.size();
      QubitId q = live[j];
      live.erase(live.begin() + static_cast<long>(j));
      const MeasurementBasis b0 = rng() % 2 ? MeasurementBasis::Z : MeasurementBasis::X;
      if (allow_smeasure && !plain_measures.empty() && rng() % 3 == 0) {
        const MeasurementBasis b1 = rng() % 2 ? MeasurementBasis::Z : MeasurementBasis::X;
        const std::size_t ctrl_op = plain_measures[rng() % plain_measures.size()];
        const auto& ctrl = std::get<MeasureOp>(c.ops[ctrl_op]).qubit;
        c.ops.push_back(SelectiveMeasureOp{q, ctrl, b0, b1});
      } else {
        plain_measures.push_back(c.ops.size());
        c.ops.push_back(MeasureOp{q, b0});
      }
      ++measures;
    }
  }
  for (const auto& q : live) c.outputs.push_back(q);
  validate_circuit(c);
  return c;
}

/// Random tracking rules that are well formed for `c`: flips on live wires,
/// single-measurement gadget rules with distinct trigger ops.
inline TrackingRules random_rules(std::mt19937_64& rng, const Circuit& c) {
  TrackingRules rules;
  // liveness before each op index
  std::vector<std::vector<QubitId>> live_at(c.ops.size() + 1);
  {
    std::vector<QubitId> live(c.inputs.begin(), c.inputs.end());
    for (std::size_t i = 0; i <= c.ops.size(); ++i) {
      live_at[i] = live;
      if (i == c.ops.size()) break;
      if (const auto* in = std::get_if<InitOp>(&c.ops[i])) live.push_back(in->qubit);
      if (const auto* m = std::get_if<MeasureOp>(&c.ops[i]))
        live.erase(std::remove(live.begin(), live.end(), m->qubit), live.end());
      if (const auto* sm = std::get_if<SelectiveMeasureOp>(&c.ops[i]))
        live.erase(std::remove(live.begin(), live.end(), sm->qubit), live.end());
    }
  }

  const std::size_t n_flips = rng() % 4;
  for (std::size_t i = 0; i < n_flips; ++i) {
    const std::size_t at = rng() % (c.ops.size() + 1);
    if (live_at[at].empty()) continue;
    rules.flips.push_back({at, live_at[at][rng() % live_at[at].size()],
                           static_cast<Pauli>(1 + rng() % 3)});
  }

  std::size_t gid = 0;
  for (std::size_t i = 0; i < c.ops.size(); ++i) {
    const bool is_meas = std::holds_alternative<MeasureOp>(c.ops[i]) ||
                         std::holds_alternative<SelectiveMeasureOp>(c.ops[i]);
    if (!is_meas || rng() % 2) continue;
    if (live_at[i + 1].empty()) continue;
    GadgetRule g;
    g.id = "r" + std::to_string(gid++);
    g.kind = GadgetKind::S;  // label only
    g.measurement_ops = {i};
    g.output_wire = live_at[i + 1][rng() % live_at[i + 1].size()];
    g.table[0] = static_cast<Pauli>(rng() % 4);
    g.table[1] = static_cast<Pauli>(rng() % 4);
    rules.gadgets.push_back(std::move(g));
  }
  return rules;
}

/// Circuit-realizable random lifetimes: distinct interior indices, optional
/// shared birth-0 (inputs) and death-at-end (outputs).
inline std::vector<Lifetime> random_lifetimes(std::mt19937_64& rng, std::size_t max_n = 50) {
  const std::size_t n = 1 + rng() % max_n;
  const std::size_t len = 2 * n + 2;
  std::vector<std::size_t> pool(2 * n);
  {
    std::vector<std::size_t> all(len);
    for (std::size_t i = 0; i < len; ++i) all[i] = i + 1;  // interior indices
    std::shuffle(all.begin(), all.end(), rng);
    pool.assign(all.begin(), all.begin() + static_cast<long>(2 * n));
  }
  std::vector<Lifetime> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t a = pool[2 * i], b = pool[2 * i + 1];
    if (a > b) std::swap(a, b);
    Lifetime l{"q" + std::to_string(i), a, b};
    if (rng() % 8 == 0) l.birth = 0;           // input-like
    if (rng() % 8 == 0) l.death = len + 2;     // output-like
    if (l.birth >= l.death) l.death = l.birth + 1;
    out.push_back(l);
  }
  return out;
}

inline std::map<QubitId, StateVector> random_inputs(const Circuit& c, std::mt19937_64& rng) {
  std::map<QubitId, StateVector> inputs;
  for (const auto& q : c.inputs) inputs[q] = random_single_qubit_state(rng, q);
  return inputs;
}

}  // namespace dforge::testing
