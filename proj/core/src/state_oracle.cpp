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

#include "dforge/state_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

namespace dforge {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_capacity(std::size_t n) {
  if (n > kMaxOracleQubits)
    throw OracleError(OracleError::Kind::CapacityExceeded,
                      "oracle capacity exceeded: " + std::to_string(n) + " qubits (cap " +
                          std::to_string(kMaxOracleQubits) + ")");
}

}  // namespace

std::size_t StateVector::index_of(const QubitId& q) const {
  for (std::size_t k = 0; k < qubit_order.size(); ++k)
    if (qubit_order[k] == q) return k;
  throw OracleError(OracleError::Kind::UnknownQubit, "qubit '" + q + "' not in state");
}

double StateVector::norm_sq() const {
  double n = 0;
  for (const auto& a : amps) n += std::norm(a);
  return n;
}

int Branch::outcome_of(const QubitId& q) const {
  for (auto it = outcomes.rbegin(); it != outcomes.rend(); ++it)
    if (it->qubit == q) return it->bit;
  throw OracleError(OracleError::Kind::UnknownQubit, "no outcome recorded for '" + q + "'");
}

StateVector init_state(InitState kind) {
  const double r = 1.0 / std::sqrt(2.0);
  StateVector s;
  s.qubit_order = {"q"};
  switch (kind) {
    case InitState::Zero: s.amps = {1.0, 0.0}; break;
    case InitState::Plus: s.amps = {r, r}; break;
    case InitState::Y: s.amps = {r, r * kI}; break;
    case InitState::A: s.amps = {r, r * std::exp(kI * (std::numbers::pi / 4.0))}; break;
  }
  return s;
}

StateVector zero_state(const std::vector<QubitId>& order) {
  check_capacity(order.size());
  StateVector s;
  s.qubit_order = order;
  s.amps.assign(std::size_t{1} << order.size(), 0.0);
  s.amps[0] = 1.0;
  return s;
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  check_capacity(a.num_qubits() + b.num_qubits());
  StateVector s;
  s.qubit_order = a.qubit_order;
  s.qubit_order.insert(s.qubit_order.end(), b.qubit_order.begin(), b.qubit_order.end());
  s.amps.resize(a.amps.size() * b.amps.size());
  for (std::size_t j = 0; j < b.amps.size(); ++j)
    for (std::size_t i = 0; i < a.amps.size(); ++i)
      s.amps[(j << a.num_qubits()) | i] = a.amps[i] * b.amps[j];
  return s;
}

StateVector random_single_qubit_state(std::mt19937_64& rng, const QubitId& name) {
  std::normal_distribution<double> g(0.0, 1.0);
  Complex a{g(rng), g(rng)}, b{g(rng), g(rng)};
  double n = std::sqrt(std::norm(a) + std::norm(b));
  StateVector s;
  s.qubit_order = {name};
  s.amps = {a / n, b / n};
  return s;
}

Mat2 rz_matrix(double theta) { return {1.0, 0.0, 0.0, std::exp(kI * theta)}; }

Mat2 rx_matrix(double theta) {
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  return {Complex{c, 0}, -kI * s, -kI * s, Complex{c, 0}};
}

Mat2 pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }
Mat2 pauli_z() { return {1.0, 0.0, 0.0, -1.0}; }

Mat2 mat_mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Mat2 gate_matrix(GateKind g) {
  const double h = std::numbers::pi / 2.0;
  switch (g) {
    case GateKind::S: return rz_matrix(h);
    case GateKind::V: return rx_matrix(h);
    case GateKind::T: return rz_matrix(std::numbers::pi / 4.0);
    case GateKind::H: return mat_mul(rz_matrix(h), mat_mul(rx_matrix(h), rz_matrix(h)));
  }
  return {1.0, 0.0, 0.0, 1.0};
}

Mat2 prep_matrix(InitState kind) {
  StateVector col = init_state(kind);
  // unitary with first column equal to the target state
  return {col.amps[0], -std::conj(col.amps[1]), col.amps[1], std::conj(col.amps[0])};
}

void apply_single(StateVector& s, const QubitId& q, const Mat2& m) {
  const std::size_t k = s.index_of(q);
  const std::size_t stride = std::size_t{1} << k;
  for (std::size_t base = 0; base < s.amps.size(); base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const Complex a0 = s.amps[i], a1 = s.amps[i + stride];
      s.amps[i] = m[0] * a0 + m[1] * a1;
      s.amps[i + stride] = m[2] * a0 + m[3] * a1;
    }
  }
}

void apply_cnot(StateVector& s, const QubitId& control, const QubitId& target) {
  const std::size_t kc = s.index_of(control), kt = s.index_of(target);
  const std::size_t mc = std::size_t{1} << kc, mt = std::size_t{1} << kt;
  for (std::size_t i = 0; i < s.amps.size(); ++i)
    if ((i & mc) && !(i & mt)) std::swap(s.amps[i], s.amps[i | mt]);
}

void apply(StateVector& s, const Operation& op) {
  if (const auto* r = std::get_if<RotationOp>(&op)) {
    apply_single(s, r->qubit,
                 r->axis == Axis::Z ? rz_matrix(r->angle.radians())
                                    : rx_matrix(r->angle.radians()));
  } else if (const auto* g = std::get_if<GateOp>(&op)) {
    apply_single(s, g->qubit, gate_matrix(g->kind));
  } else if (const auto* x = std::get_if<CnotOp>(&op)) {
    apply_cnot(s, x->control, x->target);
  } else {
    throw OracleError(OracleError::Kind::UnknownQubit, "apply: operation is not unitary");
  }
}

std::pair<double, StateVector> project(const StateVector& s, const QubitId& q,
                                       MeasurementBasis basis, int bit) {
  StateVector out = s;
  const std::size_t k = out.index_of(q);
  const std::size_t stride = std::size_t{1} << k;
  if (basis == MeasurementBasis::Z) {
    for (std::size_t i = 0; i < out.amps.size(); ++i)
      if (static_cast<int>((i >> k) & 1) != bit) out.amps[i] = 0.0;
  } else {
    const double sign = bit == 0 ? 1.0 : -1.0;
    for (std::size_t base = 0; base < out.amps.size(); base += 2 * stride) {
      for (std::size_t i = base; i < base + stride; ++i) {
        const Complex v = 0.5 * (out.amps[i] + sign * out.amps[i + stride]);
        out.amps[i] = v;
        out.amps[i + stride] = sign * v;
      }
    }
  }
  const double p = out.norm_sq();
  if (p > 0) {
    const double inv = 1.0 / std::sqrt(p);
    for (auto& a : out.amps) a *= inv;
  }
  return {p, std::move(out)};
}

bool equal_up_to_phase(const StateVector& a, const StateVector& b, double tol) {
  if (a.amps.size() != b.amps.size())
    throw OracleError(OracleError::Kind::DimensionMismatch,
                      "state dimension mismatch: " + std::to_string(a.amps.size()) + " vs " +
                          std::to_string(b.amps.size()));
  return fidelity(a, b) >= 1.0 - tol;
}

double fidelity(const StateVector& a, const StateVector& b) {
  const StateVector* bp = &b;
  StateVector tmp;
  if (a.qubit_order != b.qubit_order) {
    tmp = permute_qubits(b, a.qubit_order);
    bp = &tmp;
  }
  Complex ip = 0.0;
  for (std::size_t i = 0; i < a.amps.size(); ++i) ip += std::conj(a.amps[i]) * bp->amps[i];
  return std::abs(ip);
}

StateVector permute_qubits(const StateVector& s, const std::vector<QubitId>& new_order) {
  if (new_order.size() != s.num_qubits())
    throw OracleError(OracleError::Kind::DimensionMismatch, "permute: qubit count mismatch");
  std::vector<std::size_t> src_bit(new_order.size());
  for (std::size_t k = 0; k < new_order.size(); ++k) src_bit[k] = s.index_of(new_order[k]);
  StateVector out;
  out.qubit_order = new_order;
  out.amps.assign(s.amps.size(), 0.0);
  for (std::size_t i = 0; i < s.amps.size(); ++i) {
    std::size_t j = 0;
    for (std::size_t k = 0; k < new_order.size(); ++k) j |= ((i >> src_bit[k]) & 1) << k;
    out.amps[j] = s.amps[i];
  }
  return out;
}

StateVector extract_assuming_zero(const StateVector& s, const std::vector<QubitId>& keep,
                                  double tol) {
  std::vector<QubitId> order = keep;
  for (const auto& q : s.qubit_order)
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) order.push_back(q);
  StateVector perm = permute_qubits(s, order);
  const std::size_t dim = std::size_t{1} << keep.size();
  double dropped = 0.0;
  for (std::size_t i = dim; i < perm.amps.size(); ++i) dropped += std::norm(perm.amps[i]);
  if (dropped > tol)
    throw OracleError(OracleError::Kind::DimensionMismatch,
                      "extract: dropped wires are not in |0> (weight " +
                          std::to_string(dropped) + ")");
  StateVector out;
  out.qubit_order = keep;
  out.amps.assign(perm.amps.begin(), perm.amps.begin() + dim);
  const double n = out.norm_sq();
  if (n > 0) {
    const double inv = 1.0 / std::sqrt(n);
    for (auto& a : out.amps) a *= inv;
  }
  return out;
}

StateVector initial_state(const Circuit& c, const std::map<QubitId, StateVector>& inputs) {
  check_capacity(c.qubits.size());
  StateVector s = zero_state(c.qubits);
  for (const auto& q : c.inputs) {
    auto it = inputs.find(q);
    if (it == inputs.end())
      throw OracleError(OracleError::Kind::UnknownQubit,
                        "no input state supplied for input qubit '" + q + "'");
    const StateVector& in = it->second;
    Mat2 prep{in.amps[0], -std::conj(in.amps[1]), in.amps[1], std::conj(in.amps[0])};
    apply_single(s, q, prep);
  }
  return s;
}

namespace {

struct EnumFrame {
  StateVector state;
  double probability;
  std::vector<OutcomeRecord> outcomes;
  std::size_t next_op;
};

/// Rotates a measured wire (in the eigenstate for `rec`) back to |0>.
void uncompute_outcome(StateVector& s, const OutcomeRecord& rec) {
  if (rec.basis == MeasurementBasis::X) apply_single(s, rec.qubit, gate_matrix(GateKind::H));
  if (rec.bit == 1) apply_single(s, rec.qubit, pauli_x());
}

}  // namespace

std::vector<Branch> measure_all_branches(const Circuit& c,
                                         const std::map<QubitId, StateVector>& inputs) {
  std::vector<Branch> result;
  std::vector<EnumFrame> stack;
  stack.push_back({initial_state(c, inputs), 1.0, {}, 0});

  while (!stack.empty()) {
    EnumFrame f = std::move(stack.back());
    stack.pop_back();

    bool dead = false;
    while (f.next_op < c.ops.size()) {
      const Operation& op = c.ops[f.next_op];
      const std::size_t idx = f.next_op;
      if (const auto* in = std::get_if<InitOp>(&op)) {
        // A re-init on a measured wire: rotate the eigenstate back to |0> first.
        for (auto it = f.outcomes.rbegin(); it != f.outcomes.rend(); ++it) {
          if (it->qubit == in->qubit) {
            uncompute_outcome(f.state, *it);
            break;
          }
        }
        apply_single(f.state, in->qubit, prep_matrix(in->state));
        ++f.next_op;
      } else if (std::holds_alternative<MeasureOp>(op) ||
                 std::holds_alternative<SelectiveMeasureOp>(op)) {
        QubitId q;
        MeasurementBasis basis;
        if (const auto* m = std::get_if<MeasureOp>(&op)) {
          q = m->qubit;
          basis = m->basis;
        } else {
          const auto& sm = std::get<SelectiveMeasureOp>(op);
          q = sm.qubit;
          int ctrl_bit = -1;
          for (const auto& rec : f.outcomes)
            if (rec.op_index == sm.controller_op) ctrl_bit = rec.bit;
          if (ctrl_bit < 0)
            throw OracleError(OracleError::Kind::UnknownQubit,
                              "selective measurement controller unresolved");
          basis = ctrl_bit == 0 ? sm.basis_if_zero : sm.basis_if_one;
        }
        auto [p0, s0] = project(f.state, q, basis, 0);
        auto [p1, s1] = project(f.state, q, basis, 1);
        if (p0 <= kAlgebraTol && p1 <= kAlgebraTol)
          throw OracleError(OracleError::Kind::ZeroProbabilityOnly,
                            "all branches vanish at op " + std::to_string(idx));
        if (p1 > kAlgebraTol) {
          EnumFrame g{std::move(s1), f.probability * p1, f.outcomes, idx + 1};
          g.outcomes.push_back({idx, q, basis, 1});
          stack.push_back(std::move(g));
        }
        if (p0 > kAlgebraTol) {
          f.state = std::move(s0);
          f.probability *= p0;
          f.outcomes.push_back({idx, q, basis, 0});
          ++f.next_op;
        } else {
          dead = true;
          break;
        }
      } else {
        apply(f.state, op);
        ++f.next_op;
      }
    }
    if (!dead) result.push_back({std::move(f.outcomes), f.probability, std::move(f.state)});
  }

  // Deterministic order: lexicographic in outcome bits along op order.
  std::sort(result.begin(), result.end(), [](const Branch& a, const Branch& b) {
    const std::size_t n = std::min(a.outcomes.size(), b.outcomes.size());
    for (std::size_t i = 0; i < n; ++i)
      if (a.outcomes[i].bit != b.outcomes[i].bit) return a.outcomes[i].bit < b.outcomes[i].bit;
    return a.outcomes.size() < b.outcomes.size();
  });
  return result;
}

StateVector run_unitary(const Circuit& c, const std::map<QubitId, StateVector>& inputs) {
  StateVector s = initial_state(c, inputs);
  for (const auto& op : c.ops) {
    if (const auto* in = std::get_if<InitOp>(&op)) {
      apply_single(s, in->qubit, prep_matrix(in->state));
    } else if (std::holds_alternative<MeasureOp>(op) ||
               std::holds_alternative<SelectiveMeasureOp>(op)) {
      throw OracleError(OracleError::Kind::UnknownQubit,
                        "run_unitary: circuit contains measurements");
    } else {
      apply(s, op);
    }
  }
  return s;
}

std::string branch_table_json(const std::vector<Branch>& branches) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& br : branches) {
    nlohmann::ordered_json jb;
    jb["outcomes"] = nlohmann::ordered_json::array();
    for (const auto& rec : br.outcomes)
      jb["outcomes"].push_back({{"op", rec.op_index},
                                {"qubit", rec.qubit},
                                {"basis", to_string(rec.basis)},
                                {"bit", rec.bit}});
    jb["probability"] = br.probability;
    doc.push_back(std::move(jb));
  }
  return doc.dump(2) + "\n";
}

}  // namespace dforge
