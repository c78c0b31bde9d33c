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

#include <array>
#include <complex>
#include <cstddef>
#include <map>
#include <random>
#include <vector>

#include "dforge/circuit.hpp"

namespace dforge {

// Tolerances used throughout: algebraic identities get double-precision
// headroom, fidelity/branch checks a little more slack for accumulation.
inline constexpr double kAlgebraTol = 1e-12;
inline constexpr double kFidelityTol = 1e-10;

/// Hard cap: this is a desk-scale oracle, not a production simulator.
inline constexpr std::size_t kMaxOracleQubits = 20;

using Complex = std::complex<double>;
using Mat2 = std::array<Complex, 4>;  // row-major [m00 m01; m10 m11]

/// Dense state over named qubits. Convention (documented and tested):
/// qubit_order position k maps to bit k of the amplitude index,
/// little-endian, so amps[i] multiplies |... b1 b0> with b_k = (i >> k) & 1.
struct StateVector {
  std::vector<Complex> amps;
  std::vector<QubitId> qubit_order;

  [[nodiscard]] std::size_t num_qubits() const { return qubit_order.size(); }
  [[nodiscard]] std::size_t index_of(const QubitId& q) const;
  [[nodiscard]] double norm_sq() const;
};

/// One outcome recorded during branch enumeration.
struct OutcomeRecord {
  std::size_t op_index;
  QubitId qubit;
  MeasurementBasis basis;
  int bit;  // 0 = +1 eigenstate (|0> for Z, |+> for X)
};

struct Branch {
  std::vector<OutcomeRecord> outcomes;
  double probability = 1.0;
  StateVector state;

  /// Latest recorded outcome for a qubit (convenience for single-episode circuits).
  [[nodiscard]] int outcome_of(const QubitId& q) const;
};

// --- elementary state constructors -------------------------------------

/// |0> = (1,0); |+> = (1,1)/sqrt2; |Y> = (1,i)/sqrt2; |A> = (1,e^{i pi/4})/sqrt2.
[[nodiscard]] StateVector init_state(InitState kind);

[[nodiscard]] StateVector zero_state(const std::vector<QubitId>& order);
[[nodiscard]] StateVector tensor(const StateVector& a, const StateVector& b);

/// Haar-ish random single-qubit state (two complex gaussians, normalised).
[[nodiscard]] StateVector random_single_qubit_state(std::mt19937_64& rng,
                                                    const QubitId& name = "q");

// --- gate matrices -------------------------------------------------------

[[nodiscard]] Mat2 rz_matrix(double theta);  // diag(1, e^{i theta})
[[nodiscard]] Mat2 rx_matrix(double theta);  // cos(t/2) I - i sin(t/2) X
[[nodiscard]] Mat2 gate_matrix(GateKind g);
[[nodiscard]] Mat2 pauli_x();
[[nodiscard]] Mat2 pauli_z();
[[nodiscard]] Mat2 mat_mul(const Mat2& a, const Mat2& b);

/// Unitary whose first column is the given (normalised) single-qubit state;
/// used to prepare a wire known to be in |0>.
[[nodiscard]] Mat2 prep_matrix(InitState kind);

// --- state evolution -----------------------------------------------------

void apply_single(StateVector& s, const QubitId& q, const Mat2& m);
void apply_cnot(StateVector& s, const QubitId& control, const QubitId& target);

/// Applies a unitary circuit operation (Gate, Rotation or Cnot).
void apply(StateVector& s, const Operation& op);

/// (probability, post-measurement state renormalised). bit 0 projects onto
/// the +1 eigenstate. The returned state keeps the measured wire in the
/// outcome eigenstate.
[[nodiscard]] std::pair<double, StateVector> project(const StateVector& s, const QubitId& q,
                                                     MeasurementBasis basis, int bit);

// --- comparisons and reshaping -------------------------------------------

/// True iff |<a|b>| >= 1 - tol. Throws DimensionMismatch on size mismatch.
[[nodiscard]] bool equal_up_to_phase(const StateVector& a, const StateVector& b, double tol);

/// |<a|b>| (states must share dimension; qubit order of b is permuted to a's).
[[nodiscard]] double fidelity(const StateVector& a, const StateVector& b);

[[nodiscard]] StateVector permute_qubits(const StateVector& s,
                                         const std::vector<QubitId>& new_order);

/// Drops wires that are verified to be in |0> (within tol); the remaining
/// wires are returned in `keep` order.
[[nodiscard]] StateVector extract_assuming_zero(const StateVector& s,
                                                const std::vector<QubitId>& keep,
                                                double tol = 1e-9);

// --- whole-circuit semantics ----------------------------------------------

/// Joint initial state for a circuit: declared inputs take their entry from
/// `inputs` (required), every other wire starts as the |0> placeholder that a
/// later Init op replaces. Qubit order = declaration order.
[[nodiscard]] StateVector initial_state(const Circuit& c,
                                        const std::map<QubitId, StateVector>& inputs);

/// Depth-first enumeration of every measurement-outcome assignment with
/// probability above kAlgebraTol. Selective bases resolve against the
/// recorded outcome of the bound controller op. Branch order is
/// deterministic (outcome 0 explored first). Re-inits on measured wires are
/// supported (the wire is rotated back to |0> and re-prepared).
[[nodiscard]] std::vector<Branch> measure_all_branches(
    const Circuit& c, const std::map<QubitId, StateVector>& inputs);

/// Runs a measurement-free circuit to its final state.
[[nodiscard]] StateVector run_unitary(const Circuit& c,
                                      const std::map<QubitId, StateVector>& inputs);

/// Branch enumeration as a JSON document (outcome records and probabilities,
/// states omitted) — used to freeze enumeration results into fixtures.
[[nodiscard]] std::string branch_table_json(const std::vector<Branch>& branches);

}  // namespace dforge
