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
#include <vector>

#include "dforge/circuit.hpp"
#include "dforge/geometry.hpp"

namespace dforge {

/// Distillation boxes are opaque heralded units: a success probability and a
/// volume. Probabilities and dimensions are configuration, not constants of
/// nature.
struct DistillationSpec {
  MagicKind kind = MagicKind::A;
  double success_prob = 0.9;
  Point3 box_dims{8, 6, 6};
};

struct DistillationPlan {
  std::map<MagicKind, std::size_t> required;
  std::map<MagicKind, std::size_t> boxes;
  double reliability_target = 0.999;
  std::map<MagicKind, double> achieved;
};

/// Counts of |A> and |Y> initialisations in an ICM circuit.
[[nodiscard]] std::map<MagicKind, std::size_t> count_required(const Circuit& icm);

/// P[Binomial(n, p) >= required], computed through the complement so the
/// few lower-tail terms stay numerically exact for small `required`.
[[nodiscard]] double success_tail(std::size_t n, double p, std::size_t required);

/// Minimal n with P[Binomial(n, success_prob) >= required] >= target
/// (batch model: all boxes run, successes are heralded afterwards).
/// 0 when required is 0; TargetUnreachable past `cap`. Comparisons carry a
/// 1e-12 slack so exact-boundary cases (1 - 0.1^3 vs 0.999) resolve the way
/// the arithmetic says they should.
[[nodiscard]] std::size_t boxes_needed(std::size_t required, const DistillationSpec& spec,
                                       double target, std::size_t cap = 4096);

/// Shelf placement below the circuit: the A row's top face sits at y = -4,
/// the Y row below it, each row filled along x with a 2-cell gap. Output
/// pins sit on the circuit-facing face, one cell outside the volume.
[[nodiscard]] std::vector<BoxPlacement> place_boxes(
    const DistillationPlan& plan, const std::map<MagicKind, DistillationSpec>& specs);

/// Heralding draw: one seeded Bernoulli per box, placement order.
void apply_success_mask(std::vector<BoxPlacement>& placements,
                        const std::map<MagicKind, DistillationSpec>& specs,
                        std::uint64_t seed);

/// Greedy nearest-pin matching from each magic init site to a distinct
/// successful box of its kind (site order, ties to the lower box index).
/// Keys are init op indices. Throws InsufficientSuccesses when some site
/// cannot be served — the caller replans with more boxes.
[[nodiscard]] std::map<std::size_t, std::size_t> wire_outputs(
    const std::vector<BoxPlacement>& placements, const std::vector<InitSite>& sites);

}  // namespace dforge
