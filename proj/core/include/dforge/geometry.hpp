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
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dforge/circuit.hpp"

namespace dforge {

// Lattice conventions.
//
//   x is the time axis. One op slot is 4 cells wide: primal structures sit
//   on the even planes x = 4*slot, dual CNOT loops occupy the two odd planes
//   x = 4*slot+1 .. 4*slot+3 strictly inside their own slot, so loops of
//   neighbouring ops can never touch.
//
//   Wire i is a pair of primal rails along x at y = 4i and y = 4i+2, z = 0.
//   Primal defects live on all-even lattice points, dual defects on all-odd
//   points; polyline segments advance in steps of 2, so the two families
//   can never share a cell.
//
//   Distillation boxes are shelved below the circuit (y < 0); the strip
//   y in [-2, 0] is the connection channel. Connection pairs run from a box
//   output pin into the channel and then to their init face through
//   per-polyline stacked planes z = -2, -4, ... under the boxes (boxes
//   occupy z >= 0), which keeps any number of connections cell-disjoint.

struct Point3 {
  int x = 0;
  int y = 0;
  int z = 0;
  friend bool operator==(const Point3&, const Point3&) = default;
  friend auto operator<=>(const Point3&, const Point3&) = default;
};

enum class DefectKind { Primal, Dual };

struct Defect {
  DefectKind kind = DefectKind::Primal;
  bool closed = false;
  std::vector<Point3> path;  // consecutive points differ in exactly one coord
};

struct Braid {
  int cnot_id = 0;        // op index of the CNOT
  int defect_index = 0;   // index into Assembly::defects
  int crossings = 0;
};

enum class MagicKind { A, Y };

struct BoxPlacement {
  MagicKind kind = MagicKind::A;
  Point3 origin;  // min corner; box covers [origin, origin + dims)
  Point3 dims;
  bool succeeded = false;
  Point3 pin;  // on the circuit-facing face, one cell outside the volume
};

struct Metrics {
  std::uint64_t bbox_volume = 0;
  std::uint64_t occupied_cells = 0;
  double occupancy = 0.0;
};

struct Assembly {
  std::vector<Defect> defects;
  std::vector<Braid> braids;
  std::vector<BoxPlacement> boxes;
  std::optional<std::pair<Point3, Point3>> bbox;  // inclusive cell bounds

  [[nodiscard]] bool empty() const { return defects.empty() && boxes.empty(); }
};

/// One init..measure run on a wire of a scheduled circuit. Wires are indexed
/// by declaration order. `init` is empty for inputs, `meas` for survivors
/// (death = ops length).
struct Episode {
  std::size_t wire = 0;
  std::size_t birth = 0;
  std::size_t death = 0;
  std::optional<InitState> init;
  std::optional<MeasurementBasis> meas;
  bool selective_end = false;
  std::size_t init_op = SIZE_MAX;
};

[[nodiscard]] std::vector<Episode> extract_episodes(const Circuit& scheduled);

/// The two open primal rails of an episode, spanning x in [4*birth, 4*death].
[[nodiscard]] std::array<Defect, 2> rail_pair(const Episode& e);

/// All rails of a scheduled ICM circuit, uncapped (two per episode).
[[nodiscard]] std::vector<Defect> lay_qubit_rails(const Circuit& scheduled);

/// Rails with boundary caps applied. Z-type boundaries (|0> init, M_Z) close
/// the pair with a transversal segment at the episode face; X-type (|+>,
/// M_X) and selective ends stay open. |A>/|Y> inits stay open too and are
/// flagged for a distillation-box connection at the attach points.
struct CappedRails {
  std::vector<Defect> defects;  // 1 (merged/closed) or 2 (both open)
  bool needs_pin = false;
  Point3 attach_a;  // init-face end of rail a (y = 4i)
  Point3 attach_b;  // init-face end of rail b (y = 4i+2)
};

[[nodiscard]] CappedRails cap_endpoints(const std::array<Defect, 2>& pair,
                                        std::optional<InitState> init,
                                        std::optional<MeasurementBasis> meas,
                                        bool selective_end = false);

/// Closed dual loop implementing the CNOT at op index `slot`: it crosses the
/// control pair's gap twice (x = 4s+1 and 4s+3) and the target pair's gap
/// once, 3 recorded crossings total (the loop also threads one uncounted
/// off-gap crossing to close on itself).
[[nodiscard]] Defect lay_cnot(std::size_t control_wire, std::size_t target_wire,
                              std::size_t slot);

/// Recorded crossings of a dual loop per wire gap: z-spanning segments that
/// pass z = 0 at y strictly between a pair's rails.
[[nodiscard]] std::map<std::size_t, int> loop_crossings(const Defect& dual);

/// Lattice points covered by a defect (stepping by 2 along each segment).
[[nodiscard]] std::vector<Point3> defect_cells(const Defect& d);

/// A magic-state init site that needs a distillation connection.
struct InitSite {
  std::size_t init_op = 0;
  std::size_t wire = 0;
  MagicKind kind = MagicKind::A;
  Point3 attach_a;
  Point3 attach_b;
};

[[nodiscard]] std::vector<InitSite> magic_init_sites(const Circuit& scheduled);

/// Full assembly for a scheduled ICM circuit. `site_to_box` maps each magic
/// init op index to its (successful) box; throws MissingBoxOutput when a
/// site has no mapped box and RailNotLive when a CNOT's wires are not live
/// at its slot.
[[nodiscard]] Assembly build_assembly(const Circuit& scheduled,
                                      const std::vector<BoxPlacement>& boxes,
                                      const std::map<std::size_t, std::size_t>& site_to_box);

/// bbox volume, covered cells and their ratio. Throws EmptyAssembly.
[[nodiscard]] Metrics compute_metrics(const Assembly& a);

/// Invariant sweep used by tests and `verify`: parity per kind, pairwise
/// cell-disjointness (defects and boxes), braid crossing counts. Returns
/// human-readable violations, empty when clean.
[[nodiscard]] std::vector<std::string> check_assembly_invariants(const Assembly& a);

// JSON (schema docs/assembly.schema.json) and OBJ-style line exports.
// import(export(a)) == a, field for field.
[[nodiscard]] std::string export_assembly(const Assembly& a);
[[nodiscard]] Assembly import_assembly(std::string_view json_text);
[[nodiscard]] std::string export_assembly_obj(const Assembly& a);

[[nodiscard]] std::string to_string(MagicKind k);

}  // namespace dforge
