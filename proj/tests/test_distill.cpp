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

#include <doctest.h>

#include <cmath>
#include <set>

#include "dforge/circuit_io.hpp"
#include "dforge/distill.hpp"
#include "helpers.hpp"

using namespace dforge;
using dforge::testing::fixture_path;

namespace {

/// Brute-force P[#successes >= required] by summing all 2^n outcome vectors.
double brute_tail(std::size_t n, double p, std::size_t required) {
  double total = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    const int k = __builtin_popcountll(mask);
    if (static_cast<std::size_t>(k) < required) continue;
    total += std::pow(p, k) * std::pow(1.0 - p, static_cast<double>(n) - k);
  }
  return total;
}

std::size_t brute_boxes_needed(std::size_t required, double p, double target,
                               std::size_t cap = 20) {
  if (required == 0) return 0;
  for (std::size_t n = required; n <= cap; ++n)
    if (brute_tail(n, p, required) + 1e-12 >= target) return n;
  return SIZE_MAX;
}

std::map<MagicKind, DistillationSpec> default_specs() {
  return {{MagicKind::A, {MagicKind::A, 0.9, {8, 6, 6}}},
          {MagicKind::Y, {MagicKind::Y, 0.9, {4, 4, 4}}}};
}

}  // namespace

TEST_CASE("count_required: gadget fixtures") {
  auto t = count_required(load_circuit_file(fixture_path("t_gadget.qc")));
  CHECK(t.at(MagicKind::A) == 1);
  CHECK(t.at(MagicKind::Y) == 1);

  auto s = count_required(load_circuit_file(fixture_path("s_gadget.qc")));
  CHECK(s.at(MagicKind::A) == 0);
  CHECK(s.at(MagicKind::Y) == 1);

  auto plain = count_required(parse_circuit("qubit q\ninit q |0>\nmeasure q Z\n"));
  CHECK(plain.at(MagicKind::A) == 0);
  CHECK(plain.at(MagicKind::Y) == 0);

  Circuit gates = parse_circuit("qubit q\ninit q |0>\nt q\n");
  CHECK_THROWS_AS((void)count_required(gates), CompileError);
}

TEST_CASE("boxes_needed: the exact 1-of-3 case and trivial zero") {
  DistillationSpec spec{MagicKind::A, 0.9, {8, 6, 6}};
  CHECK(boxes_needed(1, spec, 0.999) == 3);  // 1 - 0.1^3 = 0.999
  CHECK(boxes_needed(0, spec, 0.999) == 0);
}

TEST_CASE("boxes_needed: agrees with exhaustive 2^n enumeration") {
  for (double p : {0.5, 0.75, 0.9}) {
    for (std::size_t required = 1; required <= 4; ++required) {
      for (double target : {0.9, 0.99, 0.999}) {
        DistillationSpec spec{MagicKind::A, p, {4, 4, 4}};
        const std::size_t brute = brute_boxes_needed(required, p, target);
        if (brute == SIZE_MAX) continue;  // needs more than 20 boxes
        CAPTURE(p);
        CAPTURE(required);
        CAPTURE(target);
        CHECK(boxes_needed(required, spec, target) == brute);
      }
    }
  }
}

TEST_CASE("boxes_needed: monotone in p, required and target") {
  DistillationSpec low{MagicKind::A, 0.5, {4, 4, 4}};
  DistillationSpec mid{MagicKind::A, 0.75, {4, 4, 4}};
  DistillationSpec high{MagicKind::A, 0.9, {4, 4, 4}};
  for (std::size_t required = 1; required <= 6; ++required) {
    for (double target : {0.9, 0.99, 0.999}) {
      const std::size_t c_low = boxes_needed(required, low, target);
      const std::size_t c_mid = boxes_needed(required, mid, target);
      const std::size_t c_high = boxes_needed(required, high, target);
      CHECK(c_low >= c_mid);
      CHECK(c_mid >= c_high);
      CHECK(boxes_needed(required + 1, mid, target) >= c_mid);
    }
    CHECK(boxes_needed(required, mid, 0.999) >= boxes_needed(required, mid, 0.9));
  }
}

TEST_CASE("boxes_needed: unreachable target errors") {
  DistillationSpec tiny{MagicKind::A, 1e-4, {4, 4, 4}};
  CHECK_THROWS_AS((void)boxes_needed(8, tiny, 0.999999, 64), PlanError);
  CHECK_THROWS_AS((void)boxes_needed(1, tiny, 1.5), std::invalid_argument);
}

TEST_CASE("place_boxes: 3+3 disjoint boxes with pins outside the volume") {
  DistillationPlan plan;
  plan.boxes = {{MagicKind::A, 3}, {MagicKind::Y, 3}};
  auto placed = place_boxes(plan, default_specs());
  REQUIRE(placed.size() == 6);
  for (std::size_t i = 0; i < placed.size(); ++i) {
    const auto& b = placed[i];
    CHECK(b.origin.y + b.dims.y <= 0);  // below the circuit
    CHECK(b.pin.y == b.origin.y + b.dims.y);
    CHECK(b.pin.x % 2 == 0);
    for (std::size_t j = i + 1; j < placed.size(); ++j) {
      const auto& c = placed[j];
      const bool overlap = b.origin.x < c.origin.x + c.dims.x &&
                           c.origin.x < b.origin.x + b.dims.x &&
                           b.origin.y < c.origin.y + c.dims.y &&
                           c.origin.y < b.origin.y + b.dims.y;
      CHECK_FALSE(overlap);
    }
  }

  DistillationPlan none;
  CHECK(place_boxes(none, default_specs()).empty());
}

TEST_CASE("bbox volume grows with every added box of fixed dims") {
  auto specs = default_specs();
  std::uint64_t prev = 0;
  for (std::size_t n = 1; n <= 10; ++n) {
    DistillationPlan plan;
    plan.boxes = {{MagicKind::A, n}};
    Assembly a;
    a.boxes = place_boxes(plan, specs);
    const Metrics m = compute_metrics(a);
    CAPTURE(n);
    CHECK(m.bbox_volume > prev);
    prev = m.bbox_volume;
  }
}

TEST_CASE("wire_outputs: picks the successful box, skipping failures") {
  DistillationPlan plan;
  plan.boxes = {{MagicKind::A, 3}};
  auto placed = place_boxes(plan, default_specs());
  placed[0].succeeded = false;
  placed[1].succeeded = true;
  placed[2].succeeded = false;

  InitSite site;
  site.init_op = 7;
  site.kind = MagicKind::A;
  site.attach_a = {0, 0, 0};
  site.attach_b = {0, 2, 0};
  auto matching = wire_outputs(placed, {site});
  REQUIRE(matching.size() == 1);
  CHECK(matching.at(7) == 1);

  CHECK(wire_outputs(placed, {}).empty());

  placed[1].succeeded = false;
  CHECK_THROWS_AS((void)wire_outputs(placed, {site}), PlanError);
}

TEST_CASE("wire_outputs: injective matching on fuzzed instances") {
  std::mt19937_64 rng(13);
  auto specs = default_specs();
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n_sites = 1 + rng() % 4;
    DistillationPlan plan;
    plan.boxes = {{MagicKind::A, n_sites + rng() % 3}, {MagicKind::Y, n_sites + rng() % 3}};
    auto placed = place_boxes(plan, specs);
    apply_success_mask(placed, specs, rng());
    std::size_t ok_a = 0, ok_y = 0;
    for (const auto& b : placed) {
      if (b.succeeded && b.kind == MagicKind::A) ++ok_a;
      if (b.succeeded && b.kind == MagicKind::Y) ++ok_y;
    }
    std::vector<InitSite> sites;
    for (std::size_t i = 0; i < n_sites; ++i) {
      InitSite s;
      s.init_op = i;
      s.kind = rng() % 2 ? MagicKind::A : MagicKind::Y;
      s.attach_a = {static_cast<int>(4 * i), 0, 0};
      s.attach_b = {static_cast<int>(4 * i), 2, 0};
      sites.push_back(s);
    }
    std::size_t need_a = 0, need_y = 0;
    for (const auto& s : sites) (s.kind == MagicKind::A ? need_a : need_y)++;
    if (need_a > ok_a || need_y > ok_y) {
      CHECK_THROWS_AS((void)wire_outputs(placed, sites), PlanError);
      continue;
    }
    auto matching = wire_outputs(placed, sites);
    std::set<std::size_t> used;
    for (const auto& [site_op, box] : matching) {
      CHECK(placed[box].succeeded);
      CHECK(used.insert(box).second);  // injective
    }
    CHECK(matching.size() == sites.size());
  }
}
