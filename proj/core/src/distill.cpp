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

#include "dforge/distill.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace dforge {

namespace {
constexpr double kTailSlack = 1e-12;
}

std::map<MagicKind, std::size_t> count_required(const Circuit& icm) {
  if (!is_icm(icm))
    throw CompileError(CompileError::Kind::NotIcm, "count_required expects an ICM circuit");
  std::map<MagicKind, std::size_t> out{{MagicKind::A, 0}, {MagicKind::Y, 0}};
  for (const auto& op : icm.ops) {
    if (const auto* in = std::get_if<InitOp>(&op)) {
      if (in->state == InitState::A) ++out[MagicKind::A];
      if (in->state == InitState::Y) ++out[MagicKind::Y];
    }
  }
  return out;
}

double success_tail(std::size_t n, double p, std::size_t required) {
  if (required == 0) return 1.0;
  if (required > n) return 0.0;
  const double q = 1.0 - p;
  // 1 - P[X <= required-1]; pmf recurrence keeps the few terms exact.
  double pmf = std::pow(q, static_cast<double>(n));  // k = 0
  double cdf = pmf;
  for (std::size_t k = 0; k + 1 < required; ++k) {
    pmf *= (static_cast<double>(n - k) / static_cast<double>(k + 1)) * (p / q);
    cdf += pmf;
  }
  return 1.0 - cdf;
}

std::size_t boxes_needed(std::size_t required, const DistillationSpec& spec, double target,
                         std::size_t cap) {
  if (!(target > 0.0 && target < 1.0))
    throw std::invalid_argument("boxes_needed: target must be in (0,1)");
  if (!(spec.success_prob > 0.0 && spec.success_prob <= 1.0))
    throw std::invalid_argument("boxes_needed: success_prob must be in (0,1]");
  if (required == 0) return 0;
  for (std::size_t n = required; n <= cap; ++n) {
    if (success_tail(n, spec.success_prob, required) + kTailSlack >= target) return n;
  }
  throw PlanError(PlanError::Kind::TargetUnreachable,
                  "no box count up to " + std::to_string(cap) + " reaches target " +
                      std::to_string(target));
}

std::vector<BoxPlacement> place_boxes(const DistillationPlan& plan,
                                      const std::map<MagicKind, DistillationSpec>& specs) {
  std::vector<BoxPlacement> out;
  int row_top = -4;
  for (MagicKind kind : {MagicKind::A, MagicKind::Y}) {
    const DistillationSpec& spec = specs.at(kind);
    const Point3 d = spec.box_dims;
    if (d.x <= 0 || d.y <= 0 || d.z <= 0)
      throw std::invalid_argument("place_boxes: box dims must be positive");
    const int pitch = (d.x + 3) & ~1;  // keep origins (and pins) on even x
    auto it = plan.boxes.find(kind);
    const std::size_t n = it == plan.boxes.end() ? 0 : it->second;
    for (std::size_t i = 0; i < n; ++i) {
      BoxPlacement b;
      b.kind = kind;
      b.dims = d;
      b.origin = {static_cast<int>(i) * pitch, row_top - d.y, 0};
      b.pin = {b.origin.x, row_top, 0};
      b.succeeded = false;
      out.push_back(b);
    }
    row_top -= d.y + 2;
  }
  return out;
}

void apply_success_mask(std::vector<BoxPlacement>& placements,
                        const std::map<MagicKind, DistillationSpec>& specs,
                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& b : placements) b.succeeded = u(rng) < specs.at(b.kind).success_prob;
}

std::map<std::size_t, std::size_t> wire_outputs(const std::vector<BoxPlacement>& placements,
                                                const std::vector<InitSite>& sites) {
  std::map<std::size_t, std::size_t> matching;
  std::vector<bool> used(placements.size(), false);
  for (const auto& site : sites) {
    std::size_t best = SIZE_MAX;
    long best_dist = 0;
    for (std::size_t i = 0; i < placements.size(); ++i) {
      const BoxPlacement& b = placements[i];
      if (used[i] || !b.succeeded || b.kind != site.kind) continue;
      const long dist = std::labs(b.pin.x - site.attach_a.x) +
                        std::labs(b.pin.y - site.attach_a.y) +
                        std::labs(b.pin.z - site.attach_a.z);
      if (best == SIZE_MAX || dist < best_dist) {
        best = i;
        best_dist = dist;
      }
    }
    if (best == SIZE_MAX)
      throw PlanError(PlanError::Kind::InsufficientSuccesses,
                      "no successful " + to_string(site.kind) + " box left for init op " +
                          std::to_string(site.init_op));
    used[best] = true;
    matching[site.init_op] = best;
  }
  return matching;
}

}  // namespace dforge
