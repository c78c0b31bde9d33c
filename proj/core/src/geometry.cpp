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

#include "dforge/geometry.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace dforge {

namespace {

using ordered_json = nlohmann::ordered_json;

int sgn(int v) { return (v > 0) - (v < 0); }

void append_segment_cells(std::vector<Point3>& out, Point3 a, Point3 b) {
  const int dx = sgn(b.x - a.x), dy = sgn(b.y - a.y), dz = sgn(b.z - a.z);
  Point3 p = a;
  out.push_back(p);
  while (p != b) {
    p.x += 2 * dx;
    p.y += 2 * dy;
    p.z += 2 * dz;
    out.push_back(p);
  }
}

std::vector<Point3> dedupe_consecutive(std::vector<Point3> path) {
  std::vector<Point3> out;
  for (const auto& p : path)
    if (out.empty() || out.back() != p) out.push_back(p);
  return out;
}

}  // namespace

std::string to_string(MagicKind k) { return k == MagicKind::A ? "A" : "Y"; }

std::vector<Episode> extract_episodes(const Circuit& scheduled) {
  std::unordered_map<std::string, std::size_t> wire_index;
  for (std::size_t i = 0; i < scheduled.qubits.size(); ++i)
    wire_index[scheduled.qubits[i]] = i;

  std::vector<Episode> done;
  std::unordered_map<std::string, Episode> open;
  for (const auto& q : scheduled.qubits) {
    // Inputs (and untouched wires) host an implicit episode from time 0.
    Episode e;
    e.wire = wire_index[q];
    e.birth = 0;
    e.death = scheduled.ops.size();
    open[q] = e;
  }

  auto close = [&](const QubitId& q, std::size_t idx, std::optional<MeasurementBasis> basis,
                   bool selective) {
    Episode e = open.at(q);
    e.death = idx;
    e.meas = basis;
    e.selective_end = selective;
    done.push_back(e);
    open.erase(q);
  };

  for (std::size_t i = 0; i < scheduled.ops.size(); ++i) {
    const Operation& op = scheduled.ops[i];
    if (const auto* in = std::get_if<InitOp>(&op)) {
      Episode e;
      e.wire = wire_index.at(in->qubit);
      e.birth = i;
      e.death = scheduled.ops.size();
      e.init = in->state;
      e.init_op = i;
      open[in->qubit] = e;
    } else if (const auto* m = std::get_if<MeasureOp>(&op)) {
      close(m->qubit, i, m->basis, false);
    } else if (const auto* sm = std::get_if<SelectiveMeasureOp>(&op)) {
      close(sm->qubit, i, std::nullopt, true);
    }
  }
  for (const auto& q : scheduled.qubits) {
    auto it = open.find(q);
    if (it != open.end()) done.push_back(it->second);
  }
  std::sort(done.begin(), done.end(), [](const Episode& a, const Episode& b) {
    if (a.wire != b.wire) return a.wire < b.wire;
    return a.birth < b.birth;
  });
  return done;
}

std::array<Defect, 2> rail_pair(const Episode& e) {
  const int x0 = 4 * static_cast<int>(e.birth);
  const int x1 = 4 * static_cast<int>(e.death);
  const int ya = 4 * static_cast<int>(e.wire);
  const int yb = ya + 2;
  Defect a{DefectKind::Primal, false, {}};
  Defect b{DefectKind::Primal, false, {}};
  a.path = dedupe_consecutive({{x0, ya, 0}, {x1, ya, 0}});
  b.path = dedupe_consecutive({{x0, yb, 0}, {x1, yb, 0}});
  return {a, b};
}

std::vector<Defect> lay_qubit_rails(const Circuit& scheduled) {
  if (!is_icm(scheduled))
    throw CompileError(CompileError::Kind::NotIcm, "lay_qubit_rails requires an ICM circuit");
  std::vector<Defect> out;
  for (const auto& e : extract_episodes(scheduled)) {
    auto pair = rail_pair(e);
    out.push_back(std::move(pair[0]));
    out.push_back(std::move(pair[1]));
  }
  return out;
}

CappedRails cap_endpoints(const std::array<Defect, 2>& pair, std::optional<InitState> init,
                          std::optional<MeasurementBasis> meas, bool selective_end) {
  CappedRails out;
  const std::vector<Point3>& pa = pair[0].path;
  const std::vector<Point3>& pb = pair[1].path;
  out.attach_a = pa.front();
  out.attach_b = pb.front();

  const bool cap_init = init.has_value() && *init == InitState::Zero;
  const bool cap_meas = !selective_end && meas.has_value() && *meas == MeasurementBasis::Z;
  out.needs_pin = init.has_value() && (*init == InitState::A || *init == InitState::Y);

  if (cap_init && cap_meas) {
    Defect d{DefectKind::Primal, true, {}};
    d.path = pa;
    d.path.insert(d.path.end(), pb.rbegin(), pb.rend());
    d.path = dedupe_consecutive(std::move(d.path));
    out.defects.push_back(std::move(d));
  } else if (cap_init) {
    Defect d{DefectKind::Primal, false, {}};
    d.path.assign(pa.rbegin(), pa.rend());
    d.path.insert(d.path.end(), pb.begin(), pb.end());
    d.path = dedupe_consecutive(std::move(d.path));
    out.defects.push_back(std::move(d));
  } else if (cap_meas) {
    Defect d{DefectKind::Primal, false, {}};
    d.path = pa;
    d.path.insert(d.path.end(), pb.rbegin(), pb.rend());
    d.path = dedupe_consecutive(std::move(d.path));
    out.defects.push_back(std::move(d));
  } else {
    out.defects.push_back(pair[0]);
    out.defects.push_back(pair[1]);
  }
  return out;
}

Defect lay_cnot(std::size_t control_wire, std::size_t target_wire, std::size_t slot) {
  const int x0 = 4 * static_cast<int>(slot) + 1;
  const int x1 = x0 + 2;
  const int yc = 4 * static_cast<int>(control_wire) + 1;
  const int yt = 4 * static_cast<int>(target_wire) + 1;
  const int yf = yt > yc ? yc - 2 : yc + 2;  // off-gap return crossing

  Defect d{DefectKind::Dual, true, {}};
  d.path = {
      {x0, yc, 1},  {x0, yc, -1},  // through the control gap
      {x0, yt, -1}, {x0, yt, 1},   // through the target gap
      {x1, yt, 1},  {x1, yc, 1},
      {x1, yc, -1},                // through the control gap again
      {x1, yf, -1}, {x1, yf, 1},   // uncounted return crossing
      {x0, yf, 1},
  };
  return d;
}

std::map<std::size_t, int> loop_crossings(const Defect& dual) {
  std::map<std::size_t, int> counts;
  if (dual.path.size() < 2) return counts;
  const std::size_t n = dual.path.size();
  const std::size_t segs = dual.closed ? n : n - 1;
  for (std::size_t i = 0; i < segs; ++i) {
    const Point3& p = dual.path[i];
    const Point3& q = dual.path[(i + 1) % n];
    if (p.x == q.x && p.y == q.y && std::min(p.z, q.z) < 0 && std::max(p.z, q.z) > 0) {
      if (p.y >= 0 && p.y % 4 == 1) ++counts[static_cast<std::size_t>(p.y / 4)];
    }
  }
  return counts;
}

std::vector<Point3> defect_cells(const Defect& d) {
  std::vector<Point3> cells;
  if (d.path.empty()) return cells;
  if (d.path.size() == 1) return {d.path[0]};
  const std::size_t n = d.path.size();
  const std::size_t segs = d.closed ? n : n - 1;
  for (std::size_t i = 0; i < segs; ++i) {
    std::vector<Point3> seg;
    append_segment_cells(seg, d.path[i], d.path[(i + 1) % n]);
    if (!cells.empty()) seg.erase(seg.begin());
    cells.insert(cells.end(), seg.begin(), seg.end());
  }
  if (d.closed && cells.size() > 1 && cells.front() == cells.back()) cells.pop_back();
  return cells;
}

std::vector<InitSite> magic_init_sites(const Circuit& scheduled) {
  std::vector<InitSite> sites;
  for (const auto& e : extract_episodes(scheduled)) {
    if (!e.init || (*e.init != InitState::A && *e.init != InitState::Y)) continue;
    auto pair = rail_pair(e);
    InitSite s;
    s.init_op = e.init_op;
    s.wire = e.wire;
    s.kind = *e.init == InitState::A ? MagicKind::A : MagicKind::Y;
    s.attach_a = pair[0].path.front();
    s.attach_b = pair[1].path.front();
    sites.push_back(s);
  }
  return sites;
}

namespace {

/// Pin-to-rail connection polyline inside its own stacked plane.
std::vector<Point3> route_member(const Point3& pin, const Point3& attach, int plane_z) {
  std::vector<Point3> p;
  p.push_back(pin);
  p.push_back({pin.x, pin.y, plane_z});
  p.push_back({pin.x, -2, plane_z});
  p.push_back({attach.x, -2, plane_z});
  p.push_back({attach.x, attach.y, plane_z});
  p.push_back(attach);
  return dedupe_consecutive(std::move(p));
}

void merge_connection(Defect& d, const Point3& attach, std::vector<Point3> member) {
  // `member` runs pin -> attach; splice it onto whichever defect end matches.
  if (!d.path.empty() && d.path.front() == attach) {
    member.insert(member.end(), d.path.begin() + 1, d.path.end());
    d.path = std::move(member);
  } else if (!d.path.empty() && d.path.back() == attach) {
    d.path.insert(d.path.end(), member.rbegin() + 1, member.rend());
  } else {
    throw GeometryError(GeometryError::Kind::MissingBoxOutput,
                        "connection attach point is not a rail endpoint");
  }
}

}  // namespace

Assembly build_assembly(const Circuit& scheduled, const std::vector<BoxPlacement>& boxes,
                        const std::map<std::size_t, std::size_t>& site_to_box) {
  if (!is_icm(scheduled))
    throw CompileError(CompileError::Kind::NotIcm, "build_assembly requires an ICM circuit");

  Assembly a;
  a.boxes = boxes;

  const auto episodes = extract_episodes(scheduled);

  struct PinSite {
    InitSite site;
    std::size_t defect_a;  // defect carrying attach_a as an endpoint
    std::size_t defect_b;
  };
  std::vector<PinSite> pins;

  for (const auto& e : episodes) {
    CappedRails capped = cap_endpoints(rail_pair(e), e.init, e.meas, e.selective_end);
    const std::size_t base = a.defects.size();
    for (auto& d : capped.defects) a.defects.push_back(std::move(d));
    if (capped.needs_pin) {
      PinSite ps;
      ps.site.init_op = e.init_op;
      ps.site.wire = e.wire;
      ps.site.kind = *e.init == InitState::A ? MagicKind::A : MagicKind::Y;
      ps.site.attach_a = capped.attach_a;
      ps.site.attach_b = capped.attach_b;
      // merged U-defect carries both attach points, open pairs one each
      ps.defect_a = base;
      ps.defect_b = capped.defects.size() == 2 ? base + 1 : base;
      pins.push_back(ps);
    }
  }

  // Dual loops, one per CNOT, at the CNOT's own op slot.
  for (std::size_t i = 0; i < scheduled.ops.size(); ++i) {
    const auto* x = std::get_if<CnotOp>(&scheduled.ops[i]);
    if (!x) continue;
    std::size_t cw = SIZE_MAX, tw = SIZE_MAX;
    for (const auto& e : episodes) {
      if (e.birth <= i && i < e.death) {
        if (scheduled.qubits[e.wire] == x->control) cw = e.wire;
        if (scheduled.qubits[e.wire] == x->target) tw = e.wire;
      }
    }
    if (cw == SIZE_MAX || tw == SIZE_MAX)
      throw GeometryError(GeometryError::Kind::RailNotLive,
                          "cnot at op " + std::to_string(i) + " has no live rails");
    Defect loop = lay_cnot(cw, tw, i);
    int total = 0;
    for (const auto& [wire, n] : loop_crossings(loop)) total += n;
    a.braids.push_back({static_cast<int>(i), static_cast<int>(a.defects.size()), total});
    a.defects.push_back(std::move(loop));
  }

  // Box connections: shallow pin rows first so stacked planes stay disjoint.
  std::vector<const PinSite*> order;
  for (const auto& ps : pins) order.push_back(&ps);
  std::stable_sort(order.begin(), order.end(), [&](const PinSite* l, const PinSite* r) {
    auto pin_depth = [&](const PinSite* p) {
      auto it = site_to_box.find(p->site.init_op);
      return it == site_to_box.end() || it->second >= a.boxes.size()
                 ? 0
                 : -a.boxes[it->second].pin.y;
    };
    if (pin_depth(l) != pin_depth(r)) return pin_depth(l) < pin_depth(r);
    return l->site.init_op < r->site.init_op;
  });

  int plane_counter = 0;
  for (const PinSite* ps : order) {
    auto it = site_to_box.find(ps->site.init_op);
    if (it == site_to_box.end() || it->second >= a.boxes.size() ||
        !a.boxes[it->second].succeeded)
      throw GeometryError(GeometryError::Kind::MissingBoxOutput,
                          "no successful box wired to init op " +
                              std::to_string(ps->site.init_op));
    const BoxPlacement& box = a.boxes[it->second];
    const Point3 pin_a = box.pin;
    const Point3 pin_b{box.pin.x + 2, box.pin.y, box.pin.z};
    const int za = -2 * (plane_counter + 1);
    const int zb = -2 * (plane_counter + 2);
    plane_counter += 2;
    merge_connection(a.defects[ps->defect_a], ps->site.attach_a,
                     route_member(pin_a, ps->site.attach_a, za));
    merge_connection(a.defects[ps->defect_b], ps->site.attach_b,
                     route_member(pin_b, ps->site.attach_b, zb));
  }

  // Minimal inclusive bounds over everything placed.
  std::optional<std::pair<Point3, Point3>> bb;
  auto grow = [&](const Point3& p) {
    if (!bb) {
      bb = {p, p};
      return;
    }
    bb->first = {std::min(bb->first.x, p.x), std::min(bb->first.y, p.y),
                 std::min(bb->first.z, p.z)};
    bb->second = {std::max(bb->second.x, p.x), std::max(bb->second.y, p.y),
                  std::max(bb->second.z, p.z)};
  };
  for (const auto& d : a.defects)
    for (const auto& p : defect_cells(d)) grow(p);
  for (const auto& b : a.boxes) {
    grow(b.origin);
    grow({b.origin.x + b.dims.x - 1, b.origin.y + b.dims.y - 1, b.origin.z + b.dims.z - 1});
  }
  a.bbox = bb;
  return a;
}

Metrics compute_metrics(const Assembly& a) {
  if (a.empty())
    throw GeometryError(GeometryError::Kind::EmptyAssembly, "metrics of an empty assembly");

  std::set<Point3> cells;
  for (const auto& d : a.defects)
    for (const auto& p : defect_cells(d)) cells.insert(p);
  std::uint64_t box_cells = 0;
  Point3 lo, hi;
  bool first = true;
  auto grow = [&](const Point3& p) {
    if (first) {
      lo = hi = p;
      first = false;
      return;
    }
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  };
  for (const auto& p : cells) grow(p);
  for (const auto& b : a.boxes) {
    box_cells += std::uint64_t(b.dims.x) * std::uint64_t(b.dims.y) * std::uint64_t(b.dims.z);
    grow(b.origin);
    grow({b.origin.x + b.dims.x - 1, b.origin.y + b.dims.y - 1, b.origin.z + b.dims.z - 1});
  }

  Metrics m;
  m.occupied_cells = cells.size() + box_cells;
  m.bbox_volume = std::uint64_t(hi.x - lo.x + 1) * std::uint64_t(hi.y - lo.y + 1) *
                  std::uint64_t(hi.z - lo.z + 1);
  m.occupancy = static_cast<double>(m.occupied_cells) / static_cast<double>(m.bbox_volume);
  return m;
}

std::vector<std::string> check_assembly_invariants(const Assembly& a) {
  std::vector<std::string> bad;
  std::vector<std::set<Point3>> cell_sets;
  for (std::size_t i = 0; i < a.defects.size(); ++i) {
    const Defect& d = a.defects[i];
    const int parity = d.kind == DefectKind::Primal ? 0 : 1;
    for (const auto& p : d.path) {
      if ((p.x & 1) != parity || (p.y & 1) != parity || (p.z & 1) != parity) {
        bad.push_back("defect " + std::to_string(i) + ": point parity violation");
        break;
      }
    }
    const std::size_t n = d.path.size();
    const std::size_t segs = n < 2 ? 0 : (d.closed ? n : n - 1);
    for (std::size_t s = 0; s < segs; ++s) {
      const Point3& p = d.path[s];
      const Point3& q = d.path[(s + 1) % n];
      const int changed = (p.x != q.x) + (p.y != q.y) + (p.z != q.z);
      if (changed != 1) {
        bad.push_back("defect " + std::to_string(i) + ": segment changes " +
                      std::to_string(changed) + " coordinates");
        break;
      }
    }
    auto cells = defect_cells(d);
    std::set<Point3> cs(cells.begin(), cells.end());
    if (cs.size() != cells.size())
      bad.push_back("defect " + std::to_string(i) + ": self-intersecting path");
    cell_sets.push_back(std::move(cs));
  }

  for (std::size_t i = 0; i < cell_sets.size(); ++i) {
    for (std::size_t j = i + 1; j < cell_sets.size(); ++j) {
      for (const auto& p : cell_sets[i]) {
        if (cell_sets[j].count(p)) {
          bad.push_back("defects " + std::to_string(i) + " and " + std::to_string(j) +
                        " share a cell");
          break;
        }
      }
    }
  }

  auto in_box = [](const BoxPlacement& b, const Point3& p) {
    return p.x >= b.origin.x && p.x < b.origin.x + b.dims.x && p.y >= b.origin.y &&
           p.y < b.origin.y + b.dims.y && p.z >= b.origin.z && p.z < b.origin.z + b.dims.z;
  };
  for (std::size_t i = 0; i < a.boxes.size(); ++i) {
    for (std::size_t j = i + 1; j < a.boxes.size(); ++j) {
      const auto& p = a.boxes[i].origin;
      const auto& q = a.boxes[j].origin;
      const auto& dp = a.boxes[i].dims;
      const auto& dq = a.boxes[j].dims;
      const bool overlap = p.x < q.x + dq.x && q.x < p.x + dp.x && p.y < q.y + dq.y &&
                           q.y < p.y + dp.y && p.z < q.z + dq.z && q.z < p.z + dp.z;
      if (overlap)
        bad.push_back("boxes " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
    }
    for (std::size_t k = 0; k < cell_sets.size(); ++k) {
      for (const auto& p : cell_sets[k]) {
        if (in_box(a.boxes[i], p)) {
          bad.push_back("box " + std::to_string(i) + " overlaps defect " + std::to_string(k));
          break;
        }
      }
    }
  }

  for (const auto& br : a.braids) {
    if (br.defect_index < 0 || br.defect_index >= static_cast<int>(a.defects.size())) {
      bad.push_back("braid references missing defect");
      continue;
    }
    const Defect& d = a.defects[static_cast<std::size_t>(br.defect_index)];
    if (d.kind != DefectKind::Dual || !d.closed)
      bad.push_back("braid " + std::to_string(br.cnot_id) + " is not a closed dual loop");
    if (br.crossings != 3)
      bad.push_back("braid " + std::to_string(br.cnot_id) + " has " +
                    std::to_string(br.crossings) + " crossings (want 3)");
  }
  return bad;
}

namespace {

ordered_json point_json(const Point3& p) { return ordered_json::array({p.x, p.y, p.z}); }

Point3 point_from(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3)
    throw GeometryError(GeometryError::Kind::BadDocument, "bad point");
  return {j[0].get<int>(), j[1].get<int>(), j[2].get<int>()};
}

}  // namespace

std::string export_assembly(const Assembly& a) {
  ordered_json doc;
  doc["version"] = 1;
  doc["defects"] = ordered_json::array();
  for (const auto& d : a.defects) {
    ordered_json jd;
    jd["kind"] = d.kind == DefectKind::Primal ? "primal" : "dual";
    jd["closed"] = d.closed;
    jd["path"] = ordered_json::array();
    for (const auto& p : d.path) jd["path"].push_back(point_json(p));
    doc["defects"].push_back(std::move(jd));
  }
  doc["braids"] = ordered_json::array();
  for (const auto& b : a.braids)
    doc["braids"].push_back(
        {{"cnot_id", b.cnot_id}, {"defect", b.defect_index}, {"crossings", b.crossings}});
  doc["boxes"] = ordered_json::array();
  for (const auto& b : a.boxes) {
    ordered_json jb;
    jb["kind"] = to_string(b.kind);
    jb["origin"] = point_json(b.origin);
    jb["dims"] = point_json(b.dims);
    jb["succeeded"] = b.succeeded;
    jb["pin"] = point_json(b.pin);
    doc["boxes"].push_back(std::move(jb));
  }
  if (a.bbox) {
    doc["bbox"] = {{"min", point_json(a.bbox->first)}, {"max", point_json(a.bbox->second)}};
  } else {
    doc["bbox"] = nullptr;
  }
  if (a.empty()) {
    doc["metrics"] = nullptr;
  } else {
    Metrics m = compute_metrics(a);
    doc["metrics"] = {{"bbox_volume", m.bbox_volume},
                      {"occupied_cells", m.occupied_cells},
                      {"occupancy", m.occupancy}};
  }
  return doc.dump(2) + "\n";
}

Assembly import_assembly(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw GeometryError(GeometryError::Kind::BadDocument, e.what());
  }
  Assembly a;
  try {
    for (const auto& jd : doc.at("defects")) {
      Defect d;
      d.kind = jd.at("kind").get<std::string>() == "primal" ? DefectKind::Primal
                                                            : DefectKind::Dual;
      d.closed = jd.at("closed").get<bool>();
      for (const auto& jp : jd.at("path")) d.path.push_back(point_from(jp));
      a.defects.push_back(std::move(d));
    }
    for (const auto& jb : doc.at("braids"))
      a.braids.push_back({jb.at("cnot_id").get<int>(), jb.at("defect").get<int>(),
                          jb.at("crossings").get<int>()});
    for (const auto& jb : doc.at("boxes")) {
      BoxPlacement b;
      b.kind = jb.at("kind").get<std::string>() == "A" ? MagicKind::A : MagicKind::Y;
      b.origin = point_from(jb.at("origin"));
      b.dims = point_from(jb.at("dims"));
      b.succeeded = jb.at("succeeded").get<bool>();
      b.pin = point_from(jb.at("pin"));
      a.boxes.push_back(b);
    }
    if (!doc.at("bbox").is_null())
      a.bbox = {point_from(doc["bbox"].at("min")), point_from(doc["bbox"].at("max"))};
  } catch (const nlohmann::json::exception& e) {
    throw GeometryError(GeometryError::Kind::BadDocument, e.what());
  }
  return a;
}

std::string export_assembly_obj(const Assembly& a) {
  std::ostringstream os;
  os << "# defect assembly line export\n";
  std::size_t vbase = 1;
  for (std::size_t i = 0; i < a.defects.size(); ++i) {
    const Defect& d = a.defects[i];
    os << "# defect " << i << " " << (d.kind == DefectKind::Primal ? "primal" : "dual")
       << (d.closed ? " closed" : " open") << "\n";
    for (const auto& p : d.path) os << "v " << p.x << " " << p.y << " " << p.z << "\n";
    os << "l";
    for (std::size_t k = 0; k < d.path.size(); ++k) os << " " << vbase + k;
    if (d.closed) os << " " << vbase;
    os << "\n";
    vbase += d.path.size();
  }
  return os.str();
}

}  // namespace dforge
