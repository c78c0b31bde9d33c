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

#include "dforge/schedule.hpp"

#include <algorithm>
#include <limits>

#include <nlohmann/json.hpp>

namespace dforge {

std::vector<Lifetime> compute_lifetimes(const Circuit& c) {
  if (!is_icm(c))
    throw CompileError(CompileError::Kind::NotIcm, "compute_lifetimes requires an ICM circuit");

  std::map<QubitId, Lifetime> lt;
  for (const auto& q : c.qubits) lt[q] = {q, 0, c.ops.size()};
  std::map<QubitId, int> episodes;
  for (std::size_t i = 0; i < c.ops.size(); ++i) {
    const Operation& op = c.ops[i];
    if (const auto* in = std::get_if<InitOp>(&op)) {
      if (++episodes[in->qubit] > 1)
        throw std::invalid_argument("compute_lifetimes: qubit '" + in->qubit +
                                    "' has multiple episodes (already wire-scheduled?)");
      lt[in->qubit].birth = i;
    } else if (const auto* m = std::get_if<MeasureOp>(&op)) {
      lt[m->qubit].death = i;
    } else if (const auto* sm = std::get_if<SelectiveMeasureOp>(&op)) {
      lt[sm->qubit].death = i;
    }
  }

  std::vector<Lifetime> out;
  out.reserve(c.qubits.size());
  for (const auto& q : c.qubits) out.push_back(lt[q]);
  return out;
}

WireAssignment assign_wires(const std::vector<Lifetime>& lifetimes) {
  std::vector<Lifetime> sorted = lifetimes;
  std::sort(sorted.begin(), sorted.end(), [](const Lifetime& a, const Lifetime& b) {
    if (a.birth != b.birth) return a.birth < b.birth;
    if (a.death != b.death) return a.death < b.death;
    return a.qubit < b.qubit;
  });

  WireAssignment wa;
  std::vector<std::size_t> wire_last_death;
  for (const auto& l : sorted) {
    std::size_t wire = wire_last_death.size();
    for (std::size_t i = 0; i < wire_last_death.size(); ++i) {
      if (wire_last_death[i] < l.birth) {
        wire = i;
        break;
      }
    }
    if (wire == wire_last_death.size()) wire_last_death.push_back(0);
    wire_last_death[wire] = l.death;
    wa.wire_of[l.qubit] = wire;
  }
  wa.wire_count = wire_last_death.size();
  return wa;
}

std::size_t max_simultaneous_live(const std::vector<Lifetime>& lifetimes) {
  std::size_t best = 0;
  for (const auto& probe : lifetimes) {
    const std::size_t idx = probe.birth;
    std::size_t live = 0;
    for (const auto& l : lifetimes)
      if (l.birth <= idx && idx < l.death) ++live;
    best = std::max(best, live);
  }
  return best;
}

Circuit rewrite_on_wires(const Circuit& c, const WireAssignment& w) {
  const auto lifetimes = compute_lifetimes(c);

  // Reject assignments that stack overlapping episodes on one wire.
  std::map<std::size_t, std::vector<const Lifetime*>> per_wire;
  for (const auto& l : lifetimes) {
    auto it = w.wire_of.find(l.qubit);
    if (it == w.wire_of.end())
      throw std::invalid_argument("rewrite_on_wires: no wire for qubit '" + l.qubit + "'");
    per_wire[it->second].push_back(&l);
  }
  for (auto& [wire, ls] : per_wire) {
    std::sort(ls.begin(), ls.end(),
              [](const Lifetime* a, const Lifetime* b) { return a->birth < b->birth; });
    for (std::size_t i = 1; i < ls.size(); ++i) {
      if (!(ls[i - 1]->death < ls[i]->birth))
        throw CompileError(CompileError::Kind::OverlapViolation,
                           "wire " + std::to_string(wire) + " hosts overlapping lifetimes ('" +
                               ls[i - 1]->qubit + "', '" + ls[i]->qubit + "')");
    }
  }

  auto wire_name = [&](const QubitId& q) {
    return "w" + std::to_string(w.wire_of.at(q));
  };

  Circuit out;
  for (std::size_t i = 0; i < w.wire_count; ++i) out.qubits.push_back("w" + std::to_string(i));
  for (const auto& q : c.inputs) out.inputs.push_back(wire_name(q));
  for (const auto& op : c.ops) {
    if (const auto* in = std::get_if<InitOp>(&op)) {
      out.ops.push_back(InitOp{wire_name(in->qubit), in->state});
    } else if (const auto* x = std::get_if<CnotOp>(&op)) {
      out.ops.push_back(CnotOp{wire_name(x->control), wire_name(x->target)});
    } else if (const auto* m = std::get_if<MeasureOp>(&op)) {
      out.ops.push_back(MeasureOp{wire_name(m->qubit), m->basis});
    } else if (const auto* sm = std::get_if<SelectiveMeasureOp>(&op)) {
      SelectiveMeasureOp e = *sm;  // keeps the resolved controller binding
      e.qubit = wire_name(sm->qubit);
      e.controller = wire_name(sm->controller);
      out.ops.push_back(e);
    } else {
      throw CompileError(CompileError::Kind::NotIcm, "rewrite_on_wires: non-ICM op");
    }
  }
  for (const auto& q : c.outputs) out.outputs.push_back(wire_name(q));
  validate_circuit(out);
  return out;
}

std::string wire_map_report(const std::vector<Lifetime>& lifetimes, const WireAssignment& w) {
  nlohmann::ordered_json doc;
  doc["version"] = 1;
  doc["wire_count"] = w.wire_count;
  doc["max_live"] = max_simultaneous_live(lifetimes);
  doc["qubits"] = nlohmann::ordered_json::object();
  for (const auto& l : lifetimes) {
    nlohmann::ordered_json entry;
    entry["wire"] = w.wire_of.at(l.qubit);
    entry["birth"] = l.birth;
    entry["death"] = l.death;
    doc["qubits"][l.qubit] = std::move(entry);
  }
  return doc.dump(2) + "\n";
}

}  // namespace dforge
