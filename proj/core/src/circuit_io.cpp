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

#include "dforge/circuit_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <variant>
#include <vector>

namespace dforge {

namespace {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
      ++i;
      continue;
    }
    if (line[i] == '#') break;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' &&
           line[i] != '#')
      ++i;
    out.push_back({std::string(line.substr(start, i - start)), start + 1});
  }
  return out;
}

[[noreturn]] void fail(std::size_t line, std::size_t col, const std::string& msg) {
  throw ParseError(ParseError::Kind::SyntaxError, line, col, msg);
}

InitState parse_state(const Token& t, std::size_t line) {
  if (t.text == "|0>") return InitState::Zero;
  if (t.text == "|+>") return InitState::Plus;
  if (t.text == "|A>") return InitState::A;
  if (t.text == "|Y>") return InitState::Y;
  fail(line, t.column, "expected state |0>, |+>, |A> or |Y>, got '" + t.text + "'");
}

MeasurementBasis parse_basis(std::string_view s, std::size_t line, std::size_t col) {
  if (s == "Z") return MeasurementBasis::Z;
  if (s == "X") return MeasurementBasis::X;
  fail(line, col, "expected basis Z or X");
}

PiRational parse_angle(const Token& t, std::size_t line) {
  // <num>/<den>pi, e.g. 1/2pi, -1/4pi
  const std::string& s = t.text;
  std::size_t slash = s.find('/');
  if (slash == std::string::npos || s.size() < slash + 3 || s.substr(s.size() - 2) != "pi")
    fail(line, t.column, "expected angle of the form <num>/<den>pi");
  std::int64_t num = 0, den = 0;
  auto r1 = std::from_chars(s.data(), s.data() + slash, num);
  auto r2 = std::from_chars(s.data() + slash + 1, s.data() + s.size() - 2, den);
  if (r1.ec != std::errc{} || r1.ptr != s.data() + slash || r2.ec != std::errc{} ||
      r2.ptr != s.data() + s.size() - 2 || den == 0)
    fail(line, t.column, "malformed angle '" + s + "'");
  return PiRational(num, den);
}

}  // namespace

Circuit parse_circuit(std::string_view text) {
  Circuit c;
  std::vector<std::size_t> op_lines;  // source line of each op, for validation errors
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    ++line_no;
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

    auto toks = tokenize(line);
    if (toks.empty()) continue;
    const std::size_t ops_before = c.ops.size();
    const std::string& kw = toks[0].text;
    auto want = [&](std::size_t n, const char* usage) {
      if (toks.size() != n) fail(line_no, toks[0].column, std::string("usage: ") + usage);
    };

    if (kw == "qubit" || kw == "input") {
      want(2, (kw + " <id>").c_str());
      c.qubits.push_back(toks[1].text);
      if (kw == "input") c.inputs.push_back(toks[1].text);
    } else if (kw == "init") {
      want(3, "init <id> <state>");
      c.ops.push_back(InitOp{toks[1].text, parse_state(toks[2], line_no)});
    } else if (kw == "h" || kw == "s" || kw == "v" || kw == "t") {
      want(2, "h|s|v|t <id>");
      GateKind g = kw == "h"   ? GateKind::H
                   : kw == "s" ? GateKind::S
                   : kw == "v" ? GateKind::V
                               : GateKind::T;
      c.ops.push_back(GateOp{g, toks[1].text});
    } else if (kw == "rz" || kw == "rx") {
      want(3, "rz|rx <id> <num>/<den>pi");
      c.ops.push_back(RotationOp{kw == "rz" ? Axis::Z : Axis::X,
                                 parse_angle(toks[2], line_no), toks[1].text});
    } else if (kw == "cnot") {
      want(3, "cnot <ctrl> <tgt>");
      c.ops.push_back(CnotOp{toks[1].text, toks[2].text});
    } else if (kw == "measure") {
      want(3, "measure <id> Z|X");
      c.ops.push_back(
          MeasureOp{toks[1].text, parse_basis(toks[2].text, line_no, toks[2].column)});
    } else if (kw == "smeasure") {
      want(5, "smeasure <id> ctrl=<id> zero=Z|X one=Z|X");
      auto field = [&](std::size_t i, std::string_view prefix) -> std::string {
        const std::string& s = toks[i].text;
        if (s.rfind(prefix, 0) != 0)
          fail(line_no, toks[i].column, "expected '" + std::string(prefix) + "...'");
        return s.substr(prefix.size());
      };
      SelectiveMeasureOp op;
      op.qubit = toks[1].text;
      op.controller = field(2, "ctrl=");
      op.basis_if_zero = parse_basis(field(3, "zero="), line_no, toks[3].column);
      op.basis_if_one = parse_basis(field(4, "one="), line_no, toks[4].column);
      c.ops.push_back(op);
    } else if (kw == "output") {
      want(2, "output <id>");
      c.outputs.push_back(toks[1].text);
    } else {
      fail(line_no, toks[0].column, "unknown directive '" + kw + "'");
    }
    if (c.ops.size() > ops_before) op_lines.push_back(line_no);
  }
  try {
    validate_circuit(c);
  } catch (const ParseError& e) {
    // validate reports op indices; translate to source positions
    const std::size_t src_line = e.line < op_lines.size() ? op_lines[e.line] : line_no;
    throw ParseError(e.kind, src_line, 1, e.detail);
  }
  return c;
}

std::string print_circuit(const Circuit& c) {
  std::ostringstream os;
  os << "# .qc circuit\n";
  os << "# qubits " << c.qubits.size() << " ops " << c.ops.size() << "\n";
  for (const auto& q : c.qubits) os << (c.is_input(q) ? "input " : "qubit ") << q << "\n";
  for (const auto& op : c.ops) {
    if (const auto* in = std::get_if<InitOp>(&op)) {
      os << "init " << in->qubit << " " << to_string(in->state) << "\n";
    } else if (const auto* g = std::get_if<GateOp>(&op)) {
      os << to_string(g->kind) << " " << g->qubit << "\n";
    } else if (const auto* r = std::get_if<RotationOp>(&op)) {
      os << to_string(r->axis) << " " << r->qubit << " " << r->angle.str() << "\n";
    } else if (const auto* x = std::get_if<CnotOp>(&op)) {
      os << "cnot " << x->control << " " << x->target << "\n";
    } else if (const auto* m = std::get_if<MeasureOp>(&op)) {
      os << "measure " << m->qubit << " " << to_string(m->basis) << "\n";
    } else if (const auto* sm = std::get_if<SelectiveMeasureOp>(&op)) {
      os << "smeasure " << sm->qubit << " ctrl=" << sm->controller
         << " zero=" << to_string(sm->basis_if_zero) << " one=" << to_string(sm->basis_if_one)
         << "\n";
    }
  }
  for (const auto& q : c.outputs) os << "output " << q << "\n";
  return os.str();
}

Circuit load_circuit_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open circuit file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_circuit(ss.str());
}

bool circuits_equal(const Circuit& a, const Circuit& b) {
  if (a.qubits != b.qubits || a.inputs != b.inputs || a.outputs != b.outputs) return false;
  if (a.ops.size() != b.ops.size()) return false;
  for (std::size_t i = 0; i < a.ops.size(); ++i) {
    const Operation& x = a.ops[i];
    const Operation& y = b.ops[i];
    if (x.index() != y.index()) return false;
    bool eq = std::visit(
        [&](const auto& ox) {
          using T = std::decay_t<decltype(ox)>;
          const auto& oy = std::get<T>(y);
          if constexpr (std::is_same_v<T, InitOp>)
            return ox.qubit == oy.qubit && ox.state == oy.state;
          else if constexpr (std::is_same_v<T, GateOp>)
            return ox.qubit == oy.qubit && ox.kind == oy.kind;
          else if constexpr (std::is_same_v<T, RotationOp>)
            return ox.qubit == oy.qubit && ox.axis == oy.axis && ox.angle == oy.angle;
          else if constexpr (std::is_same_v<T, CnotOp>)
            return ox.control == oy.control && ox.target == oy.target;
          else if constexpr (std::is_same_v<T, MeasureOp>)
            return ox.qubit == oy.qubit && ox.basis == oy.basis;
          else
            return ox.qubit == oy.qubit && ox.controller == oy.controller &&
                   ox.basis_if_zero == oy.basis_if_zero && ox.basis_if_one == oy.basis_if_one;
        },
        x);
    if (!eq) return false;
  }
  return true;
}

}  // namespace dforge
