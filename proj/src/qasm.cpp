#include "qsynth/qasm.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <set>
#include <vector>

#include "qsynth/error.hpp"
#include "qsynth/optimize.hpp"

namespace qsynth {
namespace {

// Definitions for names outside qelib1.inc, in emission order.
const std::vector<std::pair<std::string, std::string>>& macros() {
  static const std::vector<std::pair<std::string, std::string>> m = {
      {"sx", "gate sx a { h a; s a; h a; }"},
      {"sxdg", "gate sxdg a { h a; sdg a; h a; }"},
      {"csx", "gate csx a,b { h b; cu1(pi/2) a,b; h b; }"},
      {"csxdg", "gate csxdg a,b { h b; cu1(-pi/2) a,b; h b; }"},
      {"crx", "gate crx(theta) a,b { h b; crz(theta) a,b; h b; }"},
      {"cry", "gate cry(theta) a,b { ry(theta/2) b; cx a,b; ry(-theta/2) b; cx a,b; }"},
  };
  return m;
}

std::string gate_name(const Gate& g) {
  const std::size_t k = g.controls.size();
  std::string base = to_string(g.kind);
  if (k == 0) return base;
  if (k == 1) {
    if (g.kind == GateKind::X) return "cx";
    if (g.kind == GateKind::Z) return "cz";
    return "c" + base;
  }
  if (k == 2 && g.kind == GateKind::X) return "ccx";
  return {};
}

std::string format_angle(double a) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", a);
  return buf;
}

// Ladders whatever the macro vocabulary cannot express, then lowers polarity.
Circuit stage_natural(const Circuit& c) {
  return lower_negative_controls(decompose_mcx(decompose_controlled(c), McxMode::ToTrueToffoli));
}

void check_uniform(const Gate& g) {
  const bool ok = g.kind == GateKind::Measure || (g.controls.empty() && g.kind != GateKind::Z && g.kind != GateKind::SX &&
                                                  g.kind != GateKind::SXdg) ||
                  (g.kind == GateKind::X && g.controls.size() == 1 && g.controls[0].positive);
  if (!ok) throw Error(ErrorCode::UnsupportedGateForGateset, to_string(g.kind) + " with " +
                                                              std::to_string(g.controls.size()) + " controls");
}

// ---- parsing ----

struct Cursor {
  std::string_view s;
  std::size_t i = 0;

  void skip_ws() {
    while (i < s.size()) {
      if (std::isspace(static_cast<unsigned char>(s[i]))) {
        ++i;
      } else if (s.substr(i, 2) == "//") {
        while (i < s.size() && s[i] != '\n') ++i;
      } else {
        break;
      }
    }
  }
  bool eof() {
    skip_ws();
    return i >= s.size();
  }
  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++i;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  std::string ident() {
    skip_ws();
    std::size_t j = i;
    while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '.')) ++j;
    if (j == i) fail("expected identifier");
    std::string out(s.substr(i, j - i));
    i = j;
    return out;
  }
  long integer() {
    skip_ws();
    long v = 0;
    auto [p, ec] = std::from_chars(s.data() + i, s.data() + s.size(), v);
    if (ec != std::errc()) fail("expected integer");
    i = static_cast<std::size_t>(p - s.data());
    return v;
  }
  [[noreturn]] void fail(const std::string& what) const {
    std::size_t line = 1;
    for (std::size_t k = 0; k < i && k < s.size(); ++k) line += s[k] == '\n';
    throw Error(ErrorCode::UnsupportedStatement, "line " + std::to_string(line) + ": " + what);
  }

  // expr := term (('+'|'-') term)* ; term := unary (('*'|'/') unary)*
  double expr() {
    double v = term();
    for (;;) {
      if (accept('+')) v += term();
      else if (accept('-')) v -= term();
      else return v;
    }
  }
  double term() {
    double v = unary();
    for (;;) {
      if (accept('*')) v *= unary();
      else if (accept('/')) v /= unary();
      else return v;
    }
  }
  double unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    if (accept('(')) {
      double v = expr();
      expect(')');
      return v;
    }
    skip_ws();
    if (s.substr(i, 2) == "pi") {
      i += 2;
      return std::numbers::pi;
    }
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data() + i, s.data() + s.size(), v);
    if (ec != std::errc()) fail("expected number");
    i = static_cast<std::size_t>(p - s.data());
    return v;
  }
};

struct Spec {
  GateKind kind;
  int controls;
  bool param;
};

const std::map<std::string, Spec>& gate_table() {
  static const std::map<std::string, Spec> t = {
      {"x", {GateKind::X, 0, false}},      {"cx", {GateKind::X, 1, false}},     {"ccx", {GateKind::X, 2, false}},
      {"h", {GateKind::H, 0, false}},      {"z", {GateKind::Z, 0, false}},      {"cz", {GateKind::Z, 1, false}},
      {"rx", {GateKind::RX, 0, true}},     {"ry", {GateKind::RY, 0, true}},     {"rz", {GateKind::RZ, 0, true}},
      {"crx", {GateKind::RX, 1, true}},    {"cry", {GateKind::RY, 1, true}},    {"crz", {GateKind::RZ, 1, true}},
      {"sx", {GateKind::SX, 0, false}},    {"sxdg", {GateKind::SXdg, 0, false}}, {"csx", {GateKind::SX, 1, false}},
      {"csxdg", {GateKind::SXdg, 1, false}},
  };
  return t;
}

}  // namespace

std::string emit_qasm(const Circuit& input, Gateset gateset) {
  const Circuit c = gateset == Gateset::Natural ? stage_natural(input) : input;
  std::set<std::string> used;
  bool measures = false;
  std::string body;
  for (const auto& g : c.gates()) {
    if (g.kind == GateKind::Measure) {
      measures = true;
      for (Qubit q : g.targets) body += "measure q[" + std::to_string(q) + "] -> c[" + std::to_string(q) + "];\n";
      continue;
    }
    if (gateset == Gateset::Uniform) check_uniform(g);
    const std::string name = gate_name(g);
    if (name.empty()) throw Error(ErrorCode::UnsupportedGateForGateset, "no statement for " + to_string(g.kind));
    used.insert(name);
    body += name;
    if (g.angle) body += "(" + format_angle(*g.angle) + ")";
    body += " ";
    for (const auto& ctl : g.controls) body += "q[" + std::to_string(ctl.qubit) + "],";
    body += "q[" + std::to_string(g.targets[0]) + "];\n";
  }
  std::string out = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
  for (const auto& [name, def] : macros())
    if (used.count(name)) out += def + "\n";
  out += "qreg q[" + std::to_string(c.num_qubits()) + "];\n";
  if (measures) out += "creg c[" + std::to_string(c.num_qubits()) + "];\n";
  return out + body;
}

Circuit parse_qasm(std::string_view text) {
  Cursor cur{text};
  std::vector<Gate> gates;
  long qubits = -1;
  std::string qreg_name;

  auto qubit_ref = [&]() -> Qubit {
    const std::string name = cur.ident();
    if (name != qreg_name) cur.fail("unknown register '" + name + "'");
    cur.expect('[');
    const long idx = cur.integer();
    cur.expect(']');
    if (idx < 0 || idx >= qubits) cur.fail("qubit index out of range");
    return static_cast<Qubit>(idx);
  };

  while (!cur.eof()) {
    const std::string word = cur.ident();
    if (word == "OPENQASM") {
      cur.expr();
      cur.expect(';');
    } else if (word == "include") {
      cur.skip_ws();
      const auto end = text.find(';', cur.i);
      if (end == std::string_view::npos) cur.fail("unterminated include");
      cur.i = end + 1;
    } else if (word == "gate") {
      const std::string name = cur.ident();
      bool known = false;
      for (const auto& m : macros()) known |= m.first == name;
      if (!known) cur.fail("unsupported gate definition '" + name + "'");
      const auto end = text.find('}', cur.i);
      if (end == std::string_view::npos) cur.fail("unterminated gate body");
      cur.i = end + 1;
    } else if (word == "qreg") {
      if (qubits >= 0) cur.fail("only one qreg is supported");
      qreg_name = cur.ident();
      cur.expect('[');
      qubits = cur.integer();
      cur.expect(']');
      cur.expect(';');
    } else if (word == "creg") {
      cur.ident();
      cur.expect('[');
      cur.integer();
      cur.expect(']');
      cur.expect(';');
    } else if (word == "barrier") {
      const auto end = text.find(';', cur.i);
      if (end == std::string_view::npos) cur.fail("unterminated barrier");
      cur.i = end + 1;
    } else if (word == "measure") {
      const Qubit q = qubit_ref();
      cur.skip_ws();
      if (text.substr(cur.i, 2) != "->") cur.fail("expected '->'");
      cur.i += 2;
      cur.ident();
      cur.expect('[');
      cur.integer();
      cur.expect(']');
      cur.expect(';');
      gates.push_back(Gate::measure({q}));
    } else {
      auto it = gate_table().find(word);
      if (it == gate_table().end()) cur.fail("unsupported statement '" + word + "'");
      if (qubits < 0) cur.fail("gate before qreg");
      const Spec spec = it->second;
      Gate g;
      g.kind = spec.kind;
      if (spec.param) {
        cur.expect('(');
        g.angle = cur.expr();
        cur.expect(')');
      }
      for (int k = 0; k < spec.controls; ++k) {
        g.controls.push_back({qubit_ref(), true});
        cur.expect(',');
      }
      g.targets.push_back(qubit_ref());
      cur.expect(';');
      gates.push_back(std::move(g));
    }
  }
  Circuit c(static_cast<std::size_t>(std::max(qubits, 0L)));
  for (auto& g : gates) c.add(std::move(g));
  return c;
}

}  // namespace qsynth
