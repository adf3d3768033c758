#include "qsynth/circuit.hpp"

#include <algorithm>

#include "qsynth/error.hpp"

namespace qsynth {

bool Gate::has_negative_control() const {
  return std::any_of(controls.begin(), controls.end(), [](const Control& c) { return !c.positive; });
}

Gate Gate::x(Qubit t, std::vector<Control> controls) { return Gate{GateKind::X, std::move(controls), {t}, {}}; }
Gate Gate::h(Qubit t) { return Gate{GateKind::H, {}, {t}, {}}; }
Gate Gate::z(Qubit t, std::vector<Control> controls) { return Gate{GateKind::Z, std::move(controls), {t}, {}}; }
Gate Gate::rot(GateKind kind, Qubit t, double angle, std::vector<Control> controls) {
  return Gate{kind, std::move(controls), {t}, angle};
}
Gate Gate::rx(Qubit t, double a, std::vector<Control> c) { return rot(GateKind::RX, t, a, std::move(c)); }
Gate Gate::ry(Qubit t, double a, std::vector<Control> c) { return rot(GateKind::RY, t, a, std::move(c)); }
Gate Gate::rz(Qubit t, double a, std::vector<Control> c) { return rot(GateKind::RZ, t, a, std::move(c)); }
Gate Gate::sx(Qubit t, std::vector<Control> c) { return Gate{GateKind::SX, std::move(c), {t}, {}}; }
Gate Gate::sxdg(Qubit t, std::vector<Control> c) { return Gate{GateKind::SXdg, std::move(c), {t}, {}}; }
Gate Gate::measure(std::vector<Qubit> qubits) { return Gate{GateKind::Measure, {}, std::move(qubits), {}}; }

Circuit::Circuit(std::size_t num_qubits, QubitRole role) : roles_(num_qubits, role) {}

void Circuit::add(Gate g) {
  const std::size_t n = num_qubits();
  if (g.targets.empty()) throw Error(ErrorCode::InvalidArgument, "gate without targets");
  if (g.kind != GateKind::Measure && g.targets.size() != 1)
    throw Error(ErrorCode::InvalidArgument, "unitary gates take exactly one target");
  if (g.kind == GateKind::Measure && !g.controls.empty())
    throw Error(ErrorCode::InvalidArgument, "measurement cannot be controlled");
  if (g.is_rotation() != g.angle.has_value())
    throw Error(ErrorCode::InvalidArgument, "angle present iff gate is a rotation");
  for (Qubit t : g.targets)
    if (t >= n) throw Error(ErrorCode::InvalidArgument, "target out of range");
  for (std::size_t i = 0; i < g.controls.size(); ++i) {
    const Qubit q = g.controls[i].qubit;
    if (q >= n) throw Error(ErrorCode::InvalidArgument, "control out of range");
    if (std::find(g.targets.begin(), g.targets.end(), q) != g.targets.end())
      throw Error(ErrorCode::InvalidArgument, "control overlaps target");
    for (std::size_t j = 0; j < i; ++j)
      if (g.controls[j].qubit == q) throw Error(ErrorCode::InvalidArgument, "repeated control");
  }
  gates_.push_back(std::move(g));
}

void Circuit::append(const Circuit& other) {
  if (other.num_qubits() > num_qubits()) throw Error(ErrorCode::InvalidArgument, "appending a wider circuit");
  for (const auto& g : other.gates_) add(g);
}

Qubit Circuit::add_qubit(QubitRole role) {
  roles_.push_back(role);
  return static_cast<Qubit>(roles_.size() - 1);
}

void Circuit::set_role(Qubit q, QubitRole role) { roles_.at(q) = role; }

std::size_t complexity(const Circuit& c) {
  std::size_t total = 0;
  for (const auto& g : c.gates()) total += g.controls.size() + g.targets.size();
  return total;
}

std::size_t depth(const Circuit& c) {
  std::vector<std::size_t> level(c.num_qubits(), 0);
  std::size_t best = 0;
  for (const auto& g : c.gates()) {
    std::size_t l = 0;
    for (auto q : g.targets) l = std::max(l, level[q]);
    for (auto ctl : g.controls) l = std::max(l, level[ctl.qubit]);
    ++l;
    for (auto q : g.targets) level[q] = l;
    for (auto ctl : g.controls) level[ctl.qubit] = l;
    best = std::max(best, l);
  }
  return best;
}

std::size_t parameterized_gate_count(const Circuit& c) {
  return static_cast<std::size_t>(
      std::count_if(c.gates().begin(), c.gates().end(), [](const Gate& g) { return g.is_rotation(); }));
}

std::size_t max_controls(const Circuit& c) {
  std::size_t m = 0;
  for (const auto& g : c.gates()) m = std::max(m, g.controls.size());
  return m;
}

Metrics metrics(const Circuit& c) {
  return Metrics{c.gates().size(), complexity(c), depth(c), c.num_qubits(), parameterized_gate_count(c)};
}

Circuit lower_negative_controls(const Circuit& c) {
  Circuit out(0);
  for (auto r : c.roles()) out.add_qubit(r);
  out.reserve(c.gates().size());
  for (const auto& g : c.gates()) {
    if (!g.has_negative_control()) {
      out.add(g);
      continue;
    }
    Gate pos = g;
    for (auto& ctl : pos.controls) ctl.positive = true;
    for (const auto& ctl : g.controls)
      if (!ctl.positive) out.add(Gate::x(ctl.qubit));
    out.add(pos);
    for (const auto& ctl : g.controls)
      if (!ctl.positive) out.add(Gate::x(ctl.qubit));
  }
  return out;
}

Circuit relabel(const Circuit& c, const std::vector<Qubit>& perm) {
  if (perm.size() != c.num_qubits()) throw Error(ErrorCode::InvalidArgument, "permutation size mismatch");
  Circuit out(c.num_qubits());
  for (std::size_t q = 0; q < perm.size(); ++q) out.set_role(perm[q], c.roles()[q]);
  for (Gate g : c.gates()) {
    for (auto& t : g.targets) t = perm.at(t);
    for (auto& ctl : g.controls) ctl.qubit = perm.at(ctl.qubit);
    out.add(std::move(g));
  }
  return out;
}

std::string to_string(GateKind k) {
  switch (k) {
    case GateKind::X: return "x";
    case GateKind::H: return "h";
    case GateKind::Z: return "z";
    case GateKind::RX: return "rx";
    case GateKind::RY: return "ry";
    case GateKind::RZ: return "rz";
    case GateKind::SX: return "sx";
    case GateKind::SXdg: return "sxdg";
    case GateKind::Measure: return "measure";
  }
  return "?";
}

}  // namespace qsynth
