#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qsynth {

using Qubit = std::uint32_t;

/// CZ is a Z with one control; SX/SXdg are the square root of X and its
/// adjoint. Toffoli is X with two controls.
enum class GateKind { X, H, Z, RX, RY, RZ, SX, SXdg, Measure };

struct Control {
  Qubit qubit = 0;
  bool positive = true;

  bool operator==(const Control&) const = default;
};

struct Gate {
  GateKind kind = GateKind::X;
  std::vector<Control> controls;
  std::vector<Qubit> targets;
  std::optional<double> angle;

  bool operator==(const Gate&) const = default;

  bool is_rotation() const { return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ; }
  bool has_negative_control() const;
  /// X with any number of controls (the classical reversible subset).
  bool is_classical() const { return kind == GateKind::X; }

  static Gate x(Qubit t, std::vector<Control> controls = {});
  static Gate h(Qubit t);
  static Gate z(Qubit t, std::vector<Control> controls = {});
  static Gate rx(Qubit t, double angle, std::vector<Control> controls = {});
  static Gate ry(Qubit t, double angle, std::vector<Control> controls = {});
  static Gate rz(Qubit t, double angle, std::vector<Control> controls = {});
  static Gate rot(GateKind kind, Qubit t, double angle, std::vector<Control> controls = {});
  static Gate sx(Qubit t, std::vector<Control> controls = {});
  static Gate sxdg(Qubit t, std::vector<Control> controls = {});
  static Gate cx(Qubit c, Qubit t) { return x(t, {{c, true}}); }
  static Gate ccx(Qubit c0, Qubit c1, Qubit t) { return x(t, {{c0, true}, {c1, true}}); }
  static Gate measure(std::vector<Qubit> qubits);
};

enum class QubitRole { Input, Output, Ancilla, Garbage, Address, Data, Work };

/// A flat gate list over a fixed qubit register. Qubit 0 is the most
/// significant bit of a basis-state index.
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(std::size_t num_qubits, QubitRole role = QubitRole::Work);

  std::size_t num_qubits() const { return roles_.size(); }
  const std::vector<Gate>& gates() const { return gates_; }
  const std::vector<QubitRole>& roles() const { return roles_; }

  /// Validates indices, target/control disjointness and angle presence.
  void add(Gate g);
  void append(const Circuit& other);
  Qubit add_qubit(QubitRole role);
  void set_role(Qubit q, QubitRole role);
  void reserve(std::size_t n) { gates_.reserve(n); }

  bool operator==(const Circuit&) const = default;

 private:
  std::vector<QubitRole> roles_;
  std::vector<Gate> gates_;
};

struct Metrics {
  std::size_t gate_count = 0;
  std::size_t complexity = 0;
  std::size_t depth = 0;
  std::size_t qubit_count = 0;
  std::size_t parameterized_gate_count = 0;
};

std::size_t complexity(const Circuit& c);
std::size_t depth(const Circuit& c);
std::size_t parameterized_gate_count(const Circuit& c);
std::size_t max_controls(const Circuit& c);
Metrics metrics(const Circuit& c);

/// Replaces each negative control by X on either side of the gate.
Circuit lower_negative_controls(const Circuit& c);

/// Maps every qubit q to perm[q]; the result has the same register size.
Circuit relabel(const Circuit& c, const std::vector<Qubit>& perm);

std::string to_string(GateKind k);

}  // namespace qsynth
