#pragma once

#include <string>
#include <string_view>

#include "qsynth/circuit.hpp"

namespace qsynth {

enum class Gateset {
  /// Native vocabulary plus in-file macros (crx, cry, sx, csx, ...). Negative
  /// controls are lowered and gates wider than the macros are laddered with
  /// appended ancilla before emission.
  Natural,
  /// Only rx, ry, rz, cx, x, h, measure. The circuit must already be lowered
  /// (see lower_to_uniform).
  Uniform,
};

std::string emit_qasm(const Circuit& c, Gateset gateset = Gateset::Natural);

/// Reads the subset produced by emit_qasm, plus `pi` arithmetic in angles.
Circuit parse_qasm(std::string_view text);

}  // namespace qsynth
