#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qsynth/circuit.hpp"
#include "qsynth/pla.hpp"

namespace qsynth {

/// Cube list under XOR semantics. Output fields are binary.
struct EsopSpec {
  int num_inputs = 0;
  int num_outputs = 0;
  std::vector<Cube> cubes;

  /// XOR of the outputs of every cube whose input field matches `input`.
  std::uint64_t evaluate(std::uint64_t input) const;
};

struct EsopOptions {
  bool minimize = true;
};

/// Cover-style tables are first made disjoint per output, so XOR and OR
/// agree; `.type esop` tables are taken verbatim. Output dashes read as 0.
EsopSpec to_esop(const PlaTable& table, const EsopOptions& opts = {});

/// XOR-cancels identical cubes and merges distance-1 pairs until nothing
/// changes, one output column at a time.
EsopSpec minimize_esop(const EsopSpec& spec);

/// Pairs of row indices whose input cubes intersect and share a hot output.
/// Used to flag tables whose rows are meant as OR.
std::vector<std::pair<std::size_t, std::size_t>> overlapping_cubes(const PlaTable& table);

/// n + m qubits; one X per (cube, hot output bit) with polarity-tagged
/// controls on the cube's specified inputs.
Circuit synth_esop(const EsopSpec& spec);

/// Convenience: to_esop followed by synth_esop.
Circuit synth_esop(const PlaTable& table, const EsopOptions& opts = {});

}  // namespace qsynth
