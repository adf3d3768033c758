#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qsynth/circuit.hpp"
#include "qsynth/funcprep.hpp"
#include "qsynth/pla.hpp"

namespace qsynth {

enum class Encoding { Basis, Angle, ImprovedAngle };

/// Address/word pairs of a read-only memory. Addresses not listed hold 0.
struct QromSpec {
  int address_width = 0;
  int word_width = 0;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
};

/// Address qubits 0..n-1, data qubits n..n+m-1; one fully controlled X per
/// hot data bit of every stored word.
Circuit synth_basis(const QromSpec& spec);

struct AngleOptions {
  /// Pack two consecutive words per address (theta, phi); the address
  /// register shrinks by one qubit.
  bool dense = false;
};

/// n address qubits + 1 data qubit. A stored value v becomes RX(2v) (and a
/// phase value RZ(2v)), so P(data = 1 | address) = sin^2(v). In improved
/// mode `normalized` must come from the floatlike scheme and each address
/// gets RX(2 S_j) followed by RZ(2 phi_j).
Circuit synth_angle(const QromSpec& spec, bool improved, const NormalizedWords& normalized,
                    const AngleOptions& opts = {});

/// Recovers the integer exponent from a stored phase angle.
int decode_exponent(double phi, int z_max);

/// Binary tree of RY angles over a 2^N-bin PMF. Nodes are heap-indexed from
/// 1; node v sits on qubit floor(log2 v).
struct AngleTree {
  int num_qubits = 0;
  std::vector<double> theta;  // theta[v] = arccos sqrt(left mass / mass)
  std::vector<double> mass;   // subtree mass, same indexing

  std::vector<double> leaf_probabilities() const;
};

AngleTree build_angle_tree(const Pmf& pmf);

/// Level-by-level RY cascade: one uncontrolled RY, then 2^l RYs with l
/// controls each. Zero-mass nodes still get an RY(0) so the structure is
/// always 2^N - 1 rotations.
Circuit synth_amplitude(const Pmf& pmf);
Circuit synth_amplitude(const AngleTree& tree);

/// One probability per line, or `bin,height` CSV (an optional header line is
/// skipped). Heights are normalized; the bin count must be a power of two.
Pmf parse_pmf(std::string_view text);
Pmf read_pmf_file(const std::string& path);

/// The five 5-qubit QRNG distributions: uniform, binomial, triangle,
/// bimodal, arbitrary.
Pmf named_pmf(const std::string& name);
std::vector<std::string> named_pmf_list();

struct QromOptions {
  Encoding encoding = Encoding::Basis;
  NormScheme angle_scheme = NormScheme::FixedPoint01;
  bool hidden_bit = false;
  bool dense = false;
  std::size_t max_rows = kDefaultMaxRows;
};

/// Reads the table as a memory image (absent addresses hold 0).
QromSpec qrom_from_table(const PlaTable& table, std::size_t max_rows = kDefaultMaxRows);

Circuit qrom_pipeline(const PlaTable& table, const QromOptions& opts);

}  // namespace qsynth
