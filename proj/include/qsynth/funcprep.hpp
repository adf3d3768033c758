#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qsynth/pla.hpp"

namespace qsynth {

inline constexpr std::size_t kDefaultMaxRows = std::size_t{1} << 22;

/// Fully specified function over its defined domain. Entries are kept sorted
/// by input word with unique inputs. Bit i of a word is the (width-1-i)-th
/// character of the corresponding PLA field, so the leftmost column is the
/// most significant bit.
struct TruthTable {
  int num_inputs = 0;
  int num_outputs = 0;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> entries;

  bool operator==(const TruthTable&) const = default;

  bool complete() const;
  bool injective() const;
  bool bijective() const;
  std::optional<std::uint64_t> lookup(std::uint64_t input) const;
  /// Output words indexed by input; requires complete().
  std::vector<std::uint64_t> dense() const;
  static TruthTable from_dense(int width, const std::vector<std::uint64_t>& outputs);
};

struct RttResult {
  TruthTable table;  // square, injective; width = max(n+w, m+v)
  int ancilla_count = 0;  // w
  int garbage_count = 0;  // v
  int original_n = 0;
  int original_m = 0;
  std::size_t max_duplicates = 0;  // N_dup

  int width() const { return table.num_inputs; }
};

enum class OntoStrategy { RandomFill, HammingMin };

enum class NormScheme { Factor, FixedPoint01, FixedPoint04, FloatLike };

struct NormalizeOptions {
  bool strict_halfopen = false;  // factor: divide by v_max+1
  bool hidden_bit = false;       // floatlike: drop the leading 1 of S
};

struct NormalizedWords {
  NormScheme scheme = NormScheme::Factor;
  int word_width = 0;
  /// One angle per word, or (S, phi) pairs for floatlike.
  std::vector<double> values;
  std::vector<double> significands;  // floatlike only
  std::vector<int> exponents;        // floatlike only
  int z_max = 0;
  bool hidden_bit = false;
  std::vector<std::string> warnings;
};

enum class PmfMode { Probabilities, Amplitudes };

struct Pmf {
  std::vector<double> p;

  int num_qubits() const;
  bool operator==(const Pmf&) const = default;
};

/// Cube expansion: q input dashes -> 2^q rows. Output dashes are kept.
PlaTable expand(const PlaTable& table, std::size_t max_rows = kDefaultMaxRows);

/// Output dashes become 0.
PlaTable assign_dont_cares(const PlaTable& table);

struct TruthTableOptions {
  /// Give every minterm not covered by any cube the all-zero output.
  bool fill_absent = false;
  std::size_t max_rows = kDefaultMaxRows;
};

/// Expands, assigns output dashes to 0 and merges cubes covering the same
/// minterm: OR for cover-style tables, XOR for `.type esop`.
TruthTable to_truth_table(const PlaTable& table, const TruthTableOptions& opts = {});

TruthTable to_truth_table(const PlaTable& table, bool fill_absent);

RttResult make_one_to_one(const TruthTable& table, std::size_t max_rows = kDefaultMaxRows);

/// `seed` only affects RandomFill; without one the leftover range values are
/// taken in ascending order.
TruthTable make_onto(const TruthTable& table, OntoStrategy strategy, std::optional<std::uint64_t> seed = std::nullopt,
                     std::size_t max_rows = kDefaultMaxRows);

NormalizedWords normalize(const std::vector<std::uint64_t>& words, int word_width, NormScheme scheme,
                          const NormalizeOptions& opts = {});

/// Value of an m-bit word read as b1 b0 . b-1 ... (range [0,4)).
double fixedpoint04(std::uint64_t word, int word_width);
double fixedpoint01(std::uint64_t word, int word_width);

/// Reconstructs S * 2^-E, re-inserting the hidden bit when it was dropped.
double floatlike_decode(double significand, int exponent, int word_width, bool hidden_bit);

Pmf normalize_pmf(const std::vector<double>& bins, PmfMode mode = PmfMode::Probabilities);

}  // namespace qsynth
