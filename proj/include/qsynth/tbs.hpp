#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qsynth/circuit.hpp"
#include "qsynth/funcprep.hpp"

namespace qsynth {

inline constexpr std::size_t kDefaultGateCap = 50000;

/// Positive-polarity Reed-Muller spectrum of a square complete table. Row i
/// is computed on first request from F rows r with r a subset of i.
class RmSpectrum {
 public:
  explicit RmSpectrum(const TruthTable& table);

  int width() const { return width_; }
  std::uint64_t row(std::uint64_t i);
  bool available(std::uint64_t i) const { return have_[i] != 0; }
  std::vector<std::uint64_t> all();

  /// When set, every F row read while computing a spectrum row is appended.
  void set_access_log(std::vector<std::uint64_t>* log) { log_ = log; }

 private:
  int width_;
  std::vector<std::uint64_t> f_;
  std::vector<std::uint64_t> rows_;
  std::vector<char> have_;
  std::vector<std::uint64_t>* log_ = nullptr;
};

/// A = M^n F over GF(2) for a dense output column (butterfly form). The
/// transform is its own inverse, so it also evaluates a PPRM back to F.
std::vector<std::uint64_t> rm_transform(std::vector<std::uint64_t> values);

std::vector<std::uint64_t> rm_spectrum(const TruthTable& table);

struct TbsOptions {
  std::size_t gate_cap = kDefaultGateCap;
  bool keep_snapshots = false;
};

/// Gates in application order (before reversal) plus per-step tables.
struct SynthTrace {
  std::vector<Gate> applied;
  std::vector<std::pair<std::uint64_t, std::vector<std::uint64_t>>> snapshots;  // (pattern, table after step)
  std::size_t rm_fallbacks = 0;
  std::vector<std::string> log;
};

/// Unidirectional transformation-based synthesis on exactly n qubits.
Circuit synth_tbs_basic(const TruthTable& table, const TbsOptions& opts = {}, SynthTrace* trace = nullptr);

/// Spectrum-guided variant. A row step that has no admissible pivot or that
/// would disturb an earlier row is rolled back and done by the basic rule.
Circuit synth_tbs_rm(const TruthTable& table, const TbsOptions& opts = {}, SynthTrace* trace = nullptr);

}  // namespace qsynth
