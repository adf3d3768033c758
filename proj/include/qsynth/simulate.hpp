#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qsynth/circuit.hpp"
#include "qsynth/funcprep.hpp"
#include "qsynth/histogram.hpp"

namespace qsynth {

inline constexpr std::size_t kDefaultMaxQubits = 20;

struct Statevector {
  int num_qubits = 0;
  std::vector<std::complex<double>> amps;

  static Statevector basis(int num_qubits, std::uint64_t index);
  double norm_squared() const;
  std::vector<double> probabilities() const;
  /// Distribution over the listed qubits (first listed = most significant).
  std::vector<double> marginal(const std::vector<Qubit>& qubits) const;
};

/// Classical propagation of X/CX/MCX circuits. Bitstring character q is qubit q.
std::string run_reversible(const Circuit& c, const std::string& input);
void run_reversible_inplace(const Circuit& c, std::vector<std::uint8_t>& bits);

/// Measurement gates are ignored: the returned state is the pre-measurement one.
Statevector run_statevector(const Circuit& c, std::uint64_t initial = 0, std::size_t max_qubits = kDefaultMaxQubits);
void apply_gate(Statevector& sv, const Gate& g);
void apply_circuit(Statevector& sv, const Circuit& c);

/// Seeded multinomial draw over `probs` (index i -> bitstring of width bits).
CountHistogram sample(const std::vector<double>& probs, int num_bits, std::uint64_t shots, std::uint64_t seed);
CountHistogram sample(const Statevector& sv, std::uint64_t shots, std::uint64_t seed);
CountHistogram sample(const Circuit& c, std::uint64_t shots, std::uint64_t seed);

struct CalibrateOptions {
  double threshold = 1e-3;
  std::uint64_t start_shots = 1000;
  double margin = 1.5;
  std::uint64_t max_shots = std::uint64_t{1} << 26;
  std::uint64_t seed = 1;
};

struct Calibration {
  std::uint64_t shots = 0;         // returned (margin applied)
  std::uint64_t tested_shots = 0;  // first count that passed
  double g_per_shot = 0.0;         // at tested_shots
  double similarity = 0.0;         // at tested_shots
};

/// Doubles the shot count until the per-shot G-statistic of a fresh sample
/// drops below the threshold, then applies the margin.
Calibration calibrate_shots(const Pmf& pmf, const Circuit& c, const CalibrateOptions& opts = {});

/// Seeded uniform doubles in [0,1). mt19937_64 output is fixed by the
/// standard; the double conversion is done here so results do not depend on
/// the library's distribution implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qsynth
