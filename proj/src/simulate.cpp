#include "qsynth/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "qsynth/error.hpp"
#include "qsynth/stats.hpp"

namespace qsynth {
namespace {

using cd = std::complex<double>;

struct Mat2 {
  cd a, b, c, d;  // [[a, b], [c, d]]
};

Mat2 matrix_of(const Gate& g) {
  const cd i{0.0, 1.0};
  switch (g.kind) {
    case GateKind::X: return {0, 1, 1, 0};
    case GateKind::Z: return {1, 0, 0, -1};
    case GateKind::H: {
      const double r = 1.0 / std::sqrt(2.0);
      return {r, r, r, -r};
    }
    case GateKind::RX: {
      const double h = *g.angle / 2.0;
      return {std::cos(h), -i * std::sin(h), -i * std::sin(h), std::cos(h)};
    }
    case GateKind::RY: {
      const double h = *g.angle / 2.0;
      return {std::cos(h), -std::sin(h), std::sin(h), std::cos(h)};
    }
    case GateKind::RZ: {
      const double h = *g.angle / 2.0;
      return {std::polar(1.0, -h), 0, 0, std::polar(1.0, h)};
    }
    case GateKind::SX: return {cd{0.5, 0.5}, cd{0.5, -0.5}, cd{0.5, -0.5}, cd{0.5, 0.5}};
    case GateKind::SXdg: return {cd{0.5, -0.5}, cd{0.5, 0.5}, cd{0.5, 0.5}, cd{0.5, -0.5}};
    case GateKind::Measure: break;
  }
  throw Error(ErrorCode::InvalidArgument, "no matrix for measurement");
}

// Plain product; std::complex multiplication takes a slow inf/NaN recovery path.
inline cd mul(cd x, cd y) {
  return {x.real() * y.real() - x.imag() * y.imag(), x.real() * y.imag() + x.imag() * y.real()};
}

}  // namespace

Statevector Statevector::basis(int num_qubits, std::uint64_t index) {
  Statevector sv;
  sv.num_qubits = num_qubits;
  sv.amps.assign(std::size_t{1} << num_qubits, cd{0.0, 0.0});
  sv.amps.at(index) = 1.0;
  return sv;
}

double Statevector::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amps) s += std::norm(a);
  return s;
}

std::vector<double> Statevector::probabilities() const {
  std::vector<double> p(amps.size());
  for (std::size_t i = 0; i < amps.size(); ++i) p[i] = std::norm(amps[i]);
  return p;
}

std::vector<double> Statevector::marginal(const std::vector<Qubit>& qubits) const {
  std::vector<double> out(std::size_t{1} << qubits.size(), 0.0);
  for (std::size_t i = 0; i < amps.size(); ++i) {
    std::size_t key = 0;
    for (Qubit q : qubits) key = (key << 1) | ((i >> (num_qubits - 1 - static_cast<int>(q))) & 1u);
    out[key] += std::norm(amps[i]);
  }
  return out;
}

void run_reversible_inplace(const Circuit& c, std::vector<std::uint8_t>& bits) {
  if (bits.size() != c.num_qubits()) throw Error(ErrorCode::InvalidArgument, "input width mismatch");
  for (const auto& g : c.gates()) {
    if (g.kind == GateKind::Measure) continue;
    if (g.kind != GateKind::X) throw Error(ErrorCode::NonClassicalGate, to_string(g.kind));
    bool fire = true;
    for (const auto& ctl : g.controls) {
      if ((bits[ctl.qubit] != 0) != ctl.positive) {
        fire = false;
        break;
      }
    }
    if (fire) bits[g.targets[0]] ^= 1u;
  }
}

std::string run_reversible(const Circuit& c, const std::string& input) {
  std::vector<std::uint8_t> bits(input.size());
  for (std::size_t k = 0; k < input.size(); ++k) {
    if (input[k] != '0' && input[k] != '1') throw Error(ErrorCode::InvalidArgument, "not a bitstring");
    bits[k] = input[k] == '1';
  }
  run_reversible_inplace(c, bits);
  std::string out(bits.size(), '0');
  for (std::size_t k = 0; k < bits.size(); ++k)
    if (bits[k]) out[k] = '1';
  return out;
}

void apply_gate(Statevector& sv, const Gate& g) {
  if (g.kind == GateKind::Measure) return;
  const Mat2 m = matrix_of(g);
  const int n = sv.num_qubits;
  auto bit = [n](Qubit q) { return std::size_t{1} << (n - 1 - static_cast<int>(q)); };
  const std::size_t tbit = bit(g.targets[0]);
  std::size_t cval = 0;
  // Enumerate only indices with the target clear and every control fixed.
  std::vector<std::size_t> fixed{tbit};
  for (const auto& ctl : g.controls) {
    fixed.push_back(bit(ctl.qubit));
    if (ctl.positive) cval |= bit(ctl.qubit);
  }
  std::sort(fixed.begin(), fixed.end());
  // Indices below the lowest fixed bit form contiguous runs.
  const std::size_t run = fixed.front();
  const std::size_t blocks = (sv.amps.size() >> fixed.size()) / run;
  const bool diagonal = m.b == cd{} && m.c == cd{};
  cd* amps = sv.amps.data();
  for (std::size_t blk = 0; blk < blocks; ++blk) {
    std::size_t base = blk * run;
    for (std::size_t f : fixed) base = ((base & ~(f - 1)) << 1) | (base & (f - 1));
    cd* lo = amps + (base | cval);
    cd* hi = lo + tbit;
    if (g.kind == GateKind::X) {
      std::swap_ranges(lo, lo + run, hi);
    } else if (diagonal) {
      for (std::size_t r = 0; r < run; ++r) {
        lo[r] = mul(lo[r], m.a);
        hi[r] = mul(hi[r], m.d);
      }
    } else {
      for (std::size_t r = 0; r < run; ++r) {
        const cd a0 = lo[r], a1 = hi[r];
        lo[r] = mul(m.a, a0) + mul(m.b, a1);
        hi[r] = mul(m.c, a0) + mul(m.d, a1);
      }
    }
  }
}

void apply_circuit(Statevector& sv, const Circuit& c) {
  if (static_cast<std::size_t>(sv.num_qubits) != c.num_qubits())
    throw Error(ErrorCode::InvalidArgument, "state width mismatch");
  for (const auto& g : c.gates()) apply_gate(sv, g);
}

Statevector run_statevector(const Circuit& c, std::uint64_t initial, std::size_t max_qubits) {
  if (c.num_qubits() > max_qubits)
    throw Error(ErrorCode::TooManyQubits, std::to_string(c.num_qubits()) + " qubits > cap " + std::to_string(max_qubits));
  Statevector sv = Statevector::basis(static_cast<int>(c.num_qubits()), initial);
  apply_circuit(sv, c);
  return sv;
}

CountHistogram sample(const std::vector<double>& probs, int num_bits, std::uint64_t shots, std::uint64_t seed) {
  if (shots < 1) throw Error(ErrorCode::InvalidArgument, "shots must be >= 1");
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) cdf[i] = acc += probs[i];
  std::vector<std::uint64_t> counts(probs.size(), 0);
  Rng rng(seed);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
    if (idx >= counts.size()) idx = counts.size() - 1;
    // Skip zero-width bins that upper_bound can land on at the top edge.
    while (idx > 0 && probs[idx] == 0.0) --idx;
    ++counts[idx];
  }
  return CountHistogram::from_dense(num_bits, counts, seed);
}

CountHistogram sample(const Statevector& sv, std::uint64_t shots, std::uint64_t seed) {
  return sample(sv.probabilities(), sv.num_qubits, shots, seed);
}

CountHistogram sample(const Circuit& c, std::uint64_t shots, std::uint64_t seed) {
  return sample(run_statevector(c), shots, seed);
}

Calibration calibrate_shots(const Pmf& pmf, const Circuit& c, const CalibrateOptions& opts) {
  const Statevector sv = run_statevector(c);
  if (sv.amps.size() != pmf.p.size()) throw Error(ErrorCode::InvalidArgument, "PMF size does not match circuit");
  const std::vector<double> probs = sv.probabilities();
  std::uint64_t seed = opts.seed;
  for (std::uint64_t shots = std::max<std::uint64_t>(1, opts.start_shots); shots <= opts.max_shots; shots *= 2) {
    const CountHistogram h = sample(probs, sv.num_qubits, shots, seed++);
    const GTest g = g_statistic(h.dense(), pmf.p);
    if (g.expected_zero_observed_positive) continue;
    if (g.per_shot() < opts.threshold) {
      Calibration cal;
      cal.tested_shots = shots;
      cal.shots = static_cast<std::uint64_t>(std::ceil(static_cast<double>(shots) * opts.margin));
      cal.g_per_shot = g.per_shot();
      cal.similarity = similarity(g.per_shot());
      return cal;
    }
  }
  throw Error(ErrorCode::NonConvergent, "G did not fall below threshold within " + std::to_string(opts.max_shots) + " shots");
}

}  // namespace qsynth
