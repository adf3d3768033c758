#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsynth/circuit.hpp"
#include "qsynth/pla.hpp"

namespace qsynth {

struct GroverSpec {
  int num_qubits = 0;  // database width n, N = 2^n
  PlaTable predicate;  // m = 1; minterms not covered are non-solutions
  int iterations = 0;
  std::uint64_t shots = 1024;
};

/// Indices of the satisfying minterms.
std::vector<std::uint64_t> grover_solutions(const GroverSpec& spec);

/// Qubits 0..n-1 hold the database index, qubit n is the kickback target
/// prepared in |->. Each iteration is the ESOP oracle followed by inversion
/// about the mean; all data qubits are measured at the end.
Circuit build_grover(const GroverSpec& spec);

/// sin^2((2k+1) theta/2) with sin(theta/2) = sqrt(M/N).
double success_probability(std::uint64_t n_states, std::uint64_t m_solutions, int k);

/// Mass on the solution states after running the circuit (statevector).
double simulated_success(const GroverSpec& spec);

struct SweepRow {
  int k = 0;
  double p_analytic = 0.0;
  double p_simulated = 0.0;
  std::uint64_t shots = 0;
  std::uint64_t hits = 0;
};

std::vector<SweepRow> iteration_sweep(const GroverSpec& spec, int k_max, std::uint64_t seed = 1);
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// floor(pi/4 sqrt(N/M)), the usual iteration estimate.
int naive_iterations(std::uint64_t n_states, std::uint64_t m_solutions);

/// Six-bit card encoding: two suit bits (clubs 00, hearts 01, diamonds 10,
/// spades 11) then four value bits (ace = 1 ... king = 13). Leaving a field
/// empty matches every encoding of it, including the unused values.
PlaTable card_predicate(std::optional<std::string> suit, std::optional<int> value);

}  // namespace qsynth
