#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qsynth {

/// Measurement outcomes keyed by bitstring (first character = first measured
/// qubit). Absent keys have count 0.
struct CountHistogram {
  int num_bits = 0;
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;

  bool operator==(const CountHistogram&) const = default;

  /// Counts indexed by the integer value of the bitstring.
  std::vector<std::uint64_t> dense() const;
  static CountHistogram from_dense(int num_bits, const std::vector<std::uint64_t>& counts, std::uint64_t seed = 0);
};

std::string index_to_bits(std::uint64_t index, int width);
std::uint64_t bits_to_index(const std::string& bits);

std::string histogram_json(const CountHistogram& h);
std::string histogram_csv(const CountHistogram& h);

}  // namespace qsynth
