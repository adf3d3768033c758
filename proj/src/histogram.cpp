#include "qsynth/histogram.hpp"

#include "json.hpp"

#include "qsynth/error.hpp"

namespace qsynth {

std::string index_to_bits(std::uint64_t index, int width) {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int k = 0; k < width; ++k)
    if ((index >> (width - 1 - k)) & 1u) s[static_cast<std::size_t>(k)] = '1';
  return s;
}

std::uint64_t bits_to_index(const std::string& bits) {
  std::uint64_t v = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw Error(ErrorCode::InvalidArgument, "not a bitstring: " + bits);
    v = (v << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return v;
}

std::vector<std::uint64_t> CountHistogram::dense() const {
  if (num_bits > 30) throw Error(ErrorCode::SizeLimitExceeded, "histogram too wide to densify");
  std::vector<std::uint64_t> out(std::size_t{1} << num_bits, 0);
  for (const auto& [bits, n] : counts) out[bits_to_index(bits)] += n;
  return out;
}

CountHistogram CountHistogram::from_dense(int num_bits, const std::vector<std::uint64_t>& counts, std::uint64_t seed) {
  CountHistogram h;
  h.num_bits = num_bits;
  h.seed = seed;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;
    h.counts[index_to_bits(i, num_bits)] = counts[i];
    h.shots += counts[i];
  }
  return h;
}

std::string histogram_json(const CountHistogram& h) {
  nlohmann::ordered_json j;
  j["shots"] = h.shots;
  j["seed"] = h.seed;
  j["counts"] = nlohmann::ordered_json::object();
  for (const auto& [bits, n] : h.counts) j["counts"][bits] = n;
  return j.dump(2) + "\n";
}

std::string histogram_csv(const CountHistogram& h) {
  std::string out = "bitstring,count\n";
  for (const auto& [bits, n] : h.counts) out += bits + "," + std::to_string(n) + "\n";
  return out;
}

}  // namespace qsynth
