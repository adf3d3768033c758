#include "qsynth/encoding.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qsynth/error.hpp"

namespace qsynth {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<Control> spell(std::uint64_t address, int width, Qubit first = 0) {
  std::vector<Control> c;
  c.reserve(static_cast<std::size_t>(width));
  for (int k = 0; k < width; ++k)
    c.push_back({first + static_cast<Qubit>(k), ((address >> (width - 1 - k)) & 1u) != 0});
  return c;
}

void check_addresses(const QromSpec& spec) {
  std::vector<std::uint64_t> a;
  for (const auto& p : spec.pairs) {
    if (spec.address_width < 64 && p.first >> spec.address_width)
      throw Error(ErrorCode::ValueOutOfRange, "address wider than address register");
    a.push_back(p.first);
  }
  std::sort(a.begin(), a.end());
  if (std::adjacent_find(a.begin(), a.end()) != a.end()) throw Error(ErrorCode::DuplicateAddress, "repeated address");
}

void check_angle(double v) {
  if (!(v >= 0.0 && v < kTwoPi)) throw Error(ErrorCode::ValueOutOfRange, "angle outside [0, 2pi)");
}

double parse_number(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw Error(ErrorCode::InvalidArgument, "not a number: '" + std::string(s) + "'");
  return v;
}

}  // namespace

Circuit synth_basis(const QromSpec& spec) {
  check_addresses(spec);
  const int n = spec.address_width, m = spec.word_width;
  Circuit c(static_cast<std::size_t>(n + m), QubitRole::Address);
  for (int j = 0; j < m; ++j) c.set_role(static_cast<Qubit>(n + j), QubitRole::Data);
  for (const auto& [a, x] : spec.pairs) {
    const auto controls = spell(a, n);
    for (int j = 0; j < m; ++j)
      if ((x >> (m - 1 - j)) & 1u) c.add(Gate::x(static_cast<Qubit>(n + j), controls));
  }
  return c;
}

Circuit synth_angle(const QromSpec& spec, bool improved, const NormalizedWords& nw, const AngleOptions& opts) {
  check_addresses(spec);
  const std::size_t words = spec.pairs.size();
  const std::size_t per_word = improved ? 2 : 1;
  if (improved && nw.scheme != NormScheme::FloatLike)
    throw Error(ErrorCode::InvalidArgument, "improved angle encoding needs floatlike normalization");
  if (nw.values.size() != words * per_word)
    throw Error(ErrorCode::InvalidArgument, "normalized value count does not match the memory");
  for (double v : nw.values) check_angle(v);

  if (opts.dense && !improved) {
    const std::size_t slots = (words + 1) / 2;
    const int aw = slots <= 1 ? 0 : static_cast<int>(std::bit_width(slots - 1));
    Circuit c(static_cast<std::size_t>(aw + 1), QubitRole::Address);
    c.set_role(static_cast<Qubit>(aw), QubitRole::Data);
    for (std::size_t j = 0; j < slots; ++j) {
      const auto controls = spell(j, aw);
      const double theta = nw.values[2 * j];
      const double phi = 2 * j + 1 < words ? nw.values[2 * j + 1] : 0.0;
      c.add(Gate::rx(static_cast<Qubit>(aw), 2.0 * theta, controls));
      c.add(Gate::rz(static_cast<Qubit>(aw), 2.0 * phi, controls));
    }
    return c;
  }

  const int n = spec.address_width;
  Circuit c(static_cast<std::size_t>(n + 1), QubitRole::Address);
  const auto data = static_cast<Qubit>(n);
  c.set_role(data, QubitRole::Data);
  for (std::size_t j = 0; j < words; ++j) {
    const auto controls = spell(spec.pairs[j].first, n);
    c.add(Gate::rx(data, 2.0 * nw.values[per_word * j], controls));
    if (improved) c.add(Gate::rz(data, 2.0 * nw.values[per_word * j + 1], controls));
  }
  return c;
}

int decode_exponent(double phi, int z_max) { return static_cast<int>(std::lround(phi * (z_max + 1) / kTwoPi)); }

AngleTree build_angle_tree(const Pmf& pmf) {
  const std::size_t size = pmf.p.size();
  if (size < 2 || !std::has_single_bit(size)) throw Error(ErrorCode::NotPowerOfTwo, "PMF needs 2^N bins, N >= 1");
  double total = 0.0;
  for (double x : pmf.p) {
    if (x < 0.0) throw Error(ErrorCode::NotNormalized, "negative probability");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-9) throw Error(ErrorCode::NotNormalized, "PMF sums to " + std::to_string(total));

  AngleTree t;
  t.num_qubits = std::countr_zero(size);
  t.mass.assign(2 * size, 0.0);
  t.theta.assign(size, 0.0);
  for (std::size_t i = 0; i < size; ++i) t.mass[size + i] = pmf.p[i];
  for (std::size_t v = size - 1; v >= 1; --v) t.mass[v] = t.mass[2 * v] + t.mass[2 * v + 1];
  for (std::size_t v = 1; v < size; ++v) {
    if (t.mass[v] <= 0.0) continue;
    const double f = std::clamp(t.mass[2 * v] / t.mass[v], 0.0, 1.0);
    t.theta[v] = std::acos(std::sqrt(f));
  }
  t.mass.resize(size);
  return t;
}

std::vector<double> AngleTree::leaf_probabilities() const {
  const std::size_t size = std::size_t{1} << num_qubits;
  std::vector<double> out(size);
  for (std::size_t leaf = 0; leaf < size; ++leaf) {
    double p = 1.0;
    std::size_t v = 1;
    for (int l = 0; l < num_qubits; ++l) {
      const bool right = (leaf >> (num_qubits - 1 - l)) & 1u;
      const double c = std::cos(theta[v]);
      p *= right ? 1.0 - c * c : c * c;
      v = 2 * v + (right ? 1 : 0);
    }
    out[leaf] = p;
  }
  return out;
}

Circuit synth_amplitude(const AngleTree& tree) {
  const int n = tree.num_qubits;
  Circuit c(static_cast<std::size_t>(n), QubitRole::Work);
  for (int l = 0; l < n; ++l) {
    const std::size_t first = std::size_t{1} << l;
    for (std::size_t prefix = 0; prefix < first; ++prefix)
      c.add(Gate::ry(static_cast<Qubit>(l), 2.0 * tree.theta[first + prefix], spell(prefix, l)));
  }
  return c;
}

Circuit synth_amplitude(const Pmf& pmf) { return synth_amplitude(build_angle_tree(pmf)); }

Pmf parse_pmf(std::string_view text) {
  std::vector<double> values;
  std::vector<std::pair<long, double>> csv;
  bool first_line = true;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const bool header = first_line && line.find_first_of("abcdefghijklmnopqrstuvwxyz") != std::string_view::npos;
    first_line = false;
    if (header) continue;
    if (auto comma = line.find(','); comma != std::string_view::npos) {
      csv.emplace_back(static_cast<long>(parse_number(line.substr(0, comma))), parse_number(line.substr(comma + 1)));
    } else {
      values.push_back(parse_number(line));
    }
  }
  if (!csv.empty()) {
    if (!values.empty()) throw Error(ErrorCode::InvalidArgument, "mixed PMF line formats");
    values.assign(csv.size(), 0.0);
    std::vector<char> seen(csv.size(), 0);
    for (const auto& [bin, h] : csv) {
      if (bin < 0 || static_cast<std::size_t>(bin) >= csv.size() || seen[static_cast<std::size_t>(bin)])
        throw Error(ErrorCode::InvalidArgument, "bins must be 0..N-1, each once");
      seen[static_cast<std::size_t>(bin)] = 1;
      values[static_cast<std::size_t>(bin)] = h;
    }
  }
  return normalize_pmf(values, PmfMode::Probabilities);
}

Pmf read_pmf_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_pmf(ss.str());
}

std::vector<std::string> named_pmf_list() { return {"uniform", "binomial", "triangle", "bimodal", "arbitrary"}; }

Pmf named_pmf(const std::string& name) {
  std::vector<double> h(32, 0.0);
  if (name == "uniform") {
    std::fill(h.begin(), h.end(), 1.0);
  } else if (name == "binomial") {
    // Coefficients of (x + y)^5 in the first six bins.
    const double c[] = {1, 5, 10, 10, 5, 1};
    std::copy(std::begin(c), std::end(c), h.begin());
  } else if (name == "triangle") {
    for (int x = 0; x < 32; ++x) h[static_cast<std::size_t>(x)] = std::min(x + 1, 32 - x);
  } else if (name == "bimodal") {
    h[6] = h[8] = h[23] = h[25] = 1.0;
    h[7] = h[24] = 3.0;
  } else if (name == "arbitrary") {
    h = {3, 7, 1, 4, 9, 2, 6, 5, 8, 1, 3, 7, 2, 9, 4, 6, 5, 2, 8, 3, 1, 7, 4, 6, 9, 2, 5, 8, 3, 6, 1, 4};
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown PMF '" + name + "'");
  }
  return normalize_pmf(h, PmfMode::Probabilities);
}

QromSpec qrom_from_table(const PlaTable& table, std::size_t max_rows) {
  TruthTableOptions o;
  o.fill_absent = true;
  o.max_rows = max_rows;
  const TruthTable t = to_truth_table(assign_dont_cares(table), o);
  return QromSpec{t.num_inputs, t.num_outputs, t.entries};
}

Circuit qrom_pipeline(const PlaTable& table, const QromOptions& opts) {
  const QromSpec spec = qrom_from_table(table, opts.max_rows);
  if (opts.encoding == Encoding::Basis) return synth_basis(spec);
  std::vector<std::uint64_t> words;
  words.reserve(spec.pairs.size());
  for (const auto& p : spec.pairs) words.push_back(p.second);
  NormalizeOptions no;
  no.hidden_bit = opts.hidden_bit;
  if (opts.encoding == Encoding::ImprovedAngle)
    return synth_angle(spec, true, normalize(words, spec.word_width, NormScheme::FloatLike, no));
  AngleOptions ao;
  ao.dense = opts.dense;
  return synth_angle(spec, false, normalize(words, spec.word_width, opts.angle_scheme, no), ao);
}

}  // namespace qsynth
