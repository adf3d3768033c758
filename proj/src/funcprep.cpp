#include "qsynth/funcprep.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <unordered_map>

#include "qsynth/error.hpp"

namespace qsynth {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t width_mask(int w) { return w >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << w) - 1; }

void require_word_widths(int n, int m) {
  if (n > 63 || m > 64) {
    throw Error(ErrorCode::SizeLimitExceeded,
                "words wider than 64 bits (n=" + std::to_string(n) + ", m=" + std::to_string(m) + ")");
  }
}

void check_cap(int width, std::size_t max_rows, const char* what) {
  if (width >= 63 || (std::uint64_t{1} << width) > max_rows) {
    throw Error(ErrorCode::SizeLimitExceeded, std::string(what) + ": 2^" + std::to_string(width) +
                                                  " rows exceeds cap " + std::to_string(max_rows));
  }
}

struct CubeMask {
  std::uint64_t fixed = 0;  // values of specified input bits
  std::uint64_t dashes = 0;
};

CubeMask cube_mask(const std::string& inputs) {
  CubeMask cm;
  const int n = static_cast<int>(inputs.size());
  for (int k = 0; k < n; ++k) {
    std::uint64_t bit = std::uint64_t{1} << (n - 1 - k);
    if (inputs[k] == '1') cm.fixed |= bit;
    else if (inputs[k] == '-') cm.dashes |= bit;
  }
  return cm;
}

std::uint64_t output_word(const std::string& outputs) {
  std::uint64_t w = 0;
  for (char c : outputs) w = (w << 1) | (c == '1' ? 1u : 0u);
  return w;
}

// Visits every minterm of the cube.
template <class F>
void for_each_minterm(const CubeMask& cm, F&& f) {
  std::uint64_t s = 0;
  do {
    f(cm.fixed | s);
    s = (s - cm.dashes) & cm.dashes;
  } while (s != 0);
}

}  // namespace

int Pmf::num_qubits() const { return p.empty() ? 0 : std::countr_zero(p.size()); }

bool TruthTable::complete() const {
  return num_inputs < 63 && entries.size() == (std::size_t{1} << num_inputs);
}

bool TruthTable::injective() const {
  std::vector<std::uint64_t> outs;
  outs.reserve(entries.size());
  for (const auto& e : entries) outs.push_back(e.second);
  std::sort(outs.begin(), outs.end());
  return std::adjacent_find(outs.begin(), outs.end()) == outs.end();
}

bool TruthTable::bijective() const { return num_inputs == num_outputs && complete() && injective(); }

std::optional<std::uint64_t> TruthTable::lookup(std::uint64_t input) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), input,
                             [](const auto& e, std::uint64_t x) { return e.first < x; });
  if (it == entries.end() || it->first != input) return std::nullopt;
  return it->second;
}

std::vector<std::uint64_t> TruthTable::dense() const {
  if (!complete()) throw Error(ErrorCode::NotComplete, "table has undefined inputs");
  std::vector<std::uint64_t> out(entries.size());
  for (const auto& [x, y] : entries) out[x] = y;
  return out;
}

TruthTable TruthTable::from_dense(int width, const std::vector<std::uint64_t>& outputs) {
  TruthTable t{width, width, {}};
  t.entries.reserve(outputs.size());
  for (std::size_t x = 0; x < outputs.size(); ++x) t.entries.emplace_back(x, outputs[x]);
  return t;
}

PlaTable expand(const PlaTable& table, std::size_t max_rows) {
  PlaTable out = table;
  out.rows.clear();
  out.declared_products.reset();
  std::size_t total = 0;
  for (const auto& c : table.rows) {
    int q = static_cast<int>(std::count(c.inputs.begin(), c.inputs.end(), '-'));
    if (q >= 63 || (total += std::size_t{1} << q) > max_rows) {
      throw Error(ErrorCode::SizeLimitExceeded, "expansion exceeds " + std::to_string(max_rows) + " rows");
    }
  }
  out.rows.reserve(total);
  for (const auto& c : table.rows) {
    std::vector<std::size_t> dash_pos;
    for (std::size_t k = 0; k < c.inputs.size(); ++k)
      if (c.inputs[k] == '-') dash_pos.push_back(k);
    const std::size_t count = std::size_t{1} << dash_pos.size();
    for (std::size_t s = 0; s < count; ++s) {
      Cube e = c;
      for (std::size_t d = 0; d < dash_pos.size(); ++d) {
        // First dash is the most significant position of the enumeration.
        bool one = (s >> (dash_pos.size() - 1 - d)) & 1u;
        e.inputs[dash_pos[d]] = one ? '1' : '0';
      }
      out.rows.push_back(std::move(e));
    }
  }
  return out;
}

PlaTable assign_dont_cares(const PlaTable& table) {
  PlaTable out = table;
  for (auto& c : out.rows) std::replace(c.outputs.begin(), c.outputs.end(), '-', '0');
  return out;
}

TruthTable to_truth_table(const PlaTable& table, bool fill_absent) {
  TruthTableOptions o;
  o.fill_absent = fill_absent;
  return to_truth_table(table, o);
}

TruthTable to_truth_table(const PlaTable& table, const TruthTableOptions& opts) {
  const int n = table.num_inputs, m = table.num_outputs;
  require_word_widths(n, m);
  const bool xor_merge = table.is_esop();
  TruthTable t{n, m, {}};

  const bool dense = n < 63 && (std::uint64_t{1} << n) <= opts.max_rows;
  if (opts.fill_absent && !dense) check_cap(n, opts.max_rows, "fill");

  if (dense) {
    const std::size_t size = std::size_t{1} << n;
    std::vector<std::uint64_t> out(size, 0);
    std::vector<char> defined(size, 0);
    for (const auto& c : table.rows) {
      const std::uint64_t y = output_word(c.outputs);
      for_each_minterm(cube_mask(c.inputs), [&](std::uint64_t x) {
        out[x] = xor_merge ? (out[x] ^ y) : (out[x] | y);
        defined[x] = 1;
      });
    }
    for (std::size_t x = 0; x < size; ++x)
      if (defined[x] || opts.fill_absent) t.entries.emplace_back(x, out[x]);
    return t;
  }

  std::unordered_map<std::uint64_t, std::uint64_t> acc;
  std::size_t total = 0;
  for (const auto& c : table.rows) {
    const CubeMask cm = cube_mask(c.inputs);
    const int q = std::popcount(cm.dashes);
    if (q >= 63 || (total += std::size_t{1} << q) > opts.max_rows) {
      throw Error(ErrorCode::SizeLimitExceeded, "expansion exceeds " + std::to_string(opts.max_rows) + " rows");
    }
    const std::uint64_t y = output_word(c.outputs);
    for_each_minterm(cm, [&](std::uint64_t x) {
      auto& slot = acc[x];
      slot = xor_merge ? (slot ^ y) : (slot | y);
    });
  }
  t.entries.assign(acc.begin(), acc.end());
  std::sort(t.entries.begin(), t.entries.end());
  return t;
}

RttResult make_one_to_one(const TruthTable& table, std::size_t max_rows) {
  const int n = table.num_inputs, m = table.num_outputs;
  std::unordered_map<std::uint64_t, std::size_t> seen;
  std::size_t n_dup = 0;
  for (const auto& e : table.entries) n_dup = std::max(n_dup, ++seen[e.second]);

  RttResult r;
  r.original_n = n;
  r.original_m = m;
  r.max_duplicates = n_dup;
  r.garbage_count = n_dup <= 1 ? 0 : static_cast<int>(std::bit_width(n_dup - 1));
  r.ancilla_count = std::max(0, r.garbage_count + m - n);
  const int width = std::max(n + r.ancilla_count, m + r.garbage_count);
  check_cap(width, max_rows, "one-to-one embedding");

  if (width == n && width == m && n_dup <= 1) {
    r.table = table;
    return r;
  }

  r.table = TruthTable{width, width, {}};
  r.table.entries.reserve(table.entries.size());
  const int in_shift = width - n, out_shift = width - m;
  std::unordered_map<std::uint64_t, std::uint64_t> next_garbage;
  // Garbage values are handed out in input order within each output group.
  for (const auto& [x, y] : table.entries) {
    const std::uint64_t g = next_garbage[y]++;
    r.table.entries.emplace_back(x << in_shift, (y << out_shift) | g);
  }
  return r;
}

TruthTable make_onto(const TruthTable& table, OntoStrategy strategy, std::optional<std::uint64_t> seed,
                     std::size_t max_rows) {
  const int n = table.num_inputs;
  if (n != table.num_outputs) throw Error(ErrorCode::WidthMismatch, "onto embedding needs n == m");
  check_cap(n, max_rows, "onto embedding");
  const std::size_t size = std::size_t{1} << n;

  std::vector<std::int64_t> image(size, -1);
  std::vector<char> used(size, 0);
  for (const auto& [x, y] : table.entries) {
    if (used[y]) throw Error(ErrorCode::NotInjective, "output word repeated");
    used[y] = 1;
    image[x] = static_cast<std::int64_t>(y);
  }

  std::vector<std::uint64_t> free_dom, free_rng;
  if (strategy == OntoStrategy::HammingMin) {
    for (std::uint64_t x = 0; x < size; ++x) {
      if (image[x] < 0 && !used[x]) {
        image[x] = static_cast<std::int64_t>(x);
        used[x] = 1;
      }
    }
  }
  for (std::uint64_t x = 0; x < size; ++x) {
    if (image[x] < 0) free_dom.push_back(x);
    if (!used[x]) free_rng.push_back(x);
  }

  if (strategy == OntoStrategy::RandomFill) {
    if (seed) {
      std::mt19937_64 rng(*seed);
      std::shuffle(free_rng.begin(), free_rng.end(), rng);
    }
    for (std::size_t i = 0; i < free_dom.size(); ++i) image[free_dom[i]] = static_cast<std::int64_t>(free_rng[i]);
  } else {
    // free_rng stays sorted, so the first minimum found is the smallest value.
    for (std::uint64_t x : free_dom) {
      std::size_t best = 0;
      int best_d = 65;
      for (std::size_t j = 0; j < free_rng.size(); ++j) {
        int d = std::popcount(x ^ free_rng[j]);
        if (d < best_d) {
          best_d = d;
          best = j;
          if (d == 1) break;
        }
      }
      image[x] = static_cast<std::int64_t>(free_rng[best]);
      free_rng.erase(free_rng.begin() + static_cast<std::ptrdiff_t>(best));
    }
  }

  std::vector<std::uint64_t> out(size);
  for (std::size_t x = 0; x < size; ++x) out[x] = static_cast<std::uint64_t>(image[x]);
  return TruthTable::from_dense(n, out);
}

double fixedpoint01(std::uint64_t word, int word_width) { return std::ldexp(static_cast<double>(word), -word_width); }

double fixedpoint04(std::uint64_t word, int word_width) {
  return std::ldexp(static_cast<double>(word), -(word_width - 2));
}

double floatlike_decode(double significand, int exponent, int word_width, bool hidden_bit) {
  if (hidden_bit) {
    if (exponent >= word_width) return 0.0;  // the zero word
    significand += 2.0;
  }
  return std::ldexp(significand, -exponent);
}

NormalizedWords normalize(const std::vector<std::uint64_t>& words, int m, NormScheme scheme,
                          const NormalizeOptions& opts) {
  if (words.empty()) throw Error(ErrorCode::EmptyInput, "no words to normalize");
  if (m < 1 || m > 52) throw Error(ErrorCode::InvalidArgument, "word width must be in [1,52]");
  const std::uint64_t mask = width_mask(m);
  for (auto w : words)
    if (w & ~mask) throw Error(ErrorCode::ValueOutOfRange, "word wider than " + std::to_string(m) + " bits");

  NormalizedWords nw;
  nw.scheme = scheme;
  nw.word_width = m;
  nw.hidden_bit = opts.hidden_bit;
  switch (scheme) {
    case NormScheme::Factor: {
      const std::uint64_t vmax = *std::max_element(words.begin(), words.end());
      if (vmax == 0) throw Error(ErrorCode::AllZeroWithFactor, "v_max = 0");
      const double f = kTwoPi / static_cast<double>(opts.strict_halfopen ? vmax + 1 : vmax);
      bool aliased = false;
      for (auto w : words) {
        double v = static_cast<double>(w) * f;
        if (v >= kTwoPi) {
          v -= kTwoPi;
          aliased = true;
        }
        nw.values.push_back(v);
      }
      if (aliased) nw.warnings.push_back("v_max maps to 2*pi and aliases to 0; consider strict_halfopen");
      break;
    }
    case NormScheme::FixedPoint01:
      for (auto w : words) nw.values.push_back(fixedpoint01(w, m));
      break;
    case NormScheme::FixedPoint04:
      if (m < 2) throw Error(ErrorCode::InvalidArgument, "fixedpoint04 needs m >= 2");
      for (auto w : words) nw.values.push_back(fixedpoint04(w, m));
      break;
    case NormScheme::FloatLike: {
      if (m < 3) throw Error(ErrorCode::InvalidArgument, "floatlike needs m >= 3");
      for (auto w : words) {
        const int z = w == 0 ? m : std::countl_zero(w) - (64 - m);
        nw.z_max = std::max(nw.z_max, z);
        double s = fixedpoint04((w << z) & mask, m);
        if (opts.hidden_bit && w != 0) s -= 2.0;
        nw.significands.push_back(s);
        nw.exponents.push_back(z);
      }
      for (std::size_t j = 0; j < words.size(); ++j) {
        nw.values.push_back(nw.significands[j]);
        nw.values.push_back(kTwoPi * nw.exponents[j] / (nw.z_max + 1));
      }
      break;
    }
  }
  return nw;
}

Pmf normalize_pmf(const std::vector<double>& bins, PmfMode mode) {
  if (bins.empty() || !std::has_single_bit(bins.size()))
    throw Error(ErrorCode::NotPowerOfTwo, "bin count " + std::to_string(bins.size()));
  double total = 0.0;
  for (double x : bins) {
    if (x < 0.0 && mode == PmfMode::Probabilities) throw Error(ErrorCode::ValueOutOfRange, "negative bin");
    total += mode == PmfMode::Amplitudes ? x * x : x;
  }
  if (total <= 0.0) throw Error(ErrorCode::AllZero, "all bins are zero");
  Pmf out;
  out.p.reserve(bins.size());
  for (double x : bins) out.p.push_back((mode == PmfMode::Amplitudes ? x * x : x) / total);
  return out;
}

}  // namespace qsynth
