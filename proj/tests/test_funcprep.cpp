#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "doctest.h"
#include "qsynth/error.hpp"
#include "qsynth/funcprep.hpp"
#include "qsynth/pla.hpp"

using namespace qsynth;
using std::numbers::pi;

namespace {

PlaTable table(int n, int m, std::vector<Cube> rows) {
  PlaTable t;
  t.num_inputs = n;
  t.num_outputs = m;
  t.rows = std::move(rows);
  return t;
}

TruthTable partial(int n, int m, std::vector<std::pair<std::uint64_t, std::uint64_t>> e) {
  TruthTable t{n, m, std::move(e)};
  std::sort(t.entries.begin(), t.entries.end());
  return t;
}

// Output under OR semantics straight from the cubes, used as an oracle.
std::optional<std::uint64_t> cube_eval(const PlaTable& t, std::uint64_t x) {
  std::optional<std::uint64_t> out;
  for (const auto& c : t.rows) {
    bool hit = true;
    for (int k = 0; k < t.num_inputs && hit; ++k) {
      const char s = c.inputs[static_cast<std::size_t>(k)];
      const int bit = (x >> (t.num_inputs - 1 - k)) & 1;
      hit = s == '-' || s - '0' == bit;
    }
    if (!hit) continue;
    std::uint64_t y = 0;
    for (char s : c.outputs) y = (y << 1) | (s == '1');
    out = out.value_or(0) | y;
  }
  return out;
}

}  // namespace

TEST_CASE("expand") {
  const PlaTable e = expand(table(3, 2, {{"1-1", "10"}}));
  REQUIRE(e.rows.size() == 2);
  CHECK(e.rows[0] == Cube{"101", "10"});
  CHECK(e.rows[1] == Cube{"111", "10"});

  const PlaTable f = expand(table(2, 1, {{"--", "-"}}));
  REQUIRE(f.rows.size() == 4);
  CHECK(f.rows[3] == Cube{"11", "-"});

  CHECK_THROWS_AS(expand(table(4, 1, {{"----", "1"}}), 8), Error);
}

TEST_CASE("assign don't cares") {
  CHECK(assign_dont_cares(table(1, 3, {{"1", "1-0"}})).rows[0].outputs == "100");
  const PlaTable plain = table(1, 2, {{"1", "10"}});
  CHECK(assign_dont_cares(plain) == plain);

  const PlaTable both = assign_dont_cares(expand(table(4, 3, {{"-1--", "-1-"}})));
  CHECK(both.rows.size() == 8);
  for (const auto& r : both.rows) {
    CHECK(r.inputs.find('-') == std::string::npos);
    CHECK(r.outputs == "010");
  }
}

TEST_CASE("expansion preserves the function") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    PlaTable t = table(5, 3, {});
    for (int r = 0; r < 6; ++r) {
      std::string in, out;
      for (int k = 0; k < 5; ++k) in += "01-"[rng() % 3];
      for (int k = 0; k < 3; ++k) out += "01"[rng() % 2];
      t.rows.push_back({in, out});
    }
    const TruthTable tt = to_truth_table(expand(t), false);
    for (std::uint64_t x = 0; x < 32; ++x) CHECK(tt.lookup(x) == cube_eval(t, x));
  }
}

TEST_CASE("truth table merge semantics") {
  const PlaTable cover = table(2, 1, {{"1-", "1"}, {"-1", "1"}});
  const TruthTable c = to_truth_table(cover, false);
  CHECK(c.lookup(3) == 1u);
  CHECK(c.lookup(0) == std::nullopt);
  CHECK(to_truth_table(cover, true).lookup(0) == 0u);

  PlaTable esop = cover;
  esop.type = "esop";
  CHECK(to_truth_table(esop, false).lookup(3) == 0u);
}

TEST_CASE("one-to-one embedding") {
  SUBCASE("injective table is unchanged") {
    const TruthTable t = partial(2, 2, {{0, 3}, {1, 1}, {2, 0}});
    const RttResult r = make_one_to_one(t);
    CHECK(r.garbage_count == 0);
    CHECK(r.ancilla_count == 0);
    CHECK(r.table == t);
  }
  SUBCASE("duplicate outputs get garbage in order") {
    const TruthTable t = partial(2, 2, {{0, 0}, {1, 0}, {2, 1}});
    const RttResult r = make_one_to_one(t);
    CHECK(r.max_duplicates == 2u);
    CHECK(r.garbage_count == 1);
    CHECK(r.ancilla_count == 1);
    CHECK(r.width() == 3);
    CHECK(r.table.injective());
    CHECK(r.table.lookup(0b000) == 0b000u);
    CHECK(r.table.lookup(0b010) == 0b001u);
    CHECK(r.table.lookup(0b100) == 0b010u);
  }
  SUBCASE("three duplicates need two garbage bits") {
    const RttResult r = make_one_to_one(partial(3, 1, {{0, 1}, {1, 1}, {2, 1}, {3, 0}}));
    CHECK(r.garbage_count == 2);
    CHECK(r.ancilla_count == 0);
    CHECK(r.width() == 3);
  }
  SUBCASE("squar5 embeds in nine bits") {
    const PlaTable t = read_pla_file(std::string(QSYNTH_BENCHMARKS) + "/squar5.pla");
    const RttResult r = make_one_to_one(to_truth_table(t, true));
    CHECK(r.garbage_count == 1);
    CHECK(r.width() == 9);
  }
}

TEST_CASE("one-to-one property: injective and projects back") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5), m = 1 + static_cast<int>(rng() % 4);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> e;
    for (std::uint64_t x = 0; x < (1u << n); ++x)
      if (rng() % 4) e.emplace_back(x, rng() % (1u << m));
    if (e.empty()) continue;
    const TruthTable t = partial(n, m, e);
    const RttResult r = make_one_to_one(t);
    CHECK(r.table.injective());
    const int w = r.width();
    for (const auto& [x, y] : t.entries) CHECK((r.table.lookup(x << (w - n)).value() >> (w - m)) == y);
  }
}

TEST_CASE("onto embedding") {
  SUBCASE("bijection is unchanged") {
    const TruthTable t = TruthTable::from_dense(2, {2, 0, 3, 1});
    CHECK(make_onto(t, OntoStrategy::HammingMin) == t);
    CHECK(make_onto(t, OntoStrategy::RandomFill) == t);
  }
  SUBCASE("minimal Hamming distance pick") {
    // 001 is unassigned; 110 and 011 are the only unused values.
    const TruthTable t = partial(3, 3, {{0, 0}, {2, 1}, {3, 2}, {4, 4}, {5, 5}, {6, 7}});
    const TruthTable o = make_onto(t, OntoStrategy::HammingMin);
    CHECK(o.lookup(1) == 0b011u);
    CHECK(o.lookup(7) == 0b110u);
  }
  SUBCASE("random fill pairs in ascending order") {
    const TruthTable o = make_onto(partial(2, 2, {{1, 0}}), OntoStrategy::RandomFill);
    CHECK(o.dense() == std::vector<std::uint64_t>{1, 0, 2, 3});
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(make_onto(partial(2, 2, {{0, 1}, {1, 1}}), OntoStrategy::HammingMin), Error);
    CHECK_THROWS_AS(make_onto(partial(2, 3, {{0, 1}}), OntoStrategy::HammingMin), Error);
  }
}

TEST_CASE("onto property: permutation, and no closer value was left unused") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const std::size_t size = std::size_t{1} << n;
    std::vector<std::uint64_t> perm(size);
    for (std::size_t i = 0; i < size; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> e;
    for (std::size_t x = 0; x < size; ++x)
      if (rng() % 2) e.emplace_back(x, perm[x]);
    const TruthTable t = partial(n, n, e);
    const TruthTable o = make_onto(t, OntoStrategy::HammingMin);
    REQUIRE(o.bijective());
    for (const auto& [x, y] : t.entries) CHECK(o.lookup(x) == y);

    // Replay the greedy order and confirm each pick was a minimum.
    std::set<std::uint64_t> unused;
    for (std::size_t v = 0; v < size; ++v) unused.insert(v);
    for (const auto& kv : t.entries) unused.erase(kv.second);
    for (std::size_t x = 0; x < size; ++x)
      if (!t.lookup(x) && unused.count(x)) unused.erase(x);
    for (std::size_t x = 0; x < size; ++x) {
      if (t.lookup(x) || o.lookup(x) == x) continue;
      const std::uint64_t y = *o.lookup(x);
      for (auto u : unused) CHECK(std::popcount(x ^ y) <= std::popcount(x ^ u));
      unused.erase(y);
    }

    const TruthTable s = make_onto(t, OntoStrategy::RandomFill, trial);
    CHECK(s.bijective());
  }
}

TEST_CASE("normalize: fixed point") {
  CHECK(normalize({0b1100}, 4, NormScheme::FixedPoint04).values[0] == 3.0);
  CHECK(normalize({0b1100}, 4, NormScheme::FixedPoint01).values[0] == 0.75);
}

TEST_CASE("normalize: factor") {
  const NormalizedWords w = normalize({1, 2, 4}, 3, NormScheme::Factor);
  CHECK(w.values[0] == doctest::Approx(pi / 2));
  CHECK(w.values[1] == doctest::Approx(pi));
  CHECK(w.values[2] == doctest::Approx(0.0));
  CHECK(w.warnings.size() == 1);

  NormalizeOptions half;
  half.strict_halfopen = true;
  const NormalizedWords h = normalize({1, 2, 4}, 3, NormScheme::Factor, half);
  CHECK(h.values[2] == doctest::Approx(8 * pi / 5));
  CHECK(h.warnings.empty());

  CHECK_THROWS_AS(normalize({0, 0}, 3, NormScheme::Factor), Error);
  CHECK_THROWS_AS(normalize({}, 3, NormScheme::Factor), Error);
}

TEST_CASE("normalize: floatlike") {
  const NormalizedWords w = normalize({0b00001011}, 8, NormScheme::FloatLike);
  CHECK(w.exponents[0] == 4);
  CHECK(w.significands[0] == 2.75);
  CHECK(floatlike_decode(2.75, 4, 8, false) == 0.171875);

  for (bool hidden : {false, true}) {
    NormalizeOptions o;
    o.hidden_bit = hidden;
    std::vector<std::uint64_t> all(256);
    for (std::uint64_t v = 0; v < 256; ++v) all[v] = v;
    const NormalizedWords f = normalize(all, 8, NormScheme::FloatLike, o);
    CHECK(f.z_max == 8);
    for (std::uint64_t v = 0; v < 256; ++v) {
      CAPTURE(v);
      CHECK(f.significands[v] >= 0.0);
      CHECK(f.significands[v] < 4.0);
      CHECK(floatlike_decode(f.significands[v], f.exponents[v], 8, hidden) == fixedpoint04(v, 8));
      const double phi = f.values[2 * v + 1];
      CHECK(phi >= 0.0);
      CHECK(phi < 2 * pi);
    }
  }
}

TEST_CASE("normalize_pmf") {
  CHECK(normalize_pmf({1, 1, 1, 1}).p == std::vector<double>{0.25, 0.25, 0.25, 0.25});
  const Pmf a = normalize_pmf({3, 1}, PmfMode::Amplitudes);
  CHECK(a.p[0] == doctest::Approx(0.9));
  CHECK(a.p[1] == doctest::Approx(0.1));

  std::vector<double> binom(32, 0.0);
  const double c[] = {1, 5, 10, 10, 5, 1};
  for (int k = 0; k < 6; ++k) binom[k] = c[k];
  const Pmf b = normalize_pmf(binom);
  double s = 0.0;
  for (double x : b.p) s += x;
  CHECK(std::abs(s - 1.0) < 1e-12);
  CHECK(b.p[2] == b.p[3]);

  CHECK_THROWS_AS(normalize_pmf({0, 0}), Error);
  CHECK_THROWS_AS(normalize_pmf({1, 1, 1}), Error);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(16), y(16);
    const double scale = 0.1 + u(rng);
    for (int k = 0; k < 16; ++k) y[k] = scale * (x[k] = u(rng));
    const Pmf p = normalize_pmf(x), q = normalize_pmf(y);
    for (int k = 0; k < 16; ++k) CHECK(std::abs(p.p[k] - q.p[k]) < 1e-12);
  }
}
