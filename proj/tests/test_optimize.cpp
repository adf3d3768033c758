#include <algorithm>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "qsynth/encoding.hpp"
#include "qsynth/error.hpp"
#include "qsynth/optimize.hpp"
#include "qsynth/pla.hpp"
#include "qsynth/simulate.hpp"

using namespace qsynth;
using std::numbers::pi;
using State = std::vector<std::complex<double>>;

namespace {

// Applies c to psi on the first n qubits, extra qubits starting in |0>, and
// returns the components whose extra qubits end in |0>.
State embedded(const Circuit& c, int n, const State& psi) {
  const int extra = static_cast<int>(c.num_qubits()) - n;
  Statevector sv;
  sv.num_qubits = static_cast<int>(c.num_qubits());
  sv.amps.assign(std::size_t{1} << sv.num_qubits, 0.0);
  for (std::size_t i = 0; i < psi.size(); ++i) sv.amps[i << extra] = psi[i];
  apply_circuit(sv, c);
  State out(psi.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = sv.amps[i << extra];
  return out;
}

// Distance up to one global phase. Small registers are compared column by
// column; wider ones on random states, which separate inequivalent unitaries
// with probability one.
double unitary_distance(const Circuit& a, const Circuit& b, int n) {
  std::vector<State> probes;
  if (n <= 6) {
    for (std::size_t x = 0; x < (std::size_t{1} << n); ++x) {
      State e(std::size_t{1} << n, 0.0);
      e[x] = 1.0;
      probes.push_back(e);
    }
  } else {
    std::mt19937_64 rng(static_cast<std::uint64_t>(n));
    std::normal_distribution<double> nd;
    for (int k = 0; k < 3; ++k) {
      State s(std::size_t{1} << n);
      double norm = 0.0;
      for (auto& z : s) norm += std::norm(z = {nd(rng), nd(rng)});
      for (auto& z : s) z /= std::sqrt(norm);
      probes.push_back(s);
    }
  }
  std::complex<double> phase = 0.0;
  double worst = 0.0;
  for (const auto& psi : probes) {
    const State u = embedded(a, n, psi), v = embedded(b, n, psi);
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (phase == 0.0 && std::abs(u[i]) > 1e-6) phase = v[i] / u[i];
      worst = std::max(worst, std::abs(u[i] * (phase == 0.0 ? 1.0 : phase) - v[i]));
    }
  }
  return worst;
}

Circuit rotation_run(GateKind kind, Qubit target, const std::vector<Qubit>& ctl, const std::vector<double>& angles,
                     std::size_t n) {
  Circuit c(n);
  for (std::uint64_t p = 0; p < angles.size(); ++p) {
    std::vector<Control> cc;
    for (std::size_t b = 0; b < ctl.size(); ++b) cc.push_back({ctl[b], ((p >> (ctl.size() - 1 - b)) & 1u) != 0});
    c.add(Gate::rot(kind, target, angles[p], cc));
  }
  return c;
}

std::size_t count_controls_over(const Circuit& c, std::size_t k) {
  return static_cast<std::size_t>(
      std::count_if(c.gates().begin(), c.gates().end(), [k](const Gate& g) { return g.controls.size() > k; }));
}

}  // namespace

TEST_CASE("double X removal") {
  Circuit a(2);
  a.add(Gate::x(0));
  a.add(Gate::x(0));
  CHECK(remove_double_x(a).gates().empty());

  Circuit b(2);
  b.add(Gate::x(0));
  b.add(Gate::cx(0, 1));
  b.add(Gate::x(0));
  CHECK(remove_double_x(b) == b);

  // Pairs are removed to a fixpoint: X X X X on one qubit around a spectator.
  Circuit c(2);
  c.add(Gate::x(0));
  c.add(Gate::x(0));
  c.add(Gate::h(1));
  c.add(Gate::x(0));
  c.add(Gate::x(0));
  CHECK(remove_double_x(c).gates().size() == 1);
}

TEST_CASE("double X removal shrinks the lowered squar5 memory") {
  const Circuit basis = qrom_pipeline(read_pla_file(std::string(QSYNTH_BENCHMARKS) + "/squar5.pla"), {});
  const Circuit lowered = lower_negative_controls(basis);
  const Circuit reduced = remove_double_x(lowered);
  MESSAGE("squar5 basis: " << lowered.gates().size() << " -> " << reduced.gates().size());
  CHECK(reduced.gates().size() < lowered.gates().size());
  CHECK(unitary_distance(lowered, reduced, 13) < 1e-9);
}

TEST_CASE("Toffoli to five controlled gates") {
  Circuit t(3);
  t.add(Gate::ccx(0, 1, 2));
  const Circuit d = decompose_mcx(t, McxMode::ToffoliTo5Gate);
  CHECK(d.gates().size() == 5);
  CHECK(count_controls_over(d, 1) == 0);
  for (const auto& g : d.gates()) CHECK((g.kind == GateKind::X || g.kind == GateKind::SX || g.kind == GateKind::SXdg));
  CHECK(std::count_if(d.gates().begin(), d.gates().end(), [](const Gate& g) { return g.kind == GateKind::X; }) == 2);
  CHECK(unitary_distance(t, d, 3) < 1e-12);

  Circuit cx(2);
  cx.add(Gate::cx(0, 1));
  CHECK(decompose_mcx(cx, McxMode::ToffoliTo5Gate) == cx);
  CHECK(decompose_mcx(cx, McxMode::ToTrueToffoli) == cx);
}

TEST_CASE("multi-control ladder") {
  Circuit c(5);
  c.add(Gate::x(4, {{0, true}, {1, true}, {2, true}, {3, true}}));
  const Circuit d = decompose_mcx(c, McxMode::ToTrueToffoli);
  CHECK(d.num_qubits() == 8);
  CHECK(count_controls_over(d, 2) == 0);
  std::size_t toffoli = 0, cnot = 0;
  for (const auto& g : d.gates()) (g.controls.size() == 2 ? toffoli : cnot) += 1;
  CHECK(toffoli == 6);
  CHECK(cnot == 1);
  CHECK(unitary_distance(c, d, 5) < 1e-12);

  // Negative controls and several multi-control gates share one ancilla pool.
  Circuit e(6);
  e.add(Gate::x(5, {{0, false}, {1, true}, {2, true}, {3, false}, {4, true}}));
  e.add(Gate::x(0, {{5, true}, {1, false}, {2, true}}));
  const Circuit f = decompose_mcx(e, McxMode::ToTrueToffoli);
  CHECK(f.num_qubits() == 6 + 4);
  CHECK(unitary_distance(e, f, 6) < 1e-12);
  const Circuit g = decompose_mcx(e, McxMode::ToffoliTo5Gate);
  CHECK(count_controls_over(g, 1) == 0);
  CHECK(unitary_distance(e, g, 6) < 1e-12);
}

TEST_CASE("controlled rotations decompose and lower to the uniform set") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ang(-pi, pi);
  for (int trial = 0; trial < 40; ++trial) {
    Circuit c(4);
    c.add(Gate::h(0));
    c.add(Gate::h(1));
    c.add(Gate::rx(3, ang(rng), {{0, true}, {1, false}, {2, true}}));
    c.add(Gate::ry(2, ang(rng), {{0, true}}));
    c.add(Gate::rz(1, ang(rng), {{3, false}, {2, true}}));
    c.add(Gate::z(0, {{1, true}}));
    c.add(Gate::sx(3, {{0, true}}));
    c.add(Gate::x(3, {{0, true}, {1, true}, {2, true}}));
    const Circuit u = lower_to_uniform(c);
    CHECK(count_controls_over(u, 1) == 0);
    for (const auto& g : u.gates()) {
      const bool ok = g.kind == GateKind::RX || g.kind == GateKind::RY || g.kind == GateKind::RZ || g.kind == GateKind::H ||
                      (g.kind == GateKind::X);
      CHECK(ok);
      for (const auto& ctl : g.controls) CHECK(ctl.positive);
      if (!g.controls.empty()) CHECK(g.kind == GateKind::X);
    }
    CHECK(unitary_distance(c, u, 4) < 1e-9);
    CHECK(unitary_distance(c, decompose_controlled(c), 4) < 1e-9);
  }
}

TEST_CASE("graycode: single RX is untouched") {
  Circuit c(1);
  c.add(Gate::rx(0, 0.7));
  CHECK(graycode_optimize(c) == c);
}

TEST_CASE("graycode: four doubly controlled RX become eight gates") {
  const Circuit c = rotation_run(GateKind::RX, 2, {0, 1}, {0.3, 1.1, -0.4, 2.0}, 3);
  const Circuit g = graycode_optimize(c);
  CHECK(g.gates().size() == 8);
  CHECK(max_controls(g) <= 1);
  CHECK(unitary_distance(c, g, 3) < 1e-9);
}

TEST_CASE("graycode: random runs, k <= 4, all rotation axes") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> ang(-pi, pi);
  for (int k = 1; k <= 4; ++k) {
    for (GateKind kind : {GateKind::RX, GateKind::RY, GateKind::RZ}) {
      std::vector<Qubit> ctl;
      for (int q = 0; q < k; ++q) ctl.push_back(static_cast<Qubit>(q + 1));
      std::shuffle(ctl.begin(), ctl.end(), rng);
      std::vector<double> angles(std::size_t{1} << k);
      for (auto& a : angles) a = ang(rng);
      Circuit c(static_cast<std::size_t>(k + 1));
      for (int q = 0; q <= k; ++q) c.add(Gate::h(static_cast<Qubit>(q)));
      c.append(rotation_run(kind, 0, ctl, angles, static_cast<std::size_t>(k + 1)));
      const Circuit g = graycode_optimize(c);
      CHECK(max_controls(g) <= 1);
      CHECK(unitary_distance(c, g, k + 1) < 1e-9);
      if (k >= 2) CHECK(lower_to_uniform(g).gates().size() <= lower_to_uniform(c).gates().size());
    }
  }
}

TEST_CASE("graycode: incomplete runs are padded; other regions untouched") {
  Circuit c(3);
  c.add(Gate::x(0));
  c.add(Gate::rx(2, 0.5, {{0, true}, {1, false}}));
  c.add(Gate::rx(2, 0.9, {{0, false}, {1, false}}));
  c.add(Gate::h(1));
  const Circuit g = graycode_optimize(c);
  CHECK(g.gates().front() == Gate::x(0));
  CHECK(g.gates().back() == Gate::h(1));
  CHECK(max_controls(g) <= 1);
  CHECK(unitary_distance(c, g, 3) < 1e-9);
}

TEST_CASE("graycode on amplitude and angle circuits") {
  const Circuit amp = synth_amplitude(named_pmf("arbitrary"));
  const Circuit g = graycode_optimize(amp);
  CHECK(max_controls(g) <= 1);
  const auto p = run_statevector(g).probabilities();
  const Pmf pmf = named_pmf("arbitrary");
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::abs(p[i] - pmf.p[i]) < 1e-10);
  CHECK(lower_to_uniform(g).gates().size() < lower_to_uniform(amp).gates().size());

  QromOptions o;
  o.encoding = Encoding::ImprovedAngle;
  const Circuit ang = qrom_pipeline(read_pla_file(std::string(QSYNTH_BENCHMARKS) + "/squar5.pla"), o);
  const Circuit ga = graycode_optimize(ang);
  CHECK(max_controls(ga) <= 1);
  CHECK(unitary_distance(ang, ga, 6) < 1e-9);
}

TEST_CASE("symmetry detection and optimization") {
  CHECK(has_symmetry(named_pmf("uniform"), Symmetry::Duplicate));
  CHECK(has_symmetry(named_pmf("triangle"), Symmetry::Mirror));
  CHECK_FALSE(has_symmetry(named_pmf("arbitrary"), Symmetry::Duplicate));
  CHECK_THROWS_AS(symmetric_optimize(named_pmf("arbitrary"), Symmetry::Mirror), Error);

  const Circuit two = symmetric_optimize(Pmf{{0.5, 0.5}}, Symmetry::Duplicate);
  CHECK(two.gates().size() == 1);
  CHECK(max_controls(two) == 0);

  for (const char* name : {"triangle", "bimodal", "uniform"}) {
    const Pmf pmf = named_pmf(name);
    const Circuit s = symmetric_optimize(pmf, Symmetry::Auto);
    const auto p = run_statevector(s).probabilities();
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::abs(p[i] - pmf.p[i]) < 1e-10);
    CHECK(parameterized_gate_count(s) * 10 <= parameterized_gate_count(synth_amplitude(pmf)) * 6);
  }
}

TEST_CASE("symmetric optimization on random symmetric PMFs") {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 2; n <= 6; ++n) {
    for (Symmetry kind : {Symmetry::Duplicate, Symmetry::Mirror}) {
      const std::size_t half = std::size_t{1} << (n - 1);
      std::vector<double> bins(2 * half);
      for (std::size_t i = 0; i < half; ++i) bins[i] = u(rng) + 0.01;
      for (std::size_t i = 0; i < half; ++i) bins[half + i] = kind == Symmetry::Duplicate ? bins[i] : bins[half - 1 - i];
      const Pmf pmf = normalize_pmf(bins);
      REQUIRE(has_symmetry(pmf, kind));
      const Circuit s = symmetric_optimize(pmf, kind);
      CHECK(parameterized_gate_count(s) < parameterized_gate_count(synth_amplitude(pmf)));
      const auto p = run_statevector(s).probabilities();
      for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::abs(p[i] - pmf.p[i]) < 1e-10);
    }
  }
}

TEST_CASE("pass pipeline by name") {
  Circuit c(5);
  c.add(Gate::x(0));
  c.add(Gate::x(0));
  c.add(Gate::x(4, {{0, true}, {1, false}, {2, true}}));
  const Circuit d = apply_passes(c, {"double-x", "mcx-ladder", "lower-negatives"});
  CHECK(count_controls_over(d, 2) == 0);
  CHECK(unitary_distance(c, d, 5) < 1e-12);
  CHECK_THROWS_AS(apply_passes(c, {"bogus"}), Error);
}

TEST_CASE("passes never grow the gate count where promised") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    Circuit c(4);
    for (int i = 0; i < 20; ++i) {
      const auto t = static_cast<Qubit>(rng() % 4);
      if (rng() % 2)
        c.add(Gate::x(t));
      else
        c.add(Gate::cx(static_cast<Qubit>((t + 1) % 4), t));
    }
    CHECK(remove_double_x(c).gates().size() <= c.gates().size());
    CHECK(unitary_distance(c, remove_double_x(c), 4) < 1e-12);
  }
}
