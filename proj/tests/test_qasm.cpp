#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "qsynth/encoding.hpp"
#include "qsynth/error.hpp"
#include "qsynth/esop.hpp"
#include "qsynth/optimize.hpp"
#include "qsynth/pla.hpp"
#include "qsynth/qasm.hpp"
#include "qsynth/simulate.hpp"

using namespace qsynth;
using std::numbers::pi;

namespace {

bool contains(const std::string& s, const std::string& what) { return s.find(what) != std::string::npos; }

Circuit random_circuit(int n, std::mt19937_64& rng) {
  Circuit c(static_cast<std::size_t>(n));
  std::uniform_real_distribution<double> ang(-pi, pi);
  for (int i = 0; i < 30; ++i) {
    const auto t = static_cast<Qubit>(rng() % n);
    std::vector<Control> ctl;
    for (int q = 0; q < n; ++q)
      if (static_cast<Qubit>(q) != t && rng() % 3 == 0) ctl.push_back({static_cast<Qubit>(q), rng() % 2 == 0});
    switch (rng() % 8) {
      case 0: c.add(Gate::x(t, ctl)); break;
      case 1: c.add(Gate::h(t)); break;
      case 2: c.add(Gate::rx(t, ang(rng), ctl)); break;
      case 3: c.add(Gate::ry(t, ang(rng), ctl)); break;
      case 4: c.add(Gate::rz(t, ang(rng), ctl)); break;
      case 5: c.add(Gate::z(t, ctl)); break;
      case 6: c.add(Gate::sxdg(t, ctl)); break;
      default: c.add(Gate::sx(t, ctl)); break;
    }
  }
  return c;
}

// Compares a and b on basis inputs, extra qubits in b starting at |0>.
double max_diff(const Circuit& a, const Circuit& b) {
  const int extra = static_cast<int>(b.num_qubits() - a.num_qubits());
  double worst = 0.0;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << a.num_qubits()); x += 3) {
    const Statevector u = run_statevector(a, x), v = run_statevector(b, x << extra);
    for (std::size_t i = 0; i < u.amps.size(); ++i) worst = std::max(worst, std::abs(u.amps[i] - v.amps[i << extra]));
  }
  return worst;
}

}  // namespace

TEST_CASE("emitted statements") {
  Circuit x(1);
  x.add(Gate::x(0));
  const std::string q = emit_qasm(x, Gateset::Natural);
  CHECK(q.rfind("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n", 0) == 0);
  CHECK(contains(q, "qreg q[1];"));
  CHECK(contains(q, "x q[0];"));
  CHECK_FALSE(contains(q, "creg"));

  Circuit t(3);
  t.add(Gate::ccx(0, 1, 2));
  t.add(Gate::measure({0, 1, 2}));
  const std::string tq = emit_qasm(t, Gateset::Natural);
  CHECK(contains(tq, "ccx q[0],q[1],q[2];"));
  CHECK(contains(tq, "creg c[3];"));
  CHECK(contains(tq, "measure q[2] -> c[2];"));
}

TEST_CASE("uniform gate set") {
  Circuit t(3);
  t.add(Gate::ccx(0, 1, 2));
  CHECK_THROWS_AS(emit_qasm(t, Gateset::Uniform), Error);
  const std::string u = emit_qasm(lower_to_uniform(t), Gateset::Uniform);
  CHECK_FALSE(contains(u, "ccx"));
  CHECK_FALSE(contains(u, "gate "));
  const Circuit back = parse_qasm(u);
  CHECK(max_controls(back) <= 1);
}

TEST_CASE("parser edges") {
  CHECK(parse_qasm("OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\n").gates().empty());
  CHECK_THROWS_AS(parse_qasm("OPENQASM 2.0;\nqreg q[2];\nfoo q[0];\n"), Error);
  const Circuit c = parse_qasm("OPENQASM 2.0;\nqreg q[1];\nrz(pi/2) q[0];\nrx(-3*pi/4) q[0];\n");
  REQUIRE(c.gates().size() == 2);
  CHECK(*c.gates()[0].angle == doctest::Approx(pi / 2));
  CHECK(*c.gates()[1].angle == doctest::Approx(-3 * pi / 4));
}

TEST_CASE("round trips: byte-stable and re-simulate") {
  std::mt19937_64 rng(91);
  std::vector<Circuit> circuits;
  for (int i = 0; i < 30; ++i) circuits.push_back(random_circuit(2 + i % 4, rng));
  circuits.push_back(synth_esop(read_pla_file(std::string(QSYNTH_BENCHMARKS) + "/squar5.pla")));
  circuits.push_back(synth_amplitude(named_pmf("bimodal")));
  for (const auto& c : circuits) {
    for (Gateset gs : {Gateset::Natural, Gateset::Uniform}) {
      const Circuit src = gs == Gateset::Uniform ? lower_to_uniform(c) : c;
      const std::string e1 = emit_qasm(src, gs);
      const Circuit back = parse_qasm(e1);
      CHECK(emit_qasm(back, gs) == e1);
      if (back.num_qubits() <= 14) CHECK(max_diff(src, back) < 1e-12);
    }
  }
}
