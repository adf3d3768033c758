#include "qsynth/grover.hpp"

#include <cmath>
#include <numbers>

#include "qsynth/error.hpp"
#include "qsynth/esop.hpp"
#include "qsynth/funcprep.hpp"
#include "qsynth/simulate.hpp"

namespace qsynth {
namespace {

void validate(const GroverSpec& spec) {
  if (spec.num_qubits < 2) throw Error(ErrorCode::InvalidArgument, "Grover needs at least 2 data qubits");
  if (spec.predicate.num_inputs != spec.num_qubits || spec.predicate.num_outputs != 1)
    throw Error(ErrorCode::WidthMismatch, "predicate must have n inputs and one output");
  if (spec.iterations < 0) throw Error(ErrorCode::InvalidArgument, "negative iteration count");
}

std::vector<Qubit> data_qubits(int n) {
  std::vector<Qubit> q;
  for (int i = 0; i < n; ++i) q.push_back(static_cast<Qubit>(i));
  return q;
}

}  // namespace

std::vector<std::uint64_t> grover_solutions(const GroverSpec& spec) {
  validate(spec);
  std::vector<std::uint64_t> out;
  for (const auto& [x, y] : to_truth_table(spec.predicate, false).entries)
    if (y & 1u) out.push_back(x);
  const std::uint64_t n_states = std::uint64_t{1} << spec.num_qubits;
  if (out.empty()) throw Error(ErrorCode::NoSolutions, "predicate is never true");
  if (out.size() == n_states) throw Error(ErrorCode::AllSolutions, "predicate is always true");
  return out;
}

Circuit build_grover(const GroverSpec& spec) {
  grover_solutions(spec);
  const int n = spec.num_qubits;
  const auto target = static_cast<Qubit>(n);
  const Circuit oracle = synth_esop(spec.predicate);

  Circuit c(static_cast<std::size_t>(n + 1), QubitRole::Input);
  c.set_role(target, QubitRole::Ancilla);
  c.add(Gate::x(target));
  c.add(Gate::h(target));
  for (int q = 0; q < n; ++q) c.add(Gate::h(static_cast<Qubit>(q)));

  std::vector<Control> all_but_last;
  for (int q = 0; q + 1 < n; ++q) all_but_last.push_back({static_cast<Qubit>(q), true});
  const auto last = static_cast<Qubit>(n - 1);
  for (int k = 0; k < spec.iterations; ++k) {
    c.append(oracle);
    for (int q = 0; q < n; ++q) c.add(Gate::h(static_cast<Qubit>(q)));
    for (int q = 0; q < n; ++q) c.add(Gate::x(static_cast<Qubit>(q)));
    c.add(Gate::h(last));
    c.add(Gate::x(last, all_but_last));
    c.add(Gate::h(last));
    for (int q = 0; q < n; ++q) c.add(Gate::x(static_cast<Qubit>(q)));
    for (int q = 0; q < n; ++q) c.add(Gate::h(static_cast<Qubit>(q)));
  }
  c.add(Gate::measure(data_qubits(n)));
  return c;
}

double success_probability(std::uint64_t n_states, std::uint64_t m_solutions, int k) {
  if (m_solutions < 1 || m_solutions >= n_states) throw Error(ErrorCode::InvalidArgument, "need 1 <= M < N");
  const double half = std::asin(std::sqrt(static_cast<double>(m_solutions) / static_cast<double>(n_states)));
  const double s = std::sin((2.0 * k + 1.0) * half);
  return s * s;
}

double simulated_success(const GroverSpec& spec) {
  const auto sols = grover_solutions(spec);
  const auto marg = run_statevector(build_grover(spec)).marginal(data_qubits(spec.num_qubits));
  double p = 0.0;
  for (auto x : sols) p += marg[x];
  return p;
}

std::vector<SweepRow> iteration_sweep(const GroverSpec& spec, int k_max, std::uint64_t seed) {
  const auto sols = grover_solutions(spec);
  const std::uint64_t n_states = std::uint64_t{1} << spec.num_qubits;
  std::vector<SweepRow> rows;
  for (int k = 0; k <= k_max; ++k) {
    GroverSpec s = spec;
    s.iterations = k;
    const auto marg = run_statevector(build_grover(s)).marginal(data_qubits(spec.num_qubits));
    SweepRow r;
    r.k = k;
    r.p_analytic = success_probability(n_states, sols.size(), k);
    for (auto x : sols) r.p_simulated += marg[x];
    r.shots = spec.shots;
    if (spec.shots > 0) {
      const auto counts = sample(marg, spec.num_qubits, spec.shots, seed + static_cast<std::uint64_t>(k)).dense();
      for (auto x : sols) r.hits += counts[x];
    }
    rows.push_back(r);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "k,p_analytic,p_simulated,shots,hits\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.12f,%.12f,%llu,%llu\n", r.k, r.p_analytic, r.p_simulated,
                  static_cast<unsigned long long>(r.shots), static_cast<unsigned long long>(r.hits));
    out += buf;
  }
  return out;
}

int naive_iterations(std::uint64_t n_states, std::uint64_t m_solutions) {
  return static_cast<int>(std::floor(std::numbers::pi / 4.0 * std::sqrt(static_cast<double>(n_states) / m_solutions)));
}

PlaTable card_predicate(std::optional<std::string> suit, std::optional<int> value) {
  std::string in = "------";
  if (suit) {
    if (*suit == "clubs") in.replace(0, 2, "00");
    else if (*suit == "hearts") in.replace(0, 2, "01");
    else if (*suit == "diamonds") in.replace(0, 2, "10");
    else if (*suit == "spades") in.replace(0, 2, "11");
    else throw Error(ErrorCode::InvalidArgument, "unknown suit '" + *suit + "'");
  }
  if (value) {
    if (*value < 1 || *value > 13) throw Error(ErrorCode::InvalidArgument, "card value must be 1..13");
    for (int b = 0; b < 4; ++b) in[static_cast<std::size_t>(2 + b)] = ((*value >> (3 - b)) & 1) ? '1' : '0';
  }
  PlaTable t;
  t.num_inputs = 6;
  t.num_outputs = 1;
  t.rows.push_back(Cube{in, "1"});
  return t;
}

}  // namespace qsynth
