#include "qsynth/optimize.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>

#include "qsynth/encoding.hpp"
#include "qsynth/error.hpp"

namespace qsynth {
namespace {

constexpr double kPi = std::numbers::pi;

Circuit empty_like(const Circuit& c) {
  Circuit out(0);
  for (auto r : c.roles()) out.add_qubit(r);
  return out;
}

bool is_plain_x(const Gate& g) { return g.kind == GateKind::X && g.controls.empty(); }

// Appends fresh ancilla until `count` are available and returns them.
std::vector<Qubit> ensure_ancilla(Circuit& out, std::vector<Qubit>& pool, std::size_t count) {
  while (pool.size() < count) pool.push_back(out.add_qubit(QubitRole::Ancilla));
  return {pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count)};
}

// AND of all controls into the last ancilla, gate with that single control,
// then uncompute.
void emit_ladder(Circuit& out, const Gate& g, std::vector<Qubit>& pool) {
  const std::size_t k = g.controls.size();
  const auto anc = ensure_ancilla(out, pool, k - 1);
  std::vector<Gate> compute;
  compute.push_back(Gate::x(anc[0], {g.controls[0], g.controls[1]}));
  for (std::size_t i = 2; i < k; ++i) compute.push_back(Gate::x(anc[i - 1], {{anc[i - 2], true}, g.controls[i]}));
  for (const auto& cg : compute) out.add(cg);
  Gate core = g;
  core.controls = {{anc[k - 2], true}};
  out.add(core);
  for (auto it = compute.rbegin(); it != compute.rend(); ++it) out.add(*it);
}

void emit_toffoli5(Circuit& out, const Gate& g) {
  std::vector<Qubit> flips;
  for (const auto& ctl : g.controls)
    if (!ctl.positive) flips.push_back(ctl.qubit);
  for (auto q : flips) out.add(Gate::x(q));
  const Qubit c0 = g.controls[0].qubit, c1 = g.controls[1].qubit, t = g.targets[0];
  out.add(Gate::sx(t, {{c1, true}}));
  out.add(Gate::cx(c0, c1));
  out.add(Gate::sxdg(t, {{c1, true}}));
  out.add(Gate::cx(c0, c1));
  out.add(Gate::sx(t, {{c0, true}}));
  for (auto q : flips) out.add(Gate::x(q));
}

Circuit ladder_pass(const Circuit& c, bool x_gates, bool other_gates) {
  Circuit out = empty_like(c);
  std::vector<Qubit> pool;
  for (const auto& g : c.gates()) {
    const bool is_x = g.kind == GateKind::X;
    const bool wide = is_x ? (x_gates && g.controls.size() >= 3) : (other_gates && g.controls.size() >= 2);
    if (wide) emit_ladder(out, g, pool);
    else out.add(g);
  }
  return out;
}

// Single-controlled rotation on the uniform gate set.
void emit_controlled_rotation(Circuit& out, GateKind kind, Qubit c, Qubit t, double angle) {
  switch (kind) {
    case GateKind::RZ:
    case GateKind::RY:
      out.add(Gate::rot(kind, t, angle / 2.0));
      out.add(Gate::cx(c, t));
      out.add(Gate::rot(kind, t, -angle / 2.0));
      out.add(Gate::cx(c, t));
      return;
    case GateKind::RX:
      out.add(Gate::h(t));
      emit_controlled_rotation(out, GateKind::RZ, c, t, angle);
      out.add(Gate::h(t));
      return;
    default:
      throw Error(ErrorCode::UnsupportedGateForGateset, "not a rotation");
  }
}

struct RunGate {
  GateKind kind;
  std::uint64_t pattern;
  double angle;
};

std::uint64_t gray(std::uint64_t g) { return g ^ (g >> 1); }

// Emits the multiplexed rotation for one kind: angles[p] applies when the
// controls spell p (first control = most significant bit).
void emit_gray_multiplexor(Circuit& out, GateKind kind, Qubit target, const std::vector<Qubit>& controls,
                           const std::vector<double>& angles) {
  const std::size_t k = controls.size();
  const std::size_t n = angles.size();
  for (std::size_t g = 0; g < n; ++g) {
    double alpha = 0.0;
    const std::uint64_t gg = gray(g);
    for (std::size_t p = 0; p < n; ++p) alpha += (std::popcount(p & gg) % 2 ? -angles[p] : angles[p]);
    alpha /= static_cast<double>(n);
    if (std::abs(alpha) > 1e-15) out.add(Gate::rot(kind, target, alpha));
    const int bit = std::countr_zero(gray(g) ^ gray((g + 1) % n));
    const Qubit ctl = controls[k - 1 - static_cast<std::size_t>(bit)];
    // Z conjugation negates an x rotation; X conjugation negates y and z.
    if (kind == GateKind::RX) out.add(Gate::z(target, {{ctl, true}}));
    else out.add(Gate::cx(ctl, target));
  }
}

// Tries to rewrite a run; returns false when the per-pattern gate orders
// cannot be aligned to one kind sequence.
bool emit_gray_run(Circuit& out, const std::vector<Gate>& run) {
  const Qubit target = run.front().targets[0];
  std::vector<Qubit> controls;
  for (const auto& ctl : run.front().controls) controls.push_back(ctl.qubit);
  std::sort(controls.begin(), controls.end());
  const std::size_t k = controls.size();
  const std::size_t n = std::size_t{1} << k;

  // Per pattern, consecutive same-kind rotations are merged.
  std::vector<std::vector<std::pair<GateKind, double>>> seq(n);
  for (const auto& g : run) {
    std::uint64_t p = 0;
    for (Qubit q : controls) {
      auto it = std::find_if(g.controls.begin(), g.controls.end(), [q](const Control& c) { return c.qubit == q; });
      p = (p << 1) | (it->positive ? 1u : 0u);
    }
    auto& s = seq[p];
    if (!s.empty() && s.back().first == g.kind) s.back().second += *g.angle;
    else s.emplace_back(g.kind, *g.angle);
  }
  std::vector<GateKind> layout;
  for (const auto& s : seq)
    if (s.size() > layout.size()) {
      layout.clear();
      for (const auto& e : s) layout.push_back(e.first);
    }
  std::vector<std::vector<double>> angles(layout.size(), std::vector<double>(n, 0.0));
  for (std::size_t p = 0; p < n; ++p) {
    std::size_t at = 0;
    for (const auto& [kind, a] : seq[p]) {
      while (at < layout.size() && layout[at] != kind) ++at;
      if (at == layout.size()) return false;
      angles[at++][p] = a;
    }
  }
  for (std::size_t l = 0; l < layout.size(); ++l) emit_gray_multiplexor(out, layout[l], target, controls, angles[l]);
  return true;
}

bool same_run(const Gate& a, const Gate& b) {
  if (!b.is_rotation() || a.targets != b.targets || a.controls.size() != b.controls.size()) return false;
  for (const auto& ca : a.controls)
    if (std::none_of(b.controls.begin(), b.controls.end(), [&](const Control& cb) { return cb.qubit == ca.qubit; }))
      return false;
  return true;
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

void prepare_symmetric(Circuit& out, const std::vector<double>& p, Qubit first, Symmetry kind, bool root) {
  const std::size_t size = p.size();
  if (size == 1) return;
  const std::size_t half = size / 2;
  Pmf sub;
  sub.p.assign(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(half));
  double mass = 0.0;
  for (double x : sub.p) mass += x;
  Pmf whole{p};
  const bool dup = (kind != Symmetry::Mirror || !root) && has_symmetry(whole, Symmetry::Duplicate);
  const bool mirror = !dup && (kind != Symmetry::Duplicate || !root) && has_symmetry(whole, Symmetry::Mirror);
  if ((dup || mirror) && mass > 0.0) {
    for (double& x : sub.p) x /= mass;
    out.add(Gate::h(first));
    prepare_symmetric(out, sub.p, first + 1, Symmetry::Auto, false);
    if (mirror)
      for (Qubit q = first + 1; q < first + static_cast<Qubit>(std::countr_zero(size)); ++q) out.add(Gate::cx(first, q));
    return;
  }
  if (root) throw Error(ErrorCode::NoSymmetry, "PMF has no root symmetry of the requested kind");
  const Circuit plain = synth_amplitude(Pmf{p});
  for (Gate g : plain.gates()) {
    g.targets[0] += first;
    for (auto& c : g.controls) c.qubit += first;
    out.add(std::move(g));
  }
}

}  // namespace

Circuit remove_double_x(const Circuit& c) {
  std::vector<Gate> gates = c.gates();
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<char> dead(gates.size(), 0);
    std::vector<std::ptrdiff_t> last(c.num_qubits(), -1);
    for (std::size_t i = 0; i < gates.size(); ++i) {
      const Gate& g = gates[i];
      if (is_plain_x(g)) {
        const Qubit q = g.targets[0];
        const auto prev = last[q];
        if (prev >= 0 && is_plain_x(gates[static_cast<std::size_t>(prev)])) {
          dead[static_cast<std::size_t>(prev)] = dead[i] = 1;
          last[q] = -1;
          changed = true;
          continue;
        }
      }
      for (auto q : g.targets) last[q] = static_cast<std::ptrdiff_t>(i);
      for (auto ctl : g.controls) last[ctl.qubit] = static_cast<std::ptrdiff_t>(i);
    }
    std::vector<Gate> live;
    for (std::size_t i = 0; i < gates.size(); ++i)
      if (!dead[i]) live.push_back(std::move(gates[i]));
    gates = std::move(live);
  }
  Circuit out = empty_like(c);
  for (auto& g : gates) out.add(std::move(g));
  return out;
}

Circuit decompose_mcx(const Circuit& c, McxMode mode) {
  Circuit laddered = ladder_pass(c, true, false);
  if (mode == McxMode::ToTrueToffoli) return laddered;
  Circuit out = empty_like(laddered);
  for (const auto& g : laddered.gates()) {
    if (g.kind == GateKind::X && g.controls.size() == 2) emit_toffoli5(out, g);
    else out.add(g);
  }
  return out;
}

Circuit decompose_controlled(const Circuit& c) { return ladder_pass(c, false, true); }

Circuit lower_to_uniform(const Circuit& c) {
  const Circuit staged = lower_negative_controls(decompose_mcx(decompose_controlled(c), McxMode::ToffoliTo5Gate));
  Circuit out = empty_like(staged);
  for (const auto& g : staged.gates()) {
    if (g.controls.empty()) {
      switch (g.kind) {
        case GateKind::Z: out.add(Gate::rz(g.targets[0], kPi)); break;
        case GateKind::SX: out.add(Gate::rx(g.targets[0], kPi / 2)); break;
        case GateKind::SXdg: out.add(Gate::rx(g.targets[0], -kPi / 2)); break;
        default: out.add(g);
      }
      continue;
    }
    if (g.controls.size() > 1) throw Error(ErrorCode::UnsupportedGateForGateset, "gate kept more than one control");
    const Qubit ctl = g.controls[0].qubit, t = g.targets[0];
    switch (g.kind) {
      case GateKind::X: out.add(g); break;
      case GateKind::Z:
        out.add(Gate::h(t));
        out.add(Gate::cx(ctl, t));
        out.add(Gate::h(t));
        break;
      case GateKind::RX:
      case GateKind::RY:
      case GateKind::RZ: emit_controlled_rotation(out, g.kind, ctl, t, *g.angle); break;
      case GateKind::SX:
      case GateKind::SXdg: {
        // sqrt(X) = e^{i pi/4} RX(pi/2); the controlled phase lands on the control.
        const double s = g.kind == GateKind::SX ? 1.0 : -1.0;
        out.add(Gate::rz(ctl, s * kPi / 4));
        emit_controlled_rotation(out, GateKind::RX, ctl, t, s * kPi / 2);
        break;
      }
      default: throw Error(ErrorCode::UnsupportedGateForGateset, "controlled " + to_string(g.kind));
    }
  }
  return out;
}

Circuit graycode_optimize(const Circuit& c) {
  Circuit out = empty_like(c);
  const auto& gates = c.gates();
  std::size_t i = 0;
  while (i < gates.size()) {
    const Gate& g = gates[i];
    if (!g.is_rotation() || g.controls.size() < 2) {
      out.add(g);
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < gates.size() && same_run(g, gates[j])) ++j;
    std::vector<Gate> run(gates.begin() + static_cast<std::ptrdiff_t>(i), gates.begin() + static_cast<std::ptrdiff_t>(j));
    Circuit rewritten = empty_like(out);
    if (emit_gray_run(rewritten, run)) {
      out.append(rewritten);
    } else {
      for (const auto& r : run) out.add(r);
    }
    i = j;
  }
  return out;
}

bool has_symmetry(const Pmf& pmf, Symmetry kind) {
  const auto& p = pmf.p;
  const std::size_t size = p.size(), half = size / 2;
  if (size < 2) return false;
  auto dup = [&] {
    for (std::size_t x = 0; x < half; ++x)
      if (!close(p[x], p[x + half])) return false;
    return true;
  };
  auto mirror = [&] {
    for (std::size_t x = 0; x < half; ++x)
      if (!close(p[x], p[size - 1 - x])) return false;
    return true;
  };
  switch (kind) {
    case Symmetry::Duplicate: return dup();
    case Symmetry::Mirror: return mirror();
    case Symmetry::Auto: return dup() || mirror();
  }
  return false;
}

Circuit symmetric_optimize(const Pmf& pmf, Symmetry kind) {
  const std::size_t size = pmf.p.size();
  if (size < 2 || !std::has_single_bit(size)) throw Error(ErrorCode::NotPowerOfTwo, "PMF needs 2^N bins");
  if (!has_symmetry(pmf, kind)) throw Error(ErrorCode::NoSymmetry, "PMF has no root symmetry of the requested kind");
  Circuit out(static_cast<std::size_t>(std::countr_zero(size)), QubitRole::Work);
  prepare_symmetric(out, pmf.p, 0, kind, true);
  return out;
}

Circuit apply_passes(const Circuit& c, const std::vector<std::string>& passes) {
  Circuit cur = c;
  for (const auto& p : passes) {
    if (p == "double-x") cur = remove_double_x(cur);
    else if (p == "mcx-ladder") cur = decompose_mcx(cur, McxMode::ToTrueToffoli);
    else if (p == "toffoli-5") cur = decompose_mcx(cur, McxMode::ToffoliTo5Gate);
    else if (p == "graycode") cur = graycode_optimize(cur);
    else if (p == "uniform") cur = lower_to_uniform(cur);
    else if (p == "lower-negatives") cur = lower_negative_controls(cur);
    else throw Error(ErrorCode::InvalidArgument, "unknown pass '" + p + "'");
  }
  return cur;
}

}  // namespace qsynth
