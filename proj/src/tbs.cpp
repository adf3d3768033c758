#include "qsynth/tbs.hpp"

#include <bit>

#include "qsynth/error.hpp"

namespace qsynth {
namespace {

void require_square_complete(const TruthTable& t) {
  if (t.num_inputs != t.num_outputs) throw Error(ErrorCode::NotSquare, "n != m");
  if (!t.complete()) throw Error(ErrorCode::NotComplete, "table has undefined inputs");
}

struct BitGate {
  std::uint64_t controls = 0;
  int target = 0;
};

// Working state of a TBS sweep: the current output table and the gates
// applied so far (acting on outputs).
class Sweep {
 public:
  Sweep(const TruthTable& t, const TbsOptions& opts, SynthTrace* trace)
      : n_(t.num_inputs), f_(t.dense()), opts_(opts), trace_(trace) {
    std::vector<char> seen(f_.size(), 0);
    for (auto y : f_) {
      if (y >= f_.size() || seen[y]) throw Error(ErrorCode::NotBijective, "output words are not a permutation");
      seen[y] = 1;
    }
  }

  std::uint64_t at(std::uint64_t r) const { return f_[r]; }
  std::size_t size() const { return f_.size(); }
  std::size_t gate_count() const { return gates_.size(); }

  // Inside a transaction every flipped row is journaled so the step can be
  // checked (rows below the step index) and rolled back.
  void apply(BitGate g) {
    const std::uint64_t tbit = std::uint64_t{1} << g.target;
    for (std::size_t r = 0; r < f_.size(); ++r) {
      if ((f_[r] & g.controls) != g.controls) continue;
      f_[r] ^= tbit;
      if (in_txn_) journal_.emplace_back(r, tbit);
    }
    gates_.push_back(g);
    if (gates_.size() > opts_.gate_cap)
      throw Error(ErrorCode::SizeLimitExceeded, "more than " + std::to_string(opts_.gate_cap) + " gates");
  }

  void basic_step(std::uint64_t i) {
    std::uint64_t y = f_[i];
    if (y == i) return;
    // Bits set in i but clear in y, controlled on the ones of y.
    for (std::uint64_t need = i & ~y; need; need &= need - 1) {
      const int b = std::countr_zero(need);
      apply({f_[i], b});
    }
    // Bits set in the current output but clear in i, controlled on the ones of i.
    for (std::uint64_t extra = f_[i] & ~i; extra; extra &= extra - 1) {
      const int b = std::countr_zero(extra);
      apply({i, b});
    }
  }

  void begin() {
    journal_.clear();
    txn_gates_ = gates_.size();
    in_txn_ = true;
  }
  void commit() { in_txn_ = false; }
  void rollback() {
    for (auto it = journal_.rbegin(); it != journal_.rend(); ++it) f_[it->first] ^= it->second;
    gates_.resize(txn_gates_);
    in_txn_ = false;
  }
  bool rows_fixed_through(std::uint64_t i) const {
    for (const auto& [r, bit] : journal_)
      if (r < i && f_[r] != r) return false;
    return f_[i] == i;
  }

  void snapshot(std::uint64_t i) {
    if (trace_ && opts_.keep_snapshots) trace_->snapshots.emplace_back(i, f_);
  }

  Circuit finish() {
    Circuit c(static_cast<std::size_t>(n_), QubitRole::Work);
    auto qubit = [this](int bit) { return static_cast<Qubit>(n_ - 1 - bit); };
    c.reserve(gates_.size());
    for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
      std::vector<Control> controls;
      for (int b = n_ - 1; b >= 0; --b)
        if ((it->controls >> b) & 1u) controls.push_back({qubit(b), true});
      c.add(Gate::x(qubit(it->target), std::move(controls)));
    }
    if (trace_) {
      for (const auto& g : gates_) {
        std::vector<Control> controls;
        for (int b = n_ - 1; b >= 0; --b)
          if ((g.controls >> b) & 1u) controls.push_back({qubit(b), true});
        trace_->applied.push_back(Gate::x(qubit(g.target), std::move(controls)));
      }
    }
    return c;
  }

  int width() const { return n_; }
  SynthTrace* trace() const { return trace_; }

 private:
  int n_;
  std::vector<std::uint64_t> f_;
  std::vector<BitGate> gates_;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> journal_;
  std::size_t txn_gates_ = 0;
  bool in_txn_ = false;
  TbsOptions opts_;
  SynthTrace* trace_;
};

// Spectrum row i from the current table: XOR of F[r] over subsets r of i.
std::uint64_t spectrum_row(const Sweep& s, std::uint64_t i) {
  std::uint64_t acc = 0, r = 0;
  do {
    acc ^= s.at(r);
    r = (r - i) & i;
  } while (r != 0);
  return acc;
}

// Brings row i to the identity using the spectrum rule. Throws NoPivot when
// no admissible pivot bit exists.
void rm_step(Sweep& s, std::uint64_t i) {
  const std::uint64_t row = spectrum_row(s, i);
  if (i == 0) {
    for (std::uint64_t m = row; m; m &= m - 1) s.apply({0, std::countr_zero(m)});
    return;
  }
  if (std::has_single_bit(i)) {
    const int k = std::countr_zero(i);
    std::uint64_t r = row;
    if (!((r >> k) & 1u)) {
      // Only a pivot above k leaves rows below 2^k alone.
      const std::uint64_t above = r & ~((std::uint64_t{2} << k) - 1);
      if (!above) throw Error(ErrorCode::NoPivot, "row " + std::to_string(i));
      s.apply({std::uint64_t{1} << (63 - std::countl_zero(above)), k});
      r ^= i;
    }
    for (std::uint64_t m = r & ~i; m; m &= m - 1) s.apply({i, std::countr_zero(m)});
    return;
  }
  const std::uint64_t candidates = row & ~i;
  if (!candidates) throw Error(ErrorCode::NoPivot, "row " + std::to_string(i));
  const int piv = 63 - std::countl_zero(candidates);
  const std::uint64_t pbit = std::uint64_t{1} << piv;
  std::vector<int> fan;
  for (std::uint64_t m = row & ~pbit; m; m &= m - 1) fan.push_back(std::countr_zero(m));
  for (int j : fan) s.apply({pbit, j});
  s.apply({i, piv});
  // Row 2^piv is already fixed when it precedes i; re-applying the fan-out
  // restores it and leaves row i (now zero in the spectrum) untouched.
  if (pbit < i)
    for (auto it = fan.rbegin(); it != fan.rend(); ++it) s.apply({pbit, *it});
}

}  // namespace

RmSpectrum::RmSpectrum(const TruthTable& table) : width_(table.num_inputs) {
  require_square_complete(table);
  f_ = table.dense();
  rows_.assign(f_.size(), 0);
  have_.assign(f_.size(), 0);
}

std::uint64_t RmSpectrum::row(std::uint64_t i) {
  if (i >= f_.size()) throw Error(ErrorCode::InvalidArgument, "row out of range");
  if (have_[i]) return rows_[i];
  std::uint64_t acc = 0, r = 0;
  do {
    if (log_) log_->push_back(r);
    acc ^= f_[r];
    r = (r - i) & i;
  } while (r != 0);
  rows_[i] = acc;
  have_[i] = 1;
  return acc;
}

std::vector<std::uint64_t> RmSpectrum::all() {
  for (std::uint64_t i = 0; i < f_.size(); ++i) row(i);
  return rows_;
}

std::vector<std::uint64_t> rm_transform(std::vector<std::uint64_t> v) {
  for (std::size_t h = 1; h < v.size(); h <<= 1)
    for (std::size_t i = 0; i < v.size(); ++i)
      if (i & h) v[i] ^= v[i ^ h];
  return v;
}

std::vector<std::uint64_t> rm_spectrum(const TruthTable& table) {
  require_square_complete(table);
  return rm_transform(table.dense());
}

Circuit synth_tbs_basic(const TruthTable& table, const TbsOptions& opts, SynthTrace* trace) {
  require_square_complete(table);
  Sweep s(table, opts, trace);
  for (std::uint64_t i = 0; i < s.size(); ++i) {
    s.basic_step(i);
    s.snapshot(i);
  }
  return s.finish();
}

Circuit synth_tbs_rm(const TruthTable& table, const TbsOptions& opts, SynthTrace* trace) {
  require_square_complete(table);
  Sweep s(table, opts, trace);
  for (std::uint64_t i = 0; i < s.size(); ++i) {
    if (s.at(i) != i) {
      s.begin();
      bool ok = false;
      try {
        rm_step(s, i);
        ok = s.rows_fixed_through(i);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoPivot) throw;
      }
      if (ok) {
        s.commit();
      } else {
        s.rollback();
        s.basic_step(i);
        if (trace) {
          ++trace->rm_fallbacks;
          trace->log.push_back("row " + std::to_string(i) + ": basic step");
        }
      }
    }
    s.snapshot(i);
  }
  return s.finish();
}

}  // namespace qsynth
