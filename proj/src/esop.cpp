#include "qsynth/esop.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "qsynth/error.hpp"

namespace qsynth {
namespace {

bool intersects(const std::string& a, const std::string& b) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] != '-' && b[k] != '-' && a[k] != b[k]) return false;
  return true;
}

// a minus b as a list of pairwise disjoint cubes.
std::vector<std::string> sharp(const std::string& a, const std::string& b) {
  if (!intersects(a, b)) return {a};
  std::vector<std::string> out;
  std::string prefix = a;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] != '-' || b[k] == '-') continue;
    std::string piece = prefix;
    piece[k] = b[k] == '0' ? '1' : '0';
    out.push_back(piece);
    prefix[k] = b[k];
  }
  return out;
}

char merge_symbol(char a, char b) {
  // x'^x = 1, 1^x' = x, 1^x = x'
  if (a != '-' && b != '-') return '-';
  char fixed = a == '-' ? b : a;
  return fixed == '0' ? '1' : '0';
}

// A cube of one output column plus the position of the source row it came
// from, used to keep the original row order when columns are regrouped.
struct Item {
  std::string cube;
  std::size_t key;
};

void cancel_duplicates(std::vector<Item>& items) {
  std::unordered_map<std::string, std::size_t> count;
  for (const auto& it : items) ++count[it.cube];
  std::vector<Item> out;
  for (auto& it : items) {
    auto c = count.find(it.cube);
    if (c == count.end()) continue;
    if (c->second % 2 == 1) out.push_back(std::move(it));
    count.erase(c);
  }
  items = std::move(out);
}

std::vector<Item> minimize_column(std::vector<Item> items) {
  bool changed = true;
  while (changed) {
    changed = false;
    cancel_duplicates(items);
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < items.size(); ++i) index.emplace(items[i].cube, i);
    std::vector<char> dead(items.size(), 0);
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (dead[i]) continue;
      std::string& cube = items[i].cube;
      bool merged = false;
      for (std::size_t k = 0; k < cube.size() && !merged; ++k) {
        for (char sym : {'0', '1', '-'}) {
          if (sym == cube[k]) continue;
          std::string probe = cube;
          probe[k] = sym;
          auto it = index.find(probe);
          if (it == index.end() || dead[it->second] || it->second == i) continue;
          dead[it->second] = 1;
          index.erase(it);
          index.erase(cube);
          cube[k] = merge_symbol(cube[k], sym);
          index.emplace(cube, i);
          merged = changed = true;
          break;
        }
      }
    }
    std::vector<Item> live;
    for (std::size_t i = 0; i < items.size(); ++i)
      if (!dead[i]) live.push_back(std::move(items[i]));
    items = std::move(live);
  }
  return items;
}

EsopSpec regroup(int n, int m, const std::vector<std::vector<Item>>& columns) {
  struct Entry {
    std::size_t key;
    int column;
    const std::string* cube;
  };
  std::vector<Entry> all;
  for (int j = 0; j < m; ++j)
    for (const auto& it : columns[j]) all.push_back({it.key, j, &it.cube});
  std::stable_sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) { return a.key < b.key; });

  EsopSpec spec{n, m, {}};
  std::unordered_map<std::string, std::size_t> where;
  for (const auto& e : all) {
    auto [it, fresh] = where.emplace(*e.cube, spec.cubes.size());
    if (fresh) spec.cubes.push_back(Cube{*e.cube, std::string(static_cast<std::size_t>(m), '0')});
    spec.cubes[it->second].outputs[e.column] = '1';
  }
  return spec;
}

}  // namespace

std::uint64_t EsopSpec::evaluate(std::uint64_t input) const {
  std::uint64_t y = 0;
  for (const auto& c : cubes) {
    bool match = true;
    for (int k = 0; k < num_inputs && match; ++k) {
      const bool bit = (input >> (num_inputs - 1 - k)) & 1u;
      if (c.inputs[k] != '-' && (c.inputs[k] == '1') != bit) match = false;
    }
    if (!match) continue;
    std::uint64_t w = 0;
    for (char o : c.outputs) w = (w << 1) | (o == '1' ? 1u : 0u);
    y ^= w;
  }
  return y;
}

EsopSpec to_esop(const PlaTable& table, const EsopOptions& opts) {
  const int n = table.num_inputs, m = table.num_outputs;
  EsopSpec spec{n, m, {}};
  if (table.is_esop()) {
    for (Cube c : table.rows) {
      std::replace(c.outputs.begin(), c.outputs.end(), '-', '0');
      if (c.outputs.find('1') != std::string::npos) spec.cubes.push_back(std::move(c));
    }
    return opts.minimize ? minimize_esop(spec) : spec;
  }

  std::vector<std::vector<Item>> columns(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    auto& disjoint = columns[j];
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const Cube& row = table.rows[r];
      if (row.outputs[j] != '1') continue;
      std::vector<std::string> pieces{row.inputs};
      for (const auto& d : disjoint) {
        std::vector<std::string> next;
        for (const auto& p : pieces) {
          auto s = sharp(p, d.cube);
          next.insert(next.end(), s.begin(), s.end());
        }
        pieces = std::move(next);
        if (pieces.empty()) break;
      }
      for (auto& p : pieces) disjoint.push_back(Item{std::move(p), r});
    }
    if (opts.minimize) disjoint = minimize_column(std::move(disjoint));
  }
  return regroup(n, m, columns);
}

EsopSpec minimize_esop(const EsopSpec& spec) {
  std::vector<std::vector<Item>> columns(static_cast<std::size_t>(spec.num_outputs));
  for (std::size_t r = 0; r < spec.cubes.size(); ++r)
    for (int j = 0; j < spec.num_outputs; ++j)
      if (spec.cubes[r].outputs[j] == '1') columns[j].push_back(Item{spec.cubes[r].inputs, r});
  for (auto& col : columns) col = minimize_column(std::move(col));
  return regroup(spec.num_inputs, spec.num_outputs, columns);
}

std::vector<std::pair<std::size_t, std::size_t>> overlapping_cubes(const PlaTable& table) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < table.rows.size(); ++a) {
    for (std::size_t b = a + 1; b < table.rows.size(); ++b) {
      if (!intersects(table.rows[a].inputs, table.rows[b].inputs)) continue;
      for (int j = 0; j < table.num_outputs; ++j) {
        if (table.rows[a].outputs[j] == '1' && table.rows[b].outputs[j] == '1') {
          out.emplace_back(a, b);
          break;
        }
      }
    }
  }
  return out;
}

Circuit synth_esop(const EsopSpec& spec) {
  const int n = spec.num_inputs, m = spec.num_outputs;
  Circuit c(static_cast<std::size_t>(n + m), QubitRole::Input);
  for (int j = 0; j < m; ++j) c.set_role(static_cast<Qubit>(n + j), QubitRole::Output);
  for (const auto& cube : spec.cubes) {
    if (static_cast<int>(cube.inputs.size()) != n || static_cast<int>(cube.outputs.size()) != m)
      throw Error(ErrorCode::BadCube, "cube width does not match spec");
    std::vector<Control> controls;
    for (int k = 0; k < n; ++k)
      if (cube.inputs[k] != '-') controls.push_back({static_cast<Qubit>(k), cube.inputs[k] == '1'});
    for (int j = 0; j < m; ++j)
      if (cube.outputs[j] == '1') c.add(Gate::x(static_cast<Qubit>(n + j), controls));
  }
  return c;
}

Circuit synth_esop(const PlaTable& table, const EsopOptions& opts) { return synth_esop(to_esop(table, opts)); }

}  // namespace qsynth
