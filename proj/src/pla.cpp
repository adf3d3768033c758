#include "qsynth/pla.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "qsynth/error.hpp"

namespace qsynth {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  auto is_sep = [](char c) { return c == ' ' || c == '\t' || c == '|' || c == '\r'; };
  while (i < line.size()) {
    while (i < line.size() && is_sep(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_sep(line[j])) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

int parse_count(std::string_view directive, std::string_view value, std::size_t line_no) {
  int v = 0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || p != value.data() + value.size() || v < 0) {
    throw Error(ErrorCode::MalformedDirective, "line " + std::to_string(line_no) + ": bad value for " +
                                                   std::string(directive));
  }
  return v;
}

char normalize_symbol(char c) {
  if (c == '~' || c == '2') return '-';
  return c;
}

void check_conflicts(const PlaTable& t) {
  // Only dash-free, identical input patterns are compared; XOR-typed tables
  // legitimately repeat cubes.
  if (t.is_esop()) return;
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const Cube& c = t.rows[r];
    if (c.inputs.find('-') != std::string::npos) continue;
    auto [it, fresh] = seen.emplace(c.inputs, r);
    if (fresh) continue;
    const std::string& prev = t.rows[it->second].outputs;
    for (int k = 0; k < t.num_outputs; ++k) {
      char a = prev[k], b = c.outputs[k];
      if ((a == '0' && b == '1') || (a == '1' && b == '0')) {
        throw Error(ErrorCode::ConflictingRows,
                    "input " + c.inputs + " maps output " + std::to_string(k) + " to both 0 and 1");
      }
    }
  }
}

}  // namespace

PlaTable parse_pla(std::string_view text, std::vector<std::string>* warnings) {
  PlaTable t;
  bool have_i = false, have_o = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tok = split_ws(line);
    if (tok.empty()) continue;

    if (tok[0].front() == '.') {
      std::string_view d = tok[0];
      if (d == ".e" || d == ".end") break;
      if (d == ".i" || d == ".o") {
        if (tok.size() != 2) throw Error(ErrorCode::MalformedDirective, "line " + std::to_string(line_no));
        int v = parse_count(d, tok[1], line_no);
        if (v < 1) throw Error(ErrorCode::MalformedDirective, std::string(d) + " must be >= 1");
        int& slot = d == ".i" ? t.num_inputs : t.num_outputs;
        bool& have = d == ".i" ? have_i : have_o;
        if (have && slot != v) throw Error(ErrorCode::MalformedDirective, "contradictory " + std::string(d));
        if (!t.rows.empty()) throw Error(ErrorCode::MalformedDirective, std::string(d) + " after cubes");
        slot = v;
        have = true;
      } else if (d == ".p") {
        if (tok.size() != 2) throw Error(ErrorCode::MalformedDirective, "line " + std::to_string(line_no));
        t.declared_products = static_cast<std::size_t>(parse_count(d, tok[1], line_no));
      } else if (d == ".type") {
        if (tok.size() != 2) throw Error(ErrorCode::MalformedDirective, "line " + std::to_string(line_no));
        t.type = std::string(tok[1]);
      }
      // Other directives (.ilb, .ob, .phase, ...) carry no semantics here.
      continue;
    }

    if (!have_i || !have_o) {
      throw Error(ErrorCode::MalformedDirective, "cube before .i/.o at line " + std::to_string(line_no));
    }
    std::string joined;
    for (auto s : tok) joined.append(s);
    const auto n = static_cast<std::size_t>(t.num_inputs);
    const auto m = static_cast<std::size_t>(t.num_outputs);
    bool split_ok = tok.size() == 1 || (tok.size() == 2 && tok[0].size() == n);
    if (joined.size() != n + m || !split_ok) {
      throw Error(ErrorCode::BadCube, "line " + std::to_string(line_no) + ": expected " + std::to_string(n) +
                                          "+" + std::to_string(m) + " symbols");
    }
    for (char& c : joined) {
      c = normalize_symbol(c);
      if (c != '0' && c != '1' && c != '-') {
        throw Error(ErrorCode::BadCube, "line " + std::to_string(line_no) + ": illegal symbol '" + c + "'");
      }
    }
    t.rows.push_back(Cube{joined.substr(0, n), joined.substr(n)});
  }
  if (!have_i || !have_o) throw Error(ErrorCode::MalformedDirective, "missing .i or .o");
  if (t.declared_products && *t.declared_products != t.rows.size() && warnings) {
    warnings->push_back(".p declares " + std::to_string(*t.declared_products) + " products, found " +
                        std::to_string(t.rows.size()));
  }
  check_conflicts(t);
  return t;
}

PlaTable read_pla_file(const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_pla(ss.str(), warnings);
}

std::string write_pla(const PlaTable& table) {
  std::string out;
  out += ".i " + std::to_string(table.num_inputs) + "\n";
  out += ".o " + std::to_string(table.num_outputs) + "\n";
  if (table.declared_products) out += ".p " + std::to_string(*table.declared_products) + "\n";
  if (table.type) out += ".type " + *table.type + "\n";
  for (const auto& c : table.rows) out += c.inputs + " " + c.outputs + "\n";
  out += ".e\n";
  return out;
}

}  // namespace qsynth
