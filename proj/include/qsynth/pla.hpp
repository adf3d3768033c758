#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qsynth {

/// One PLA row. Both fields hold symbols from {'0','1','-'}.
struct Cube {
  std::string inputs;
  std::string outputs;

  bool operator==(const Cube&) const = default;
};

struct PlaTable {
  int num_inputs = 0;
  int num_outputs = 0;
  std::vector<Cube> rows;
  std::optional<std::size_t> declared_products;  // from `.p`
  std::optional<std::string> type;               // from `.type`, e.g. "fd", "esop"

  bool operator==(const PlaTable&) const = default;

  bool is_esop() const { return type && *type == "esop"; }
};

/// Parses a PLA document. `~` and `2` read as '-', `|` is a field separator,
/// CRLF endings are accepted. Non-fatal diagnostics (a `.p` count that
/// disagrees with the row count) are appended to `warnings` when given.
PlaTable parse_pla(std::string_view text, std::vector<std::string>* warnings = nullptr);

PlaTable read_pla_file(const std::string& path, std::vector<std::string>* warnings = nullptr);

/// Serializes in separated form: `inputs outputs` per row, directives first.
std::string write_pla(const PlaTable& table);

}  // namespace qsynth
