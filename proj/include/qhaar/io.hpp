#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace qhaar {

inline constexpr const char* kVersion = "1.0.0";

// One result table.  Cells are JSON values (numbers, strings, or null for
// not-applicable) so that the CSV and JSON renderings agree on numeric text.
using Cell = nlohmann::ordered_json;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct RunMetadata {
  std::uint64_t seed = 0;
  std::string config;  // canonical config string; only its hash is emitted
};

// RFC-4180 field quoting (quotes around fields holding comma, quote, CR/LF,
// or outer whitespace; embedded quotes doubled)
std::string csv_escape(const std::string& field);

// header row, one line per data row, then a trailing comment line
// "# seed=<seed> version=<version> config=<16-digit hash>"
std::string render_csv(const Table& table, const RunMetadata& meta);

// one JSON object per row (column order preserved), then a trailing
// {"meta": {...}} object carrying the same seed/version/config fields
std::string render_jsonl(const Table& table, const RunMetadata& meta);

// FNV-1a 64-bit, used for the config fingerprint in output footers
std::uint64_t fnv1a(const std::string& text);

}  // namespace qhaar
