#include "qhaar/io.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace qhaar {
namespace {

std::string hash_hex(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string cell_text(const Cell& cell) {
  if (cell.is_null()) return {};
  if (cell.is_string()) return cell.get<std::string>();
  return cell.dump();
}

void check_shape(const Table& table) {
  for (const auto& row : table.rows)
    if (row.size() != table.columns.size())
      throw std::invalid_argument("table row width does not match the header");
}

}  // namespace

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string csv_escape(const std::string& field) {
  const bool needs_quotes =
      field.find_first_of(",\"\r\n") != std::string::npos ||
      (!field.empty() && (field.front() == ' ' || field.back() == ' '));
  if (!needs_quotes) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string render_csv(const Table& table, const RunMetadata& meta) {
  check_shape(table);
  std::ostringstream os;
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    os << (c ? "," : "") << csv_escape(table.columns[c]);
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c)
      os << (c ? "," : "") << csv_escape(cell_text(row[c]));
    os << "\n";
  }
  os << "# seed=" << meta.seed << " version=" << kVersion
     << " config=" << hash_hex(fnv1a(meta.config)) << "\n";
  return os.str();
}

std::string render_jsonl(const Table& table, const RunMetadata& meta) {
  check_shape(table);
  std::ostringstream os;
  for (const auto& row : table.rows) {
    Cell object = Cell::object();
    for (std::size_t c = 0; c < row.size(); ++c) object[table.columns[c]] = row[c];
    os << object.dump() << "\n";
  }
  Cell trailer = Cell::object();
  trailer["meta"] = {{"seed", meta.seed},
                     {"version", kVersion},
                     {"config", hash_hex(fnv1a(meta.config))}};
  os << trailer.dump() << "\n";
  return os.str();
}

}  // namespace qhaar
