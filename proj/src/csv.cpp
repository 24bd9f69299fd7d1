#include "ergodic_mlmc/csv.hpp"

#include "ergodic_mlmc/types.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace ergodic_mlmc {

std::string format_cell(const CsvCell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) {
    if (std::isnan(*d)) return "nan";
    if (std::isinf(*d)) return *d > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", *d);
    return buf;
  }
  const auto& s = std::get<std::string>(cell);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

void CsvTable::add_row(std::vector<CsvCell> row) {
  if (row.size() != header_.size())
    throw PreconditionError("CsvTable::add_row: row width differs from header width");
  rows_.push_back(std::move(row));
}

std::string CsvTable::render(const CsvMetadata& meta) const {
  std::ostringstream out;
  for (std::size_t i = 0; i < header_.size(); ++i) out << (i ? "," : "") << header_[i];
  out << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
    out << '\n';
  }
  out << "#seed=" << meta.seed << " #version=" << meta.version << " #config-hash=" << meta.config_hash << '\n';
  return out.str();
}

void CsvTable::write(const std::string& path, const CsvMetadata& meta, bool overwrite) const {
  namespace fs = std::filesystem;
  if (!overwrite && fs::exists(path))
    throw ConfigError("refusing to overwrite existing file '" + path + "' (pass --force)");
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << render(meta);
}

}  // namespace ergodic_mlmc
