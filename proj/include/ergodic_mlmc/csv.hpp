#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace ergodic_mlmc {

using CsvCell = std::variant<std::int64_t, double, std::string>;

/// Doubles are written with 17 significant digits so they round-trip.
std::string format_cell(const CsvCell& cell);

struct CsvMetadata {
  std::uint64_t seed = 0;
  std::string version;
  std::string config_hash;
};

/// In-memory table written as a header row, data rows and one trailing
/// "#seed=... #version=... #config-hash=..." line.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<CsvCell> row);
  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }

  std::string render(const CsvMetadata& meta) const;
  /// Refuses to replace an existing file unless `overwrite`.
  void write(const std::string& path, const CsvMetadata& meta, bool overwrite) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<CsvCell>> rows_;
};

}  // namespace ergodic_mlmc
