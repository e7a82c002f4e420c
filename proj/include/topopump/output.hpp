#pragma once

// Result tables (CSV with `#` provenance lines), run manifests and per-point
// completion markers for resumable sweeps.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace topopump {

/// Shortest round-trip text of a double ("%.17g"; inf/nan spelled out).
std::string format_double(double v);

struct Provenance {
  std::string version;
  std::string command;
  std::string config_hash;
  std::uint64_t seed = 0;
};

class ResultTable {
 public:
  struct Column {
    std::string name;
    std::string unit;  // "1" for dimensionless, "" for labels
  };

  explicit ResultTable(std::vector<Column> columns);

  void add_row(std::vector<std::string> cells);
  std::size_t rows() const { return rows_.size(); }
  std::size_t columns() const { return columns_.size(); }

  /// Writes `#` provenance/unit lines, the header row and the rows.
  void write(const std::filesystem::path& path, const Provenance& provenance) const;
  std::string to_string(const Provenance& provenance) const;

 private:
  std::vector<Column> columns_;
  std::vector<std::vector<std::string>> rows_;
};

/// Stores one numeric record per completed work item under `dir`, so an
/// interrupted sweep can skip finished points when rerun with the same config.
class PointStore {
 public:
  explicit PointStore(std::filesystem::path dir);

  std::optional<std::vector<double>> load(const std::string& key) const;
  void save(const std::string& key, const std::vector<double>& values) const;

 private:
  std::filesystem::path dir_;
};

/// Writes text atomically (temporary file + rename). Throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace topopump
