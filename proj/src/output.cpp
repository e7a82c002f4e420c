#include "topopump/output.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "topopump/errors.hpp"

namespace topopump {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

ResultTable::ResultTable(std::vector<Column> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw std::invalid_argument("a table needs at least one column");
}

void ResultTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size())
    throw std::invalid_argument("row has " + std::to_string(cells.size()) + " cells, table has " +
                                std::to_string(columns_.size()) + " columns");
  rows_.push_back(std::move(cells));
}

std::string ResultTable::to_string(const Provenance& p) const {
  std::ostringstream os;
  os << "# generator: topopump " << p.version << "\r\n";
  os << "# command: " << p.command << "\r\n";
  os << "# config_hash: fnv1a64:" << p.config_hash << "\r\n";
  os << "# seed: " << p.seed << "\r\n";
  os << "# units:";
  for (std::size_t i = 0; i < columns_.size(); ++i)
    os << (i ? ", " : " ") << columns_[i].name << "=" << (columns_[i].unit.empty() ? "label" : columns_[i].unit);
  os << "\r\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << csv_cell(columns_[i].name);
  os << "\r\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
    os << "\r\n";
  }
  return os.str();
}

void ResultTable::write(const std::filesystem::path& path, const Provenance& p) const {
  write_text_file(path, to_string(p));
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

PointStore::PointStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::optional<std::vector<double>> PointStore::load(const std::string& key) const {
  std::ifstream in(dir_ / (key + ".done"));
  if (!in) return std::nullopt;
  std::vector<double> v;
  for (std::string tok; in >> tok;) {
    char* end = nullptr;
    const double x = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) return std::nullopt;  // damaged marker: recompute
    v.push_back(x);
  }
  return v;
}

void PointStore::save(const std::string& key, const std::vector<double>& values) const {
  std::ostringstream os;
  for (double x : values) os << format_double(x) << '\n';
  write_text_file(dir_ / (key + ".done"), os.str());
}

}  // namespace topopump
