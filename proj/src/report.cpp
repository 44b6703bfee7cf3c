#include "degen/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace degen {

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw precondition_error("CsvTable: empty header");
}

std::string CsvTable::format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void CsvTable::add_row(const std::vector<double>& row) {
  if (row.size() != header_.size()) throw precondition_error("CsvTable: row width mismatch");
  std::vector<std::string> cells;
  cells.reserve(row.size());
  for (double v : row) cells.push_back(format_number(v));
  rows_.push_back(std::move(cells));
}

void CsvTable::add_row_mixed(const std::vector<std::string>& row) {
  if (row.size() != header_.size()) throw precondition_error("CsvTable: row width mismatch");
  rows_.push_back(row);
}

std::string CsvTable::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i) out += ',';
    out += header_[i];
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

void CsvTable::write(const std::filesystem::path& path) const {
  std::ofstream f(path);
  if (!f) throw io_error("cannot open for writing: " + path.string());
  f << to_string();
  if (!f) throw io_error("write failed: " + path.string());
}

void ReportSummary::write(const std::filesystem::path& path) const {
  std::ofstream f(path);
  if (!f) throw io_error("cannot open for writing: " + path.string());
  f << to_string();
  if (!f) throw io_error("write failed: " + path.string());
}

std::string ReportSummary::to_string() const {
  nlohmann::json j{{"params", params}, {"metrics", metrics}, {"flags", flags}};
  return j.dump(2) + "\n";
}

bool ReportSummary::all_flags_pass() const {
  for (const auto& [key, val] : flags.items()) {
    (void)key;
    if (val.is_boolean() && !val.get<bool>()) return false;
  }
  return true;
}

std::filesystem::path resolve_output_dir(const std::string& explicit_dir) {
  if (!explicit_dir.empty()) return explicit_dir;
  if (const char* env = std::getenv("DEGEN_OUT")) return env;
  return ".";
}

}  // namespace degen
