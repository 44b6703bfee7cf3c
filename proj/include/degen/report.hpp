#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "degen/errors.hpp"

namespace degen {

/// CSV table with a mandatory header row; numeric cells are printed with
/// enough digits to round-trip, so repeated runs are byte-identical.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(const std::vector<double>& row);
  void add_row_mixed(const std::vector<std::string>& row);
  std::string to_string() const;
  void write(const std::filesystem::path& path) const;

  static std::string format_number(double v);

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// JSON summary {params, metrics, pass flags} written next to the CSVs.
struct ReportSummary {
  nlohmann::json params = nlohmann::json::object();
  nlohmann::json metrics = nlohmann::json::object();
  nlohmann::json flags = nlohmann::json::object();

  void write(const std::filesystem::path& path) const;
  std::string to_string() const;
  bool all_flags_pass() const;
};

/// Output directory resolution: explicit path beats the DEGEN_OUT environment
/// variable beats the current directory.
std::filesystem::path resolve_output_dir(const std::string& explicit_dir);

}  // namespace degen
