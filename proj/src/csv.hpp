#pragma once

// Minimal reader for the unquoted, comma-separated files this project exchanges.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mpf::detail {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;

  std::optional<std::size_t> column(std::string_view name) const;
};

/// Lines starting with '#' and blank lines are skipped. Throws IngestError.
CsvTable read_csv(const std::filesystem::path& path);

double parse_double(const std::string& field, const std::string& what);
long long parse_int(const std::string& field, const std::string& what);

}  // namespace mpf::detail
