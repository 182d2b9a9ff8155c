#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace dek {

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

struct CsvRecord {
  std::size_t line = 0;  // 1-based physical line where the record starts
  std::vector<std::string> fields;
};

/// RFC-4180 parser: quoted fields, doubled quotes, embedded newlines, CRLF.
/// Blank lines are skipped.
std::vector<CsvRecord> parse_csv(std::string_view text);

/// Quotes a field when it contains a comma, quote, CR or LF.
std::string csv_escape(std::string_view field);

}  // namespace dek
