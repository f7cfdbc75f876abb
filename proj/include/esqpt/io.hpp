#pragma once

// Flat output tables.
//
//   CSV  : "#key=value" metadata lines, a header row, then data rows
//   JSON : {"meta": {...}, "columns": [...], "rows": [[...], ...]}
//
// Real numbers are written with 17 significant digits in both formats, so the
// two files of one run carry identical numeric text. Files are written to a
// temporary sibling and renamed into place.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace esqpt {

enum class Format { csv, json };

std::string_view to_string(Format f);
Format parse_format(std::string_view s);

using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;
using Metadata = std::vector<std::pair<std::string, std::string>>;

struct Table {
  Metadata meta;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_meta(std::string key, std::string value) { meta.emplace_back(std::move(key), std::move(value)); }
};

// 17 significant digits.
std::string format_real(double v);
// Shortest text that reads back to the same double; used for metadata.
std::string format_exact(double v);

std::string render(const Table& table, Format format);

// Throws std::runtime_error when the file cannot be written; nothing is left at
// `path` in that case.
void write_table(const Table& table, const std::string& path, Format format);

// Format by content: JSON if the first non-space byte is '{'.
Format sniff_format(std::string_view content);

// Metadata block of a file written by write_table.
Metadata read_metadata(const std::string& path);
Metadata parse_metadata(std::string_view content);

}  // namespace esqpt
