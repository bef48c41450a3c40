#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eqloc::csv {

struct Row {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based
};

struct Table {
  std::string source;  // file name used in error messages
  std::vector<std::string> header;
  std::vector<Row> rows;
  std::size_t header_line = 1;

  /// Index of a header column, if present.
  std::optional<std::size_t> column(std::string_view name) const;
  /// Index of a header column; ParseError if absent.
  std::size_t require_column(std::string_view name) const;
};

/// RFC 4180 style: comma separated, optional double quotes, "" escapes a quote.
/// Blank lines are skipped. Every row must have as many fields as the header.
Table read(std::istream& in, const std::string& source);
Table read_file(const std::string& path);

/// Locale-independent decimal parse ('.' separator). ParseError names the
/// source, line and column on failure.
double parse_double(const Table& table, const Row& row, std::size_t column);

std::string escape(std::string_view field);

}  // namespace eqloc::csv
