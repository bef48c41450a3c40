#include "eqloc/csv.hpp"

#include "eqloc/error.hpp"

#include <charconv>
#include <fstream>
#include <istream>

namespace eqloc::csv {

std::optional<std::size_t> Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t Table::require_column(std::string_view name) const {
  if (auto c = column(name)) return *c;
  throw ParseError(source, header_line, 0, "missing required column '" + std::string(name) + "'");
}

namespace {

// Splits one logical record; quoted fields may span physical lines.
bool next_record(std::istream& in, const std::string& source, std::size_t& line, Row& row) {
  row.fields.clear();
  std::string text;
  while (true) {
    if (!std::getline(in, text)) return false;
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (!text.empty()) break;
  }
  row.line = line;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  std::size_t i = 0;
  while (true) {
    if (i == text.size()) {
      if (quoted) {
        std::string more;
        if (!std::getline(in, more)) {
          throw ParseError(source, row.line, row.fields.size() + 1, "unterminated quoted field");
        }
        ++line;
        if (!more.empty() && more.back() == '\r') more.pop_back();
        field += '\n';
        text = std::move(more);
        i = 0;
        continue;
      }
      row.fields.push_back(std::move(field));
      return true;
    }
    const char c = text[i++];
    if (quoted) {
      if (c == '"') {
        if (i < text.size() && text[i] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == ',') {
      row.fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else if (c == '"' && field.empty() && !was_quoted) {
      quoted = true;
      was_quoted = true;
    } else if (was_quoted) {
      throw ParseError(source, row.line, row.fields.size() + 1, "text after closing quote");
    } else {
      field += c;
    }
  }
}

}  // namespace

Table read(std::istream& in, const std::string& source) {
  Table table;
  table.source = source;
  std::size_t line = 0;
  Row row;
  if (!next_record(in, source, line, row)) throw ParseError(source, 1, 1, "empty file, expected a header");
  // Tolerate a UTF-8 byte order mark.
  if (!row.fields.empty() && row.fields[0].rfind("\xEF\xBB\xBF", 0) == 0) row.fields[0].erase(0, 3);
  table.header = std::move(row.fields);
  table.header_line = row.line;
  while (next_record(in, source, line, row)) {
    if (row.fields.size() != table.header.size()) {
      throw ParseError(source, row.line, std::min(row.fields.size(), table.header.size()) + 1,
                       "expected " + std::to_string(table.header.size()) + " fields, found " +
                           std::to_string(row.fields.size()));
    }
    table.rows.push_back(row);
  }
  return table;
}

Table read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, 0, "cannot open file");
  return read(in, path);
}

double parse_double(const Table& table, const Row& row, std::size_t column) {
  const std::string& text = row.fields.at(column);
  const std::string field_name = column < table.header.size() ? table.header[column] : "?";
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw ParseError(table.source, row.line, column + 1,
                     "field '" + field_name + "': cannot parse '" + text + "' as a number");
  }
  return value;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace eqloc::csv
