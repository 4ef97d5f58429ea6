#include "avbench/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "avbench/error.hpp"

namespace avbench::csv {

int Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

namespace {

// Splits one logical record starting at `pos`; returns false at end of input.
bool next_record(std::string_view text, std::size_t& pos, Row& out, std::size_t& line) {
  out.clear();
  if (pos >= text.size()) return false;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  while (pos < text.size()) {
    char c = text[pos];
    if (quoted) {
      if (c == '"') {
        if (pos + 1 < text.size() && text[pos + 1] == '"') {
          field.push_back('"');
          pos += 2;
          continue;
        }
        quoted = false;
        ++pos;
        continue;
      }
      if (c == '\n') ++line;
      field.push_back(c);
      ++pos;
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
      ++pos;
      continue;
    }
    if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
      field_started = false;
      ++pos;
      continue;
    }
    if (c == '\r') {
      ++pos;
      continue;
    }
    if (c == '\n') {
      ++pos;
      ++line;
      out.push_back(std::move(field));
      return true;
    }
    field.push_back(c);
    field_started = true;
    ++pos;
  }
  if (quoted) {
    throw Error(Errc::parse_error, "unterminated quoted field near line " + std::to_string(line));
  }
  out.push_back(std::move(field));
  return true;
}

}  // namespace

Table parse(std::string_view text, bool skip_comments) {
  Table table;
  std::size_t pos = 0;
  std::size_t line = 1;
  Row row;
  bool have_header = false;
  while (true) {
    if (skip_comments && pos < text.size() && text[pos] == '#') {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      std::string_view comment = text.substr(pos + 1, end - pos - 1);
      if (!comment.empty() && comment.back() == '\r') comment.remove_suffix(1);
      table.comments.emplace_back(comment);
      pos = end + 1;
      ++line;
      continue;
    }
    if (!next_record(text, pos, row, line)) break;
    if (row.size() == 1 && row[0].empty()) continue;  // blank line
    if (!have_header) {
      table.header = row;
      have_header = true;
    } else {
      table.rows.push_back(row);
    }
  }
  return table;
}

Table read_file(const std::filesystem::path& path, bool skip_comments) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), skip_comments);
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_row(const Row& row) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out.push_back(',');
    out += escape(row[i]);
  }
  out.push_back('\n');
  return out;
}

std::string fixed(double value, int decimals) {
  if (!std::isfinite(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  std::string s = buf;
  if (s.size() > 1 && s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

}  // namespace avbench::csv
