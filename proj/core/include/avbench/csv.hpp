#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace avbench::csv {

using Row = std::vector<std::string>;

/// RFC 4180 style: fields containing separators, quotes or newlines are
/// quoted; lines starting with '#' are comments when skip_comments is set.
struct Table {
  Row header;
  std::vector<Row> rows;
  std::vector<std::string> comments;  // text after the leading '#'

  /// Index of a header column, or -1.
  int column(std::string_view name) const;
};

Table parse(std::string_view text, bool skip_comments = true);
Table read_file(const std::filesystem::path& path, bool skip_comments = true);

std::string escape(std::string_view field);
std::string format_row(const Row& row);

/// Fixed-point rendering used by every report so output stays byte-stable.
std::string fixed(double value, int decimals);

}  // namespace avbench::csv
