#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace bathy::csv {

/// A comma-separated file split into cells. Blank lines are skipped; every
/// other line becomes a row and keeps its 1-based source line number.
struct Table {
  std::string source;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;

  /// Column index by header name; ParseError if absent.
  std::size_t column(std::string_view name) const;
};

Table read(const std::filesystem::path& path);

/// Strict decimal parse of a whole cell; ParseError naming source and line.
double parse_double(std::string_view cell, const std::string& source, int line);

/// `%.17g`: 17 significant digits, reads back to the same double.
std::string format(double value);

std::vector<std::string> split(std::string_view line, char sep = ',');

std::string_view trim(std::string_view s);

/// Writes `content` to `path`, creating parent directories.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace bathy::csv
