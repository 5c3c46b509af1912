#include "bathy/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bathy/errors.hpp"

namespace bathy::csv {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    const auto cell = line.substr(start, pos == std::string_view::npos ? line.npos : pos - start);
    cells.emplace_back(trim(cell));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  std::ostringstream msg;
  msg << source << ": missing column '" << name << "'";
  throw ParseError(msg.str());
}

Table read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open '" + path.string() + "'");
  }
  Table t;
  t.source = path.string();
  std::string line;
  int lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (lineno == 1 && view.substr(0, 3) == "\xEF\xBB\xBF") view.remove_prefix(3);
    if (trim(view).empty()) continue;
    if (!have_header) {
      t.header = split(view);
      have_header = true;
      continue;
    }
    auto cells = split(view);
    if (cells.size() != t.header.size()) {
      std::ostringstream msg;
      msg << t.source << ":" << lineno << ": expected " << t.header.size() << " fields, found "
          << cells.size();
      throw ParseError(msg.str());
    }
    t.rows.push_back(std::move(cells));
    t.line_numbers.push_back(lineno);
  }
  if (!have_header) throw ParseError(t.source + ": empty file (no header)");
  return t;
}

double parse_double(std::string_view cell, const std::string& source, int line) {
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (cell.empty() || ec != std::errc() || ptr != last) {
    std::ostringstream msg;
    msg << source << ":" << line << ": cannot parse number '" << cell << "'";
    throw ParseError(msg.str());
  }
  return value;
}

std::string format(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw ParseError("write failed for '" + path.string() + "'");
}

}  // namespace bathy::csv
