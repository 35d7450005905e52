#include "dimred/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "dimred/errors.hpp"

namespace dimred {

Table::Table(std::vector<std::string> column_names)
    : names(std::move(column_names)), columns(names.size()) {}

void Table::add_row(const std::vector<double>& row) {
  if (row.size() != names.size()) throw ValidationError("row width does not match the table header");
  for (std::size_t i = 0; i < row.size(); ++i) columns[i].push_back(row[i]);
}

std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.names.size(); ++i) {
    if (i) out += ',';
    out += table.names[i];
  }
  out += '\n';
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c) out += ',';
      out += format_real(table.columns[c][r]);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

Table parse_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto nl = text.find('\n', start);
    lines.push_back(text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start));
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  if (lines.empty()) throw ParseError("empty CSV input");
  Table table;
  for (auto name : split(lines.front())) table.names.emplace_back(name);
  table.columns.resize(table.names.size());
  for (std::size_t l = 1; l < lines.size(); ++l) {
    if (lines[l].empty()) continue;
    const auto cells = split(lines[l]);
    if (cells.size() != table.names.size()) throw ParseError("CSV row width mismatch", static_cast<int>(l + 1));
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v = 0.0;
      const auto res = std::from_chars(cells[c].data(), cells[c].data() + cells[c].size(), v);
      if (res.ec != std::errc() || res.ptr != cells[c].data() + cells[c].size())
        throw ParseError("bad number '" + std::string(cells[c]) + "' in CSV", static_cast<int>(l + 1));
      table.columns[c].push_back(v);
    }
  }
  return table;
}

void emit_csv(const Table& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << to_csv(table);
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

Table read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

}  // namespace dimred
