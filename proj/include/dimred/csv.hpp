#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace dimred {

// Named columns of reals, all of equal length.
struct Table {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;

  Table() = default;
  explicit Table(std::vector<std::string> column_names);

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  void add_row(const std::vector<double>& row);
  bool operator==(const Table&) const = default;
};

// Shortest decimal form that parses back to the same double (<= 17 digits).
std::string format_real(double v);

// Header row, then one comma-separated row per record, '\n' terminated.
std::string to_csv(const Table& table);
Table parse_csv(std::string_view text);

// Throws Error if the file cannot be written.
void emit_csv(const Table& table, const std::filesystem::path& path);
Table read_csv(const std::filesystem::path& path);

}  // namespace dimred
