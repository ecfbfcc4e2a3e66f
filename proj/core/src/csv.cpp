#include "reachopt/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "reachopt/errors.hpp"

namespace reachopt::csv {

std::string format(double v) {
  char buf[32];
  // Shortest representation that round-trips; identical output for
  // identical bits, which keeps repeated runs byte-for-byte equal.
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

Table read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open CSV file: " + path.string());
  Table table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    if (line_no == 1) {
      while (std::getline(ss, cell, ',')) table.header.push_back(cell);
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      double value = 0.0;
      const char* begin = cell.data();
      const char* end = begin + cell.size();
      while (begin < end && *begin == ' ') ++begin;
      auto [ptr, ec] = std::from_chars(begin, end, value);
      if (ec != std::errc{}) {
        throw ParseError(path.string() + ":" + std::to_string(line_no) +
                         ": not a number: '" + cell + "'");
      }
      (void)ptr;
      row.push_back(value);
    }
    if (!table.header.empty() && row.size() != table.header.size()) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": expected " + std::to_string(table.header.size()) + " columns, got " +
                       std::to_string(row.size()));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string render(const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format(row[i]);
    }
    out += '\n';
  }
  return out;
}

void write(const std::filesystem::path& path, const std::vector<std::string>& header,
           const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write CSV file: " + path.string());
  out << render(header, rows);
}

}  // namespace reachopt::csv
