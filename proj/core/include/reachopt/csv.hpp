#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace reachopt::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Shortest exact decimal form of v (round-trips bit-exactly).
std::string format(double v);

Table read(const std::filesystem::path& path);

void write(const std::filesystem::path& path, const std::vector<std::string>& header,
           const std::vector<std::vector<double>>& rows);

/// Render to a string with the same formatting `write` uses.
std::string render(const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& rows);

}  // namespace reachopt::csv
