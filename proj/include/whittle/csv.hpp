#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace whittle {

// Locale-independent shortest-roundtrip formatting (std::to_chars); the CSV
// contract requires byte-identical output for identical inputs.
std::string csv_number(double x);
std::string csv_number(long x);
std::string csv_number(std::uint64_t x);

// Minimal RFC-4180-style writer: comma delimited, one header row, "\n" line
// ends, quoting only when a cell contains a comma, quote or newline.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path);  // creates parent directories

    void row(const std::vector<std::string>& cells);

  private:
    std::ofstream out_;
};

}  // namespace whittle
