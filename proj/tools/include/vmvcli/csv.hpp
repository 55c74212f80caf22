#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace vmvcli {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal form that reads back to the same double.
std::string format_number(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Reads numeric CSV. A first line that does not parse as numbers is taken
/// as the header. Every row must have the same number of columns.
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace vmvcli
