#include "vmvcli/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace vmvcli {

std::string format_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (std::size_t c = 0; c < table.header.size(); ++c) out << (c ? "," : "") << table.header[c];
  if (!table.header.empty()) out << '\n';
  std::string line;
  for (const auto& row : table.rows) {
    line.clear();
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) line += ',';
      line += format_number(row[c]);
    }
    out << line << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

namespace {

bool parse_row(const std::string& line, std::vector<double>& out) {
  out.clear();
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t end = line.find(',', pos);
    if (end == std::string::npos) end = line.size();
    std::size_t b = pos, e = end;
    while (b < e && (line[b] == ' ' || line[b] == '\t')) ++b;
    while (e > b && (line[e - 1] == ' ' || line[e - 1] == '\t' || line[e - 1] == '\r')) --e;
    double v = 0.0;
    const auto res = std::from_chars(line.data() + b, line.data() + e, v);
    if (b == e || res.ec != std::errc() || res.ptr != line.data() + e) return false;
    out.push_back(v);
    pos = end + 1;
  }
  return true;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  CsvTable t;
  std::string line;
  std::vector<double> row;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!parse_row(line, row)) {
      if (lineno == 1) {
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) {
          while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
          t.header.push_back(cell);
        }
        continue;
      }
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": not a row of numbers");
    }
    if (!t.rows.empty() && row.size() != t.rows.front().size())
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                    std::to_string(t.rows.front().size()) + " columns");
    t.rows.push_back(row);
  }
  return t;
}

}  // namespace vmvcli
