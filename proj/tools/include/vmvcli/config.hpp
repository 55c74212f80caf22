#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace vmvcli {

/// A config value that is missing, malformed or not part of the schema.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& field, const std::string& expected, const std::string& got)
      : std::runtime_error(field + ": expected " + expected + ", got " + got) {}
};

/// Run configuration: INI-style text with `[section]` headers and
/// `key = value` lines. Strings may be double-quoted; lists are written
/// `[a, b, c]` or as comma/space separated values. Every value a command
/// reads, defaults included, is recorded for the echo.
class Config {
 public:
  static Config parse(const std::string& text);
  static Config load(const std::filesystem::path& path);

  /// Sets or replaces section.key before anything is read.
  void set(const std::string& section, const std::string& key, const std::string& value);
  bool has(const std::string& section, const std::string& key) const;
  bool has_section(const std::string& section) const;

  double number(const std::string& section, const std::string& key, std::optional<double> def = std::nullopt);
  long integer(const std::string& section, const std::string& key, std::optional<long> def = std::nullopt);
  std::uint64_t seed(const std::string& section, const std::string& key, std::optional<std::uint64_t> def);
  bool boolean(const std::string& section, const std::string& key, std::optional<bool> def = std::nullopt);
  std::string text(const std::string& section, const std::string& key,
                   std::optional<std::string> def = std::nullopt, const std::vector<std::string>& choices = {});
  std::vector<double> numbers(const std::string& section, const std::string& key,
                              std::optional<std::vector<double>> def = std::nullopt);
  std::vector<long> integers(const std::string& section, const std::string& key,
                             std::optional<std::vector<long>> def = std::nullopt);

  /// Throws SchemaError for any key present in the input that no read used.
  void check_unused() const;
  /// Effective configuration in the input syntax; parses back to the same values.
  std::string echo() const;

 private:
  std::optional<std::string> raw(const std::string& section, const std::string& key);
  void record(const std::string& section, const std::string& key, const std::string& value);

  std::map<std::string, std::map<std::string, std::string>> values_;
  std::vector<std::string> section_order_;
  std::set<std::string> used_;
  std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> echo_;
};

}  // namespace vmvcli
