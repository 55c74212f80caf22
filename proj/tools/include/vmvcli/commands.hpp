#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace vmvcli {

struct Invocation {
  std::string command;
  std::optional<std::filesystem::path> config;
  /// Falls back to $VMV_OUT_DIR, then the working directory.
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::uint64_t> seed;
  std::size_t threads = 0;
  /// section.key=value overrides applied on top of the config file.
  std::vector<std::string> sets;
  std::vector<std::string> positional;
};

const std::vector<std::string>& command_names();

/// Runs one command. On failure prints a single line
/// `error: <category>: <message>` to err and returns nonzero.
int run(const Invocation& inv, std::ostream& out, std::ostream& err);

}  // namespace vmvcli
