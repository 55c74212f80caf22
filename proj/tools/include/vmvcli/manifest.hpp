#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vmvcli {

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

struct RunManifest {
  std::string command;
  std::string config_echo;
  std::optional<std::uint64_t> master_seed;
  std::string version;
  double wall_time_s = 0.0;
  std::size_t threads = 0;
  /// Files written by the run, relative to the output directory.
  std::vector<std::string> outputs;
  /// Extra provenance reported by the library.
  std::vector<std::pair<std::string, std::string>> details;
};

/// Writes manifest.txt into out_dir, digesting every listed output.
void write_manifest(const std::filesystem::path& out_dir, const RunManifest& m);

}  // namespace vmvcli
