#include "vmvcli/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>

#include "vmvcli/csv.hpp"

namespace vmvcli {

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string() + " for digest");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw IoError("sha256 unavailable");
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

void write_manifest(const std::filesystem::path& out_dir, const RunManifest& m) {
  const auto path = out_dir / "manifest.txt";
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "command: " << m.command << '\n';
  out << "version: " << m.version << '\n';
  if (m.master_seed) out << "master_seed: " << *m.master_seed << '\n';
  out << "threads: " << m.threads << '\n';
  out << "wall_time_s: " << format_number(m.wall_time_s) << '\n';
  for (const auto& [k, v] : m.details) out << k << ": " << v << '\n';
  out << "outputs:\n";
  for (const auto& f : m.outputs) out << "  " << f << " sha256=" << sha256_file(out_dir / f) << '\n';
  out << "config:\n";
  out << "--- begin config ---\n" << m.config_echo << "--- end config ---\n";
}

}  // namespace vmvcli
