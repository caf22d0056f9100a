#include "netscale/manifest.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "netscale/error.hpp"

namespace netscale {

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = digits[h & 0xf];
    h >>= 4;
  }
  return s;
}

std::string digest_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "' for digest");
  std::ostringstream buf;
  buf << in.rdbuf();
  return fnv1a64_hex(buf.str());
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
  nlohmann::json outputs = nlohmann::json::array();
  for (const auto& [out_path, digest] : m.outputs) {
    outputs.push_back({{"path", out_path}, {"digest", digest}});
  }
  nlohmann::json j{{"schema", "netscale.manifest/1"},
                   {"command", m.command},
                   {"config", m.config},
                   {"rng_seed", m.rng_seed},
                   {"input_digests", m.input_digests},
                   {"outputs", std::move(outputs)},
                   {"wall_seconds", m.wall_seconds}};
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

}  // namespace netscale
