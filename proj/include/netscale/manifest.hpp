#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace netscale {

// Provenance record written next to every command's outputs. Two runs with
// equal command, config, seed and input digests must list equal output
// digests; wall time is informational only.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> config;
  std::uint64_t rng_seed = 0;
  std::map<std::string, std::string> input_digests;   // path -> digest
  std::vector<std::pair<std::string, std::string>> outputs;  // path, digest
  double wall_seconds = 0.0;
};

std::string fnv1a64_hex(std::string_view bytes);
std::string digest_file(const std::filesystem::path& path);

void write_manifest(const std::filesystem::path& path, const RunManifest& m);

}  // namespace netscale
