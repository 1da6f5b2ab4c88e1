#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace driveloop {

inline constexpr std::string_view kToolVersion = "driveloop 0.1.0";

// Every run writes a manifest beside its outputs: the exact command, resolved
// config, seed, and content hashes of inputs and outputs, so any artifact can
// be reproduced from its manifest alone.
struct Manifest {
  std::string command;
  std::string resolved_config_json;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> inputs;   // path, fnv1a64 hex
  std::vector<std::pair<std::string, std::string>> outputs;  // path, fnv1a64 hex
};

std::string file_hash_hex(const std::filesystem::path& path);

void write_manifest(const Manifest& manifest, const std::filesystem::path& path);

}  // namespace driveloop
