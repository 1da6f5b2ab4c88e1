#include "driveloop/manifest.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "driveloop/error.hpp"
#include "driveloop/rng.hpp"

namespace driveloop {

std::string file_hash_hex(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("path", "cannot hash missing file: " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  std::uint64_t h = fnv1a64(
      std::span<const std::byte>(reinterpret_cast<const std::byte*>(bytes.data()),
                                 bytes.size()));
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

void write_manifest(const Manifest& manifest, const std::filesystem::path& path) {
  nlohmann::json j;
  j["schema"] = "driveloop/manifest/v1";
  j["tool_version"] = std::string(kToolVersion);
  j["command"] = manifest.command;
  j["seed"] = manifest.seed;
  j["config"] = nlohmann::json::parse(manifest.resolved_config_json);
  auto pairs = [](const std::vector<std::pair<std::string, std::string>>& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [p, h] : v) arr.push_back({{"path", p}, {"fnv1a64", h}});
    return arr;
  };
  j["inputs"] = pairs(manifest.inputs);
  j["outputs"] = pairs(manifest.outputs);
  std::ofstream out(path);
  if (!out) throw ValidationError("path", "cannot write manifest: " + path.string());
  out << j.dump(2) << "\n";
}

}  // namespace driveloop
