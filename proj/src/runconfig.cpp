#include "zc/runconfig.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "zc/version.hpp"

namespace zc::config {

std::uint64_t RunConfig::hash() const {
  const std::string text = canonical();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string RunConfig::hash_hex() const {
  std::ostringstream os;
  os << std::hex << hash();
  return os.str();
}

RunConfig RunConfig::from_text(const std::string& text) {
  RunConfig cfg;
  cfg.params = nlohmann::json::parse(text);
  return cfg;
}

std::string write_manifest(const RunConfig& cfg, const std::string& out_path,
                           double wall_ms, const std::vector<std::string>& outputs) {
  nlohmann::json manifest;
  manifest["config"] = cfg.params;
  manifest["config_hash"] = cfg.hash_hex();
  manifest["version"] = zc::kVersion;
  manifest["wall_ms"] = wall_ms;
  manifest["outputs"] = outputs;
  const std::string path = out_path + ".manifest.json";
  std::ofstream os(path);
  os << manifest.dump(2) << "\n";
  return path;
}

}  // namespace zc::config
