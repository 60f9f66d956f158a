#pragma once
// Run configuration with a canonical serialized form and a stable hash, plus
// the run manifest written next to every output artifact.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace zc::config {

struct RunConfig {
  nlohmann::json params = nlohmann::json::object();

  // Canonical JSON text: keys sorted (nlohmann object order), fixed spacing.
  std::string canonical() const { return params.dump(); }

  // FNV-1a over the canonical text.
  std::uint64_t hash() const;
  std::string hash_hex() const;

  static RunConfig from_text(const std::string& text);
};

// Manifest JSON: configuration, its hash, software version, wall time and the
// list of produced files. Returns the manifest path.
std::string write_manifest(const RunConfig& cfg, const std::string& out_path,
                           double wall_ms,
                           const std::vector<std::string>& outputs);

}  // namespace zc::config
