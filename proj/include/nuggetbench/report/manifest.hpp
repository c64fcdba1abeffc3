#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace nb::report {

inline constexpr const char* kToolkitVersion = "0.1.0";

// Identifies a run: command, input digests, seed, version, timestamp.
// Embedded in every emitted report; equal manifests imply equal reports.
struct RunManifest {
  std::string command;
  std::string config_digest = "-";
  std::vector<std::pair<std::string, std::string>> inputs;  // (path, digest)
  std::uint64_t seed = 0;
  std::string version = kToolkitVersion;
  std::string timestamp;

  void add_input(const std::string& path);
  std::string to_json_fragment() const;  // serialized object, for embedding
};

RunManifest make_manifest(std::string command, std::uint64_t seed);

// FNV-1a 64-bit over the file bytes, hex-encoded; "fnv1a64:<16 hex>".
std::string file_digest(const std::string& path);

// Temp file in the target directory, then rename.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace nb::report
