#include "nuggetbench/report/manifest.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "nuggetbench/core/clock.hpp"
#include "nuggetbench/core/error.hpp"

namespace nb::report {

void RunManifest::add_input(const std::string& path) {
  inputs.emplace_back(path, file_digest(path));
}

std::string RunManifest::to_json_fragment() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["version"] = version;
  j["timestamp"] = timestamp;
  j["seed"] = seed;
  j["config_digest"] = config_digest;
  nlohmann::ordered_json ins = nlohmann::ordered_json::array();
  for (const auto& [path, digest] : inputs) {
    ins.push_back({{"path", path}, {"digest", digest}});
  }
  j["inputs"] = std::move(ins);
  return j.dump();
}

RunManifest make_manifest(std::string command, std::uint64_t seed) {
  RunManifest m;
  m.command = std::move(command);
  m.seed = seed;
  m.timestamp = run_timestamp();
  return m;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for digest");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 14];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    std::streamsize n = in.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
    if (!in) break;
  }
  char hex[32];
  std::snprintf(hex, sizeof(hex), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return hex;
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path() && !target.parent_path().empty()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out) throw IoError("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("cannot rename '" + tmp.string() + "' to '" + path + "': " + ec.message());
}

}  // namespace nb::report
