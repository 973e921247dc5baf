#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace lobarena {

// Record of one pipeline stage: what ran, with which seed and config, and a
// checksum for every file it produced. Output paths are stored relative to
// the manifest's own directory so identical runs in different directories
// compare equal.
struct RunManifest {
  std::string command;
  std::string config_hash;  // sha256 of the resolved config, "" if none
  std::uint64_t seed = 0;
  std::string tool_version;
  double wall_time_seconds = 0.0;
  std::vector<std::string> inputs;
  std::map<std::string, std::string> outputs;  // relative path -> sha256

  // Checksums `file_path` and records it under its path relative to
  // `manifest_dir`.
  void add_output(const std::string& manifest_dir,
                  const std::string& file_path);

  void write(const std::string& path) const;
  static RunManifest load(const std::string& path);
};

// True iff both manifests list exactly the same artifacts with equal
// checksums (wall time and inputs are not compared).
bool same_artifacts(const RunManifest& a, const RunManifest& b);

}  // namespace lobarena
