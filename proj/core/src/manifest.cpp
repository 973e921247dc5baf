#include "lobarena/manifest.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "lobarena/util/error.hpp"
#include "lobarena/util/hash.hpp"

namespace lobarena {

namespace fs = std::filesystem;

void RunManifest::add_output(const std::string& manifest_dir,
                             const std::string& file_path) {
  std::string rel =
      fs::relative(fs::path(file_path), fs::path(manifest_dir)).generic_string();
  outputs[rel] = sha256_file_hex(file_path);
}

void RunManifest::write(const std::string& path) const {
  nlohmann::json j;
  j["command"] = command;
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  j["tool_version"] = tool_version;
  j["wall_time_seconds"] = wall_time_seconds;
  j["inputs"] = inputs;
  j["outputs"] = outputs;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write manifest: ", path);
  out << j.dump(2) << '\n';
}

RunManifest RunManifest::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read manifest: ", path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("manifest ", path, ": ", e.what());
  }
  RunManifest m;
  try {
    m.command = j.at("command").get<std::string>();
    m.config_hash = j.at("config_hash").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.tool_version = j.at("tool_version").get<std::string>();
    m.wall_time_seconds = j.at("wall_time_seconds").get<double>();
    m.inputs = j.at("inputs").get<std::vector<std::string>>();
    m.outputs = j.at("outputs").get<std::map<std::string, std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error("manifest ", path, ": ", e.what());
  }
  return m;
}

bool same_artifacts(const RunManifest& a, const RunManifest& b) {
  return a.outputs == b.outputs;
}

}  // namespace lobarena
