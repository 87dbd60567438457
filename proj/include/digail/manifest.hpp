// Copyright 2026 The digail Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DIGAIL_MANIFEST_HPP_
#define DIGAIL_MANIFEST_HPP_

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace digail {

constexpr const char* kToolVersion = "1.0.0";

// Record of one command invocation: what ran, with which seed and config,
// and which files it produced (paths relative to the run directory). The
// manifest is written only after every declared output exists, so a missing
// manifest marks a partial run.
struct RunManifest {
  std::string tool_version = kToolVersion;
  std::string command;
  std::uint64_t seed = 0;
  std::string config_text;  // canonical INI snapshot, empty when configless
  std::vector<std::pair<std::string, std::string>> outputs;
};

inline void manifest_add(RunManifest& m, const std::string& name,
                         const std::string& path) {
  m.outputs.emplace_back(name, path);
}

inline std::string manifest_output(const RunManifest& m, const std::string& name) {
  for (const auto& [key, path] : m.outputs)
    if (key == name) return path;
  throw std::runtime_error("manifest: missing output '" + name + "'");
}

inline std::string manifest_to_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["tool_version"] = m.tool_version;
  j["command"] = m.command;
  j["seed"] = m.seed;
  j["config"] = m.config_text;
  nlohmann::ordered_json outs = nlohmann::ordered_json::object();
  for (const auto& [name, path] : m.outputs) outs[name] = path;
  j["outputs"] = outs;
  return j.dump(2) + "\n";
}

inline RunManifest manifest_from_json(const std::string& text, const std::string& name) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(name + ": " + e.what());
  }
  RunManifest m;
  m.tool_version = j.at("tool_version").get<std::string>();
  m.command = j.at("command").get<std::string>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.config_text = j.at("config").get<std::string>();
  for (const auto& [key, val] : j.at("outputs").items())
    m.outputs.emplace_back(key, val.get<std::string>());
  return m;
}

inline void manifest_save(const std::string& path, const RunManifest& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + path);
  out << manifest_to_json(m);
}

inline RunManifest manifest_load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return manifest_from_json(buf.str(), path);
}

}  // namespace digail

#endif  // DIGAIL_MANIFEST_HPP_
