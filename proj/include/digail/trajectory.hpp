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

#ifndef DIGAIL_TRAJECTORY_HPP_
#define DIGAIL_TRAJECTORY_HPP_

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "digail/rng.hpp"

namespace digail {

// One (state, action) step of an episode. Discrete actions are stored as a
// one-element vector holding the action index; reward is only populated by
// evaluation rollouts and is not serialized.
struct Step {
  Vec state;
  Vec action;
  double reward = 0.0;
};

// One episode. phases, when nonempty, holds a ground-truth sub-task label
// per step and is used for segmentation scoring only.
struct Trajectory {
  std::string env_id;
  std::vector<Step> steps;
  std::vector<int> phases;

  int length() const { return static_cast<int>(steps.size()); }
  bool has_phases() const { return !phases.empty(); }
};

// Per-file metadata carried by the first record of a dataset file.
struct DatasetHeader {
  int format_version = 1;
  std::string env_id;
  int state_dim = 0;
  int action_dim = 0;  // number of actions for discrete envs
  bool discrete_actions = false;
};

struct Dataset {
  DatasetHeader header;
  std::vector<Trajectory> trajectories;
};

inline void validate_trajectory(const Trajectory& tr, const DatasetHeader& h,
                                const std::string& where) {
  if (tr.length() < 2)
    throw std::runtime_error(where + ": trajectory has fewer than 2 steps");
  if (tr.env_id != h.env_id)
    throw std::runtime_error(where + ": env_id '" + tr.env_id +
                             "' does not match header '" + h.env_id + "'");
  if (tr.has_phases() && static_cast<int>(tr.phases.size()) != tr.length())
    throw std::runtime_error(where + ": phase label count != step count");
  const std::size_t adim = h.discrete_actions ? 1u : static_cast<std::size_t>(h.action_dim);
  for (const Step& s : tr.steps) {
    if (static_cast<int>(s.state.size()) != h.state_dim)
      throw std::runtime_error(where + ": state dimension mismatch");
    if (s.action.size() != adim)
      throw std::runtime_error(where + ": action dimension mismatch");
    if (h.discrete_actions) {
      const int a = static_cast<int>(s.action[0]);
      if (a < 0 || a >= h.action_dim || s.action[0] != static_cast<double>(a))
        throw std::runtime_error(where + ": discrete action out of range");
    }
  }
}

// Dataset files are newline-delimited JSON: a header record on line 1,
// then one trajectory per line. Doubles round-trip losslessly through the
// shortest-representation formatting of the JSON writer.
inline void save_trajectories(const std::string& path, const Dataset& ds) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  {
    nlohmann::ordered_json h;
    h["format_version"] = ds.header.format_version;
    h["env_id"] = ds.header.env_id;
    h["state_dim"] = ds.header.state_dim;
    h["action_dim"] = ds.header.action_dim;
    h["discrete_actions"] = ds.header.discrete_actions;
    out << h.dump() << "\n";
  }
  int line = 2;
  for (const Trajectory& tr : ds.trajectories) {
    validate_trajectory(tr, ds.header, path + ":" + std::to_string(line));
    nlohmann::ordered_json rec;
    rec["env_id"] = tr.env_id;
    nlohmann::ordered_json states = nlohmann::ordered_json::array();
    nlohmann::ordered_json actions = nlohmann::ordered_json::array();
    for (const Step& s : tr.steps) {
      states.push_back(s.state);
      actions.push_back(s.action);
    }
    rec["states"] = std::move(states);
    rec["actions"] = std::move(actions);
    if (tr.has_phases())
      rec["phases"] = tr.phases;
    else
      rec["phases"] = nullptr;
    out << rec.dump() << "\n";
    ++line;
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline Dataset load_trajectories(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  Dataset ds;
  std::string line;
  int lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(path + ": parse error at line " +
                               std::to_string(lineno) + ": " + e.what());
    }
    const std::string where = path + ": line " + std::to_string(lineno);
    try {
      if (!have_header) {
        ds.header.format_version = j.at("format_version").get<int>();
        if (ds.header.format_version != 1)
          throw std::runtime_error(where + ": unsupported format_version");
        ds.header.env_id = j.at("env_id").get<std::string>();
        ds.header.state_dim = j.at("state_dim").get<int>();
        ds.header.action_dim = j.at("action_dim").get<int>();
        ds.header.discrete_actions = j.at("discrete_actions").get<bool>();
        have_header = true;
        continue;
      }
      Trajectory tr;
      tr.env_id = j.at("env_id").get<std::string>();
      auto states = j.at("states");
      auto actions = j.at("actions");
      if (states.size() != actions.size())
        throw std::runtime_error(where + ": states/actions length mismatch");
      tr.steps.resize(states.size());
      for (std::size_t t = 0; t < states.size(); ++t) {
        tr.steps[t].state = states[t].get<Vec>();
        tr.steps[t].action = actions[t].get<Vec>();
      }
      if (!j.at("phases").is_null()) tr.phases = j.at("phases").get<std::vector<int>>();
      validate_trajectory(tr, ds.header, where);
      ds.trajectories.push_back(std::move(tr));
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(where + ": malformed record: " + e.what());
    }
  }
  if (!have_header)
    throw std::runtime_error(path + ": parse error at line 1: missing header record");
  return ds;
}

}  // namespace digail

#endif  // DIGAIL_TRAJECTORY_HPP_
