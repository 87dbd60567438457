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

#ifndef DIGAIL_CHAIN_MODEL_IO_HPP_
#define DIGAIL_CHAIN_MODEL_IO_HPP_

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "digail/info_oracle.hpp"
#include "digail/ini.hpp"

namespace digail {

// Chain models share the config file syntax: a [model] section with T,
// n_tau, n_c, then [p_tau] and [p_c] sections with one key per step
// ("t0", "t1", ...) whose value is the whitespace-flattened table in the
// row layout documented on DiscreteChainModel.
inline std::string chain_model_to_text(const DiscreteChainModel& m) {
  validate_chain_model(m);
  std::ostringstream o;
  o << "[model]\n";
  o << "T = " << m.T << "\n";
  o << "n_tau = " << m.n_tau << "\n";
  o << "n_c = " << m.n_c << "\n";
  o << "\n[p_tau]\n";
  for (int t = 0; t < m.T; ++t) {
    o << "t" << t << " =";
    for (double v : m.p_tau[t]) o << " " << format_double(v);
    o << "\n";
  }
  o << "\n[p_c]\n";
  for (int t = 0; t < m.T; ++t) {
    o << "t" << t << " =";
    for (double v : m.p_c[t]) o << " " << format_double(v);
    o << "\n";
  }
  return o.str();
}

inline DiscreteChainModel chain_model_from_text(const std::string& text,
                                                const std::string& name) {
  DiscreteChainModel m;
  m.T = 0;
  bool have_t = false, have_ntau = false, have_nc = false;
  std::vector<IniEntry> table_entries;
  for (const IniEntry& e : parse_ini_text(text, name)) {
    if (e.section == "model") {
      if (e.key == "T") {
        m.T = std::stoi(e.value);
        have_t = true;
      } else if (e.key == "n_tau") {
        m.n_tau = std::stoi(e.value);
        have_ntau = true;
      } else if (e.key == "n_c") {
        m.n_c = std::stoi(e.value);
        have_nc = true;
      } else {
        throw std::runtime_error(name + ": unknown key '" + e.key + "' in [model]");
      }
    } else if (e.section == "p_tau" || e.section == "p_c") {
      table_entries.push_back(e);
    } else {
      throw std::runtime_error(name + ": unknown section [" + e.section + "]");
    }
  }
  if (!have_t || !have_ntau || !have_nc)
    throw std::runtime_error(name + ": [model] must define T, n_tau, n_c");
  m.p_tau.resize(m.T);
  m.p_c.resize(m.T);
  for (const IniEntry& e : table_entries) {
    if (e.key.size() < 2 || e.key[0] != 't')
      throw std::runtime_error(name + ": table keys must be t0..t" +
                               std::to_string(m.T - 1) + ", got '" + e.key + "'");
    const int t = std::stoi(e.key.substr(1));
    if (t < 0 || t >= m.T)
      throw std::runtime_error(name + ": step index out of range in key '" + e.key + "'");
    Vec table;
    std::istringstream vs(e.value);
    double v;
    while (vs >> v) table.push_back(v);
    if (e.section == "p_tau")
      m.p_tau[t] = std::move(table);
    else
      m.p_c[t] = std::move(table);
  }
  validate_chain_model(m);
  return m;
}

inline void chain_model_save(const std::string& path, const DiscreteChainModel& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << chain_model_to_text(m);
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline DiscreteChainModel chain_model_load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return chain_model_from_text(buf.str(), path);
}

}  // namespace digail

#endif  // DIGAIL_CHAIN_MODEL_IO_HPP_
