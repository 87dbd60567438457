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

#ifndef DIGAIL_CONFIG_HPP_
#define DIGAIL_CONFIG_HPP_

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

#include "digail/ini.hpp"

namespace digail {

// Every tunable scalar of the two training stages. Defaults are per-env
// (see default_config); files override defaults; command-line flags
// override files.
struct TrainConfig {
  // [env]
  std::string env_id = "circleworld";
  std::string obs_encoding = "onehot";  // fourrooms only: onehot | xy

  // [vae]
  int k = 2;  // latent categories
  int vae_epochs = 1000;
  int vae_batch = 16;
  double vae_lr = 3e-4;
  double lambda_s = 1.0;
  double tau0 = 5.0;
  double tau_decay = 3e-3;
  double tau_floor = 0.1;

  // [digail]
  int epochs = 1000;
  int batch_size = 512;
  double lambda1 = 0.01;
  double lambda2 = 1e-3;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double ppo_clip = 0.2;
  int ppo_epochs = 4;
  int minibatches = 4;
  double lr = 3e-4;
  double l2_bc_weight = 0.0;
  std::string latent_source = "expert-demo";  // expert-demo | online-posterior
  bool warm_start = true;
  std::uint64_t seed = 0;
  int workers = 1;
};

inline TrainConfig default_config(const std::string& env_id) {
  TrainConfig c;
  c.env_id = env_id;
  if (env_id == "fourrooms") {
    c.k = 4;
    c.vae_epochs = 500;
    c.vae_batch = 32;
    c.lambda_s = 0.0;
    c.epochs = 1000;
    c.batch_size = 256;
    c.lambda1 = 0.1;
  } else if (env_id == "circleworld") {
    c.k = 2;
    c.vae_epochs = 1000;
    c.vae_batch = 16;
    c.lambda_s = 1.0;
    c.epochs = 1000;
    c.batch_size = 512;
    c.lambda1 = 0.01;
  } else if (env_id == "pendulum") {
    c.k = 4;
    c.vae_epochs = 1000;
    c.vae_batch = 16;
    c.lambda_s = 0.0;
    c.epochs = 2000;
    c.batch_size = 1024;
    c.lambda1 = 0.01;
  } else {
    throw std::invalid_argument("unknown env '" + env_id +
                                "' (expected fourrooms, circleworld, or pendulum)");
  }
  return c;
}

inline void validate_config(const TrainConfig& c) {
  if (c.env_id != "fourrooms" && c.env_id != "circleworld" && c.env_id != "pendulum")
    throw std::invalid_argument("config: unknown env '" + c.env_id + "'");
  if (c.obs_encoding != "onehot" && c.obs_encoding != "xy")
    throw std::invalid_argument("config: obs_encoding must be onehot or xy");
  if (c.k < 2) throw std::invalid_argument("config: k must be >= 2");
  if (c.vae_epochs <= 0 || c.epochs <= 0)
    throw std::invalid_argument("config: epochs must be > 0");
  if (c.vae_batch <= 0 || c.batch_size <= 0)
    throw std::invalid_argument("config: batch sizes must be > 0");
  if (c.lambda1 < 0.0) throw std::invalid_argument("config: lambda1 must be >= 0");
  if (c.lambda_s < 0.0) throw std::invalid_argument("config: lambda_s must be >= 0");
  if (c.ppo_clip <= 0.0 || c.ppo_clip >= 1.0)
    throw std::invalid_argument("config: ppo_clip must be in (0,1)");
  if (c.ppo_epochs <= 0 || c.minibatches <= 0)
    throw std::invalid_argument("config: ppo_epochs and minibatches must be > 0");
  if (c.tau0 < c.tau_floor || c.tau_floor <= 0.0 || c.tau_decay < 0.0)
    throw std::invalid_argument("config: bad temperature schedule");
  if (c.latent_source != "expert-demo" && c.latent_source != "online-posterior")
    throw std::invalid_argument("config: latent_source must be expert-demo or online-posterior");
  if (c.workers < 1) throw std::invalid_argument("config: workers must be >= 1");
}

namespace detail {

inline int parse_int(const IniEntry& e) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw std::runtime_error("config: bad integer for key '" + e.key + "' in [" +
                             e.section + "]: '" + e.value + "'");
  }
}

inline double parse_real(const IniEntry& e) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config: bad real for key '" + e.key + "' in [" +
                             e.section + "]: '" + e.value + "'");
  }
}

inline bool parse_bool(const IniEntry& e) {
  if (e.value == "true" || e.value == "1") return true;
  if (e.value == "false" || e.value == "0") return false;
  throw std::runtime_error("config: bad boolean for key '" + e.key + "' in [" +
                           e.section + "]: '" + e.value + "'");
}

}  // namespace detail

// Applies one entry; throws on unknown section or key (every key must be a
// known scalar so typos surface immediately).
inline void apply_config_entry(TrainConfig& c, const IniEntry& e) {
  const std::string& s = e.section;
  const std::string& k = e.key;
  if (s == "env") {
    if (k == "id") c.env_id = e.value;
    else if (k == "obs_encoding") c.obs_encoding = e.value;
    else throw std::runtime_error("config: unknown key '" + k + "' in [env]");
  } else if (s == "vae") {
    if (k == "k") c.k = detail::parse_int(e);
    else if (k == "epochs") c.vae_epochs = detail::parse_int(e);
    else if (k == "batch_size") c.vae_batch = detail::parse_int(e);
    else if (k == "lr") c.vae_lr = detail::parse_real(e);
    else if (k == "lambda_s") c.lambda_s = detail::parse_real(e);
    else if (k == "tau0") c.tau0 = detail::parse_real(e);
    else if (k == "tau_decay") c.tau_decay = detail::parse_real(e);
    else if (k == "tau_floor") c.tau_floor = detail::parse_real(e);
    else throw std::runtime_error("config: unknown key '" + k + "' in [vae]");
  } else if (s == "digail") {
    if (k == "epochs") c.epochs = detail::parse_int(e);
    else if (k == "batch_size") c.batch_size = detail::parse_int(e);
    else if (k == "lambda1") c.lambda1 = detail::parse_real(e);
    else if (k == "lambda2") c.lambda2 = detail::parse_real(e);
    else if (k == "gamma") c.gamma = detail::parse_real(e);
    else if (k == "gae_lambda") c.gae_lambda = detail::parse_real(e);
    else if (k == "ppo_clip") c.ppo_clip = detail::parse_real(e);
    else if (k == "ppo_epochs") c.ppo_epochs = detail::parse_int(e);
    else if (k == "minibatches") c.minibatches = detail::parse_int(e);
    else if (k == "lr") c.lr = detail::parse_real(e);
    else if (k == "l2_bc_weight") c.l2_bc_weight = detail::parse_real(e);
    else if (k == "latent_source") c.latent_source = e.value;
    else if (k == "warm_start") c.warm_start = detail::parse_bool(e);
    else if (k == "seed") c.seed = static_cast<std::uint64_t>(std::stoull(e.value));
    else if (k == "workers") c.workers = detail::parse_int(e);
    else throw std::runtime_error("config: unknown key '" + k + "' in [digail]");
  } else {
    throw std::runtime_error("config: unknown section [" + s + "]");
  }
}

// Loads defaults for the file's [env] id, then applies every entry in file
// order. env_hint, when nonempty, supplies the default env for files that
// omit [env] id and must match an explicit one.
inline TrainConfig load_config_text(const std::string& text, const std::string& name,
                                    const std::string& env_hint = "") {
  const std::vector<IniEntry> entries = parse_ini_text(text, name);
  std::string env = env_hint;
  for (const IniEntry& e : entries)
    if (e.section == "env" && e.key == "id") {
      if (!env_hint.empty() && e.value != env_hint)
        throw std::runtime_error("config: [env] id '" + e.value +
                                 "' does not match dataset env '" + env_hint + "'");
      env = e.value;
    }
  if (env.empty())
    throw std::runtime_error(name + ": missing [env] id and no dataset to infer it from");
  TrainConfig c = default_config(env);
  for (const IniEntry& e : entries) apply_config_entry(c, e);
  validate_config(c);
  return c;
}

inline TrainConfig load_config_file(const std::string& path,
                                    const std::string& env_hint = "") {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_config_text(buf.str(), path, env_hint);
}

// Canonical INI snapshot; load_config_text(save_config(c)) round-trips.
inline std::string save_config(const TrainConfig& c) {
  std::ostringstream o;
  o << "[env]\n";
  o << "id = " << c.env_id << "\n";
  o << "obs_encoding = " << c.obs_encoding << "\n";
  o << "\n[vae]\n";
  o << "k = " << c.k << "\n";
  o << "epochs = " << c.vae_epochs << "\n";
  o << "batch_size = " << c.vae_batch << "\n";
  o << "lr = " << format_double(c.vae_lr) << "\n";
  o << "lambda_s = " << format_double(c.lambda_s) << "\n";
  o << "tau0 = " << format_double(c.tau0) << "\n";
  o << "tau_decay = " << format_double(c.tau_decay) << "\n";
  o << "tau_floor = " << format_double(c.tau_floor) << "\n";
  o << "\n[digail]\n";
  o << "epochs = " << c.epochs << "\n";
  o << "batch_size = " << c.batch_size << "\n";
  o << "lambda1 = " << format_double(c.lambda1) << "\n";
  o << "lambda2 = " << format_double(c.lambda2) << "\n";
  o << "gamma = " << format_double(c.gamma) << "\n";
  o << "gae_lambda = " << format_double(c.gae_lambda) << "\n";
  o << "ppo_clip = " << format_double(c.ppo_clip) << "\n";
  o << "ppo_epochs = " << c.ppo_epochs << "\n";
  o << "minibatches = " << c.minibatches << "\n";
  o << "lr = " << format_double(c.lr) << "\n";
  o << "l2_bc_weight = " << format_double(c.l2_bc_weight) << "\n";
  o << "latent_source = " << c.latent_source << "\n";
  o << "warm_start = " << (c.warm_start ? "true" : "false") << "\n";
  o << "seed = " << c.seed << "\n";
  o << "workers = " << c.workers << "\n";
  return o.str();
}

}  // namespace digail

#endif  // DIGAIL_CONFIG_HPP_
