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

#ifndef DIGAIL_MODEL_IO_HPP_
#define DIGAIL_MODEL_IO_HPP_

#include <stdexcept>
#include <string>

#include "digail/checkpoint.hpp"
#include "digail/digail.hpp"
#include "digail/vae.hpp"

namespace digail {

inline Checkpoint vae_to_checkpoint(const VaeNets& n, const std::string& env_id,
                                    const std::string& obs_encoding,
                                    long trained_epochs) {
  Checkpoint c;
  c.add_str("kind", "vae");
  c.add_str("env_id", env_id);
  c.add_str("obs_encoding", obs_encoding);
  c.add_vec("meta", {static_cast<double>(n.k), static_cast<double>(n.state_dim),
                     static_cast<double>(n.action_dim), n.discrete ? 1.0 : 0.0,
                     static_cast<double>(trained_epochs)});
  c.add_mlp("q", n.q);
  c.add_mlp("pi", n.pi);
  if (!n.discrete) c.add_vec("log_std", n.log_std);
  return c;
}

inline VaeNets vae_from_checkpoint(const Checkpoint& c) {
  if (c.get_str("kind") != "vae")
    throw std::runtime_error("checkpoint: expected a vae checkpoint, got '" +
                             c.get_str("kind") + "'");
  const Vec& meta = c.get_vec("meta");
  VaeNets n;
  n.k = static_cast<int>(meta[0]);
  n.state_dim = static_cast<int>(meta[1]);
  n.action_dim = static_cast<int>(meta[2]);
  n.discrete = meta[3] != 0.0;
  n.q = c.get_mlp("q");
  n.pi = c.get_mlp("pi");
  if (!n.discrete) {
    n.log_std = c.get_vec("log_std");
    n.g_log_std.assign(n.log_std.size(), 0.0);
  }
  return n;
}

inline long vae_trained_epochs(const Checkpoint& c) {
  return static_cast<long>(c.get_vec("meta")[4]);
}

inline Checkpoint policy_to_checkpoint(const GailNets& n, const Mlp* q,
                                       const std::string& method,
                                       const std::string& env_id,
                                       const std::string& obs_encoding) {
  Checkpoint c;
  c.add_str("kind", "policy");
  c.add_str("method", method);
  c.add_str("env_id", env_id);
  c.add_str("obs_encoding", obs_encoding);
  c.add_vec("meta", {static_cast<double>(n.k), static_cast<double>(n.state_dim),
                     static_cast<double>(n.action_dim), n.discrete ? 1.0 : 0.0});
  c.add_mlp("pi", n.pi);
  c.add_mlp("value", n.value);
  c.add_mlp("disc", n.disc);
  if (q) c.add_mlp("q", *q);
  if (!n.discrete) c.add_vec("log_std", n.log_std);
  return c;
}

inline GailNets policy_from_checkpoint(const Checkpoint& c) {
  if (c.get_str("kind") != "policy")
    throw std::runtime_error("checkpoint: expected a policy checkpoint, got '" +
                             c.get_str("kind") + "'");
  const Vec& meta = c.get_vec("meta");
  GailNets n;
  n.k = static_cast<int>(meta[0]);
  n.state_dim = static_cast<int>(meta[1]);
  n.action_dim = static_cast<int>(meta[2]);
  n.discrete = meta[3] != 0.0;
  n.pi = c.get_mlp("pi");
  n.value = c.get_mlp("value");
  n.disc = c.get_mlp("disc");
  if (!n.discrete) {
    n.log_std = c.get_vec("log_std");
    n.g_log_std.assign(n.log_std.size(), 0.0);
  }
  return n;
}

}  // namespace digail

#endif  // DIGAIL_MODEL_IO_HPP_
