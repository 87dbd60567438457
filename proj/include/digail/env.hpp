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

#ifndef DIGAIL_ENV_HPP_
#define DIGAIL_ENV_HPP_

#include <string>

#include "digail/rng.hpp"

namespace digail {

struct EnvSpec {
  std::string id;
  int state_dim = 0;
  int action_dim = 0;  // number of actions for discrete envs
  bool discrete = false;
  int episode_cap = 0;
};

struct EnvStep {
  Vec state;
  double reward = 0.0;
  bool done = false;
};

// Environments hold no shared state: one instance plus one rng stream per
// worker is enough for parallel rollouts. Discrete envs read the action
// index from action[0].
class Env {
 public:
  virtual ~Env() = default;
  virtual const EnvSpec& spec() const = 0;
  virtual Vec reset(Rng& rng) = 0;
  virtual EnvStep step(const Vec& action) = 0;
};

}  // namespace digail

#endif  // DIGAIL_ENV_HPP_
