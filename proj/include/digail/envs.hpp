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

#ifndef DIGAIL_ENVS_HPP_
#define DIGAIL_ENVS_HPP_

#include <memory>
#include <stdexcept>
#include <string>

#include "digail/circle_world.hpp"
#include "digail/env.hpp"
#include "digail/four_rooms.hpp"
#include "digail/pendulum.hpp"

namespace digail {

inline std::unique_ptr<Env> make_env(const std::string& env_id) {
  if (env_id == "fourrooms") return std::make_unique<FourRoomsEnv>();
  if (env_id == "fourrooms-xy") return std::make_unique<FourRoomsEnv>(true);
  if (env_id == "circleworld") return std::make_unique<CircleWorldEnv>();
  if (env_id == "pendulum") return std::make_unique<PendulumEnv>();
  throw std::invalid_argument("unknown env '" + env_id +
                              "' (expected fourrooms, circleworld, or pendulum)");
}

inline Dataset generate_expert_dataset(const std::string& env_id, int n, Rng& rng) {
  if (env_id == "fourrooms") return fourrooms_expert_dataset(n, rng);
  if (env_id == "fourrooms-xy") return fourrooms_expert_dataset(n, rng, true);
  if (env_id == "circleworld") return circleworld_expert_dataset(n, rng);
  if (env_id == "pendulum") return pendulum_expert_dataset(n, rng);
  throw std::invalid_argument("unknown env '" + env_id +
                              "' (expected fourrooms, circleworld, or pendulum)");
}

}  // namespace digail

#endif  // DIGAIL_ENVS_HPP_
