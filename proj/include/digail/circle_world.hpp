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

#ifndef DIGAIL_CIRCLE_WORLD_HPP_
#define DIGAIL_CIRCLE_WORLD_HPP_

#include <cmath>
#include <stdexcept>

#include "digail/env.hpp"
#include "digail/trajectory.hpp"

namespace digail {

// 2-D point world. The agent starts at the origin, emits a direction, and
// the world advances it by a fixed step length along that direction.
// Expert trajectories trace a circle of some radius clockwise and then
// retrace the same points counter-clockwise.
constexpr double kCircleWorldStep = 2.0 * 3.14159265358979323846 / 50.0;
constexpr int kCircleWorldSteps = 100;

// Point on the clockwise circle through the origin: phi = 0 is the origin,
// the circle center sits at (0, -r).
inline Vec circleworld_point(double radius, double phi) {
  return Vec{radius * std::sin(phi), -radius * (1.0 - std::cos(phi))};
}

// n_steps even: the first n_steps/2 actions walk the full circle clockwise,
// the remaining half walks the same points in reverse. Actions are unit
// direction vectors; phases label the two halves 0 and 1.
inline Trajectory circleworld_expert(double radius, int n_steps) {
  if (radius <= 0.0) throw std::invalid_argument("circleworld_expert: radius must be > 0");
  if (n_steps < 4) throw std::invalid_argument("circleworld_expert: n_steps must be >= 4");
  if (n_steps % 2 != 0) throw std::invalid_argument("circleworld_expert: n_steps must be even");
  const int half = n_steps / 2;
  std::vector<Vec> pts(n_steps + 1);
  for (int i = 0; i <= half; ++i)
    pts[i] = circleworld_point(radius, 2.0 * 3.14159265358979323846 * i / half);
  for (int i = half + 1; i <= n_steps; ++i) pts[i] = pts[n_steps - i];
  Trajectory tr;
  tr.env_id = "circleworld";
  tr.steps.resize(n_steps);
  tr.phases.resize(n_steps);
  for (int t = 0; t < n_steps; ++t) {
    const double dx = pts[t + 1][0] - pts[t][0];
    const double dy = pts[t + 1][1] - pts[t][1];
    const double norm = std::sqrt(dx * dx + dy * dy);
    tr.steps[t].state = pts[t];
    tr.steps[t].action = Vec{dx / norm, dy / norm};
    tr.phases[t] = t < half ? 0 : 1;
  }
  return tr;
}

// Expert set: radii drawn uniformly from [0.5, 1.5], 100 steps each.
inline Dataset circleworld_expert_dataset(int n, Rng& rng) {
  if (n <= 0) throw std::invalid_argument("circleworld_expert_dataset: n must be > 0");
  Dataset ds;
  ds.header.env_id = "circleworld";
  ds.header.state_dim = 2;
  ds.header.action_dim = 2;
  ds.header.discrete_actions = false;
  for (int i = 0; i < n; ++i)
    ds.trajectories.push_back(circleworld_expert(rng.uniform(0.5, 1.5), kCircleWorldSteps));
  return ds;
}

class CircleWorldEnv : public Env {
 public:
  CircleWorldEnv() {
    spec_.id = "circleworld";
    spec_.state_dim = 2;
    spec_.action_dim = 2;
    spec_.discrete = false;
    spec_.episode_cap = kCircleWorldSteps;
  }

  const EnvSpec& spec() const override { return spec_; }

  Vec reset(Rng&) override {
    x_ = 0.0;
    y_ = 0.0;
    return Vec{x_, y_};
  }

  EnvStep step(const Vec& action) override {
    double ax = action.at(0), ay = action.at(1);
    const double norm = std::sqrt(ax * ax + ay * ay);
    if (norm > 1e-12) {
      ax /= norm;
      ay /= norm;
    } else {
      ax = 1.0;
      ay = 0.0;
    }
    x_ += kCircleWorldStep * ax;
    y_ += kCircleWorldStep * ay;
    EnvStep out;
    out.state = Vec{x_, y_};
    out.reward = 0.0;
    out.done = false;
    return out;
  }

 private:
  EnvSpec spec_;
  double x_ = 0.0;
  double y_ = 0.0;
};

}  // namespace digail

#endif  // DIGAIL_CIRCLE_WORLD_HPP_
