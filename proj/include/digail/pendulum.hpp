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

#ifndef DIGAIL_PENDULUM_HPP_
#define DIGAIL_PENDULUM_HPP_

#include <cmath>
#include <stdexcept>

#include "digail/env.hpp"
#include "digail/trajectory.hpp"

namespace digail {

// Torque-limited pendulum, theta = 0 upright. Semi-implicit Euler with
// g = 10, m = 1, l = 1, dt = 0.05; angular velocity clamped to [-8, 8],
// torque clipped to [-2, 2].
struct PendulumState {
  double theta = 0.0;
  double theta_dot = 0.0;
};

constexpr double kPendulumG = 10.0;
constexpr double kPendulumM = 1.0;
constexpr double kPendulumL = 1.0;
constexpr double kPendulumDt = 0.05;
constexpr double kPendulumMaxSpeed = 8.0;
constexpr double kPendulumMaxTorque = 2.0;
constexpr int kPendulumEpisodeCap = 200;

// Maps an angle to (-pi, pi].
inline double wrap_angle(double theta) {
  const double two_pi = 2.0 * 3.14159265358979323846;
  double w = std::fmod(theta, two_pi);
  if (w <= -3.14159265358979323846) w += two_pi;
  if (w > 3.14159265358979323846) w -= two_pi;
  return w;
}

inline double pendulum_reward(const PendulumState& s, double torque) {
  const double th = wrap_angle(s.theta);
  return -(th * th + 0.1 * s.theta_dot * s.theta_dot + 0.001 * torque * torque);
}

// Advances one step; the reward is charged on the pre-step state.
inline PendulumState pendulum_step(const PendulumState& s, double torque,
                                   double* reward = nullptr) {
  double u = torque;
  if (u > kPendulumMaxTorque) u = kPendulumMaxTorque;
  if (u < -kPendulumMaxTorque) u = -kPendulumMaxTorque;
  if (reward) *reward = pendulum_reward(s, u);
  PendulumState next;
  next.theta_dot =
      s.theta_dot + (3.0 * kPendulumG / (2.0 * kPendulumL) * std::sin(s.theta) +
                     3.0 / (kPendulumM * kPendulumL * kPendulumL) * u) *
                        kPendulumDt;
  if (next.theta_dot > kPendulumMaxSpeed) next.theta_dot = kPendulumMaxSpeed;
  if (next.theta_dot < -kPendulumMaxSpeed) next.theta_dot = -kPendulumMaxSpeed;
  next.theta = s.theta + next.theta_dot * kPendulumDt;
  return next;
}

inline Vec pendulum_obs(const PendulumState& s) {
  return Vec{std::cos(s.theta), std::sin(s.theta), s.theta_dot};
}

// Total mechanical energy for the rod model (I = m l^2 / 3), zero at the
// horizontal: E = 0.5 I w^2 + (m g l / 2) cos(theta). Upright target is
// m g l / 2 = 5.
inline double pendulum_energy(const PendulumState& s) {
  const double inertia = kPendulumM * kPendulumL * kPendulumL / 3.0;
  return 0.5 * inertia * s.theta_dot * s.theta_dot +
         0.5 * kPendulumM * kPendulumG * kPendulumL * std::cos(s.theta);
}

// Scripted swing-up controller: bang-bang energy pumping toward the upright
// energy level, then a linear stabilizer near the top. For this
// torque-driven plant dE/dt = torque * theta_dot, so the pump pushes along
// the current rotation; sign(0) is taken as +1 so the controller self-starts
// from hanging rest.
inline double pendulum_expert_torque(const PendulumState& s) {
  const double th = wrap_angle(s.theta);
  if (std::fabs(th) < 0.3) {
    double u = -(16.0 * th + 4.0 * s.theta_dot);
    if (u > kPendulumMaxTorque) u = kPendulumMaxTorque;
    if (u < -kPendulumMaxTorque) u = -kPendulumMaxTorque;
    return u;
  }
  const double target = 0.5 * kPendulumM * kPendulumG * kPendulumL;
  if (pendulum_energy(s) < target)
    return s.theta_dot >= 0.0 ? kPendulumMaxTorque : -kPendulumMaxTorque;
  return 0.0;
}

class PendulumEnv : public Env {
 public:
  PendulumEnv() {
    spec_.id = "pendulum";
    spec_.state_dim = 3;
    spec_.action_dim = 1;
    spec_.discrete = false;
    spec_.episode_cap = kPendulumEpisodeCap;
  }

  const EnvSpec& spec() const override { return spec_; }

  Vec reset(Rng& rng) override {
    state_.theta = rng.uniform(-3.14159265358979323846, 3.14159265358979323846);
    state_.theta_dot = rng.uniform(-1.0, 1.0);
    return pendulum_obs(state_);
  }

  void set_state(const PendulumState& s) { state_ = s; }
  const PendulumState& state() const { return state_; }

  EnvStep step(const Vec& action) override {
    EnvStep out;
    state_ = pendulum_step(state_, action.at(0), &out.reward);
    out.state = pendulum_obs(state_);
    out.done = false;
    return out;
  }

 private:
  EnvSpec spec_;
  PendulumState state_;
};

// Expert set: full-length scripted swing-up episodes from random starts.
inline Dataset pendulum_expert_dataset(int n, Rng& rng) {
  if (n <= 0) throw std::invalid_argument("pendulum_expert_dataset: n must be > 0");
  Dataset ds;
  ds.header.env_id = "pendulum";
  ds.header.state_dim = 3;
  ds.header.action_dim = 1;
  ds.header.discrete_actions = false;
  for (int i = 0; i < n; ++i) {
    PendulumState s;
    s.theta = rng.uniform(-3.14159265358979323846, 3.14159265358979323846);
    s.theta_dot = rng.uniform(-1.0, 1.0);
    Trajectory tr;
    tr.env_id = "pendulum";
    tr.steps.resize(kPendulumEpisodeCap);
    for (int t = 0; t < kPendulumEpisodeCap; ++t) {
      const double u = pendulum_expert_torque(s);
      tr.steps[t].state = pendulum_obs(s);
      tr.steps[t].action = Vec{u};
      s = pendulum_step(s, u, &tr.steps[t].reward);
    }
    ds.trajectories.push_back(std::move(tr));
  }
  return ds;
}

}  // namespace digail

#endif  // DIGAIL_PENDULUM_HPP_
