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

#ifndef DIGAIL_FOUR_ROOMS_HPP_
#define DIGAIL_FOUR_ROOMS_HPP_

#include <array>
#include <deque>
#include <stdexcept>
#include <vector>

#include "digail/env.hpp"
#include "digail/trajectory.hpp"

namespace digail {

// 15 x 11 grid split into four rooms by a plus-shaped wall. The horizontal
// wall sits on row 5 with door cells at columns 3 and 11; the vertical wall
// sits on column 7 with door cells at rows 2 and 8. That leaves 21 wall
// cells and 144 free cells. Cell index = row * 15 + col.
struct FourRoomsMap {
  static constexpr int kWidth = 15;
  static constexpr int kHeight = 11;
  static constexpr int kCells = kWidth * kHeight;
  static constexpr int kWallRow = 5;
  static constexpr int kWallCol = 7;
  static constexpr std::array<int, 2> kDoorCols = {3, 11};
  static constexpr std::array<int, 2> kDoorRows = {2, 8};

  static bool is_wall(int r, int c) {
    if (r < 0 || r >= kHeight || c < 0 || c >= kWidth) return true;
    if (r == kWallRow && c != kDoorCols[0] && c != kDoorCols[1]) return true;
    if (c == kWallCol && r != kDoorRows[0] && r != kDoorRows[1]) return true;
    return false;
  }

  // Door cells sit inside the wall band; everything else free is in a room.
  static bool is_door(int r, int c) {
    return (r == kWallRow || c == kWallCol) && !is_wall(r, c);
  }

  static int cell(int r, int c) { return r * kWidth + c; }
  static int row_of(int cell) { return cell / kWidth; }
  static int col_of(int cell) { return cell % kWidth; }
};

// Actions in fixed order; ties in the expert break toward the first match.
enum FourRoomsAction { kUp = 0, kDown = 1, kLeft = 2, kRight = 3 };

inline int fourrooms_neighbor(int cell, int action) {
  int r = FourRoomsMap::row_of(cell), c = FourRoomsMap::col_of(cell);
  switch (action) {
    case kUp: r -= 1; break;
    case kDown: r += 1; break;
    case kLeft: c -= 1; break;
    case kRight: c += 1; break;
    default: throw std::invalid_argument("fourrooms: unknown action");
  }
  if (FourRoomsMap::is_wall(r, c)) return cell;
  return FourRoomsMap::cell(r, c);
}

// Observation: one-hot(agent cell) ++ one-hot(apple cell), length 330.
// A compact (row, col) pair encoding is available behind a config switch.
inline Vec fourrooms_obs(int agent, int apple, bool compact = false) {
  if (compact) {
    return Vec{static_cast<double>(FourRoomsMap::row_of(agent)),
               static_cast<double>(FourRoomsMap::col_of(agent)),
               static_cast<double>(FourRoomsMap::row_of(apple)),
               static_cast<double>(FourRoomsMap::col_of(apple))};
  }
  Vec v(2 * FourRoomsMap::kCells, 0.0);
  v[agent] = 1.0;
  v[FourRoomsMap::kCells + apple] = 1.0;
  return v;
}

// Breadth-first distances from `goal` to every free cell. Unreachable free
// cells keep distance -1 (impossible on this map; callers treat it as a
// corrupt-map error).
inline std::vector<int> fourrooms_bfs_distances(int goal) {
  std::vector<int> dist(FourRoomsMap::kCells, -1);
  std::deque<int> queue;
  dist[goal] = 0;
  queue.push_back(goal);
  while (!queue.empty()) {
    const int cur = queue.front();
    queue.pop_front();
    for (int a = 0; a < 4; ++a) {
      const int next = fourrooms_neighbor(cur, a);
      if (next != cur && dist[next] < 0) {
        dist[next] = dist[cur] + 1;
        queue.push_back(next);
      }
    }
  }
  return dist;
}

// First move of a shortest path toward the apple: the earliest action in
// (up, down, left, right) order that strictly decreases the BFS distance.
inline int fourrooms_expert_action(int agent, int apple,
                                   const std::vector<int>& dist_to_apple) {
  if (dist_to_apple[agent] < 0)
    throw std::runtime_error("fourrooms: apple unreachable (corrupt map)");
  for (int a = 0; a < 4; ++a) {
    const int next = fourrooms_neighbor(agent, a);
    if (next != agent && dist_to_apple[next] == dist_to_apple[agent] - 1)
      return a;
  }
  throw std::runtime_error("fourrooms: no descending move (corrupt map)");
}

inline int fourrooms_expert_action(int agent, int apple) {
  return fourrooms_expert_action(agent, apple, fourrooms_bfs_distances(apple));
}

class FourRoomsEnv : public Env {
 public:
  explicit FourRoomsEnv(bool compact_obs = false) : compact_(compact_obs) {
    spec_.id = "fourrooms";
    spec_.state_dim = compact_obs ? 4 : 2 * FourRoomsMap::kCells;
    spec_.action_dim = 4;
    spec_.discrete = true;
    spec_.episode_cap = 100;
  }

  const EnvSpec& spec() const override { return spec_; }

  Vec reset(Rng& rng) override {
    apple_ = random_room_cell(rng);
    do {
      agent_ = random_free_cell(rng);
    } while (agent_ == apple_);
    return fourrooms_obs(agent_, apple_, compact_);
  }

  void set_cells(int agent, int apple) {
    if (FourRoomsMap::is_wall(FourRoomsMap::row_of(agent), FourRoomsMap::col_of(agent)) ||
        FourRoomsMap::is_wall(FourRoomsMap::row_of(apple), FourRoomsMap::col_of(apple)))
      throw std::invalid_argument("fourrooms: cell on a wall");
    agent_ = agent;
    apple_ = apple;
  }

  int agent() const { return agent_; }
  int apple() const { return apple_; }

  EnvStep step(const Vec& action) override {
    const int a = static_cast<int>(action.at(0));
    agent_ = fourrooms_neighbor(agent_, a);
    EnvStep out;
    out.state = fourrooms_obs(agent_, apple_, compact_);
    out.reward = 0.0;
    out.done = (agent_ == apple_);
    return out;
  }

  static int random_free_cell(Rng& rng) {
    for (;;) {
      const int cell = rng.below(FourRoomsMap::kCells);
      if (!FourRoomsMap::is_wall(FourRoomsMap::row_of(cell), FourRoomsMap::col_of(cell)))
        return cell;
    }
  }

  // Apples live strictly inside a room, never in a door cell.
  static int random_room_cell(Rng& rng) {
    for (;;) {
      const int cell = random_free_cell(rng);
      if (!FourRoomsMap::is_door(FourRoomsMap::row_of(cell), FourRoomsMap::col_of(cell)))
        return cell;
    }
  }

 private:
  EnvSpec spec_;
  bool compact_;
  int agent_ = 0;
  int apple_ = 0;
};

// Expert demonstrations: shortest paths between random (start, apple) pairs.
// Starts are redrawn until the path has at least two steps so every
// trajectory satisfies the dataset length contract.
inline Dataset fourrooms_expert_dataset(int n, Rng& rng, bool compact_obs = false) {
  if (n <= 0) throw std::invalid_argument("fourrooms_expert_dataset: n must be > 0");
  Dataset ds;
  ds.header.env_id = "fourrooms";
  ds.header.state_dim = compact_obs ? 4 : 2 * FourRoomsMap::kCells;
  ds.header.action_dim = 4;
  ds.header.discrete_actions = true;
  for (int i = 0; i < n; ++i) {
    int apple = FourRoomsEnv::random_room_cell(rng);
    std::vector<int> dist = fourrooms_bfs_distances(apple);
    int agent;
    do {
      agent = FourRoomsEnv::random_free_cell(rng);
    } while (dist[agent] < 2);
    Trajectory tr;
    tr.env_id = "fourrooms";
    while (agent != apple) {
      const int a = fourrooms_expert_action(agent, apple, dist);
      Step s;
      s.state = fourrooms_obs(agent, apple, compact_obs);
      s.action = Vec{static_cast<double>(a)};
      tr.steps.push_back(std::move(s));
      agent = fourrooms_neighbor(agent, a);
    }
    ds.trajectories.push_back(std::move(tr));
  }
  return ds;
}

}  // namespace digail

#endif  // DIGAIL_FOUR_ROOMS_HPP_
