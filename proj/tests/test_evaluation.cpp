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

#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "digail/evaluation.hpp"

using namespace digail;

namespace {

void zero_mlp(Mlp& m) {
  for (Vec& w : m.w) w.assign(w.size(), 0.0);
  for (Vec& b : m.b) b.assign(b.size(), 0.0);
}

}  // namespace

TEST_CASE("label-matched accuracy is invariant to label permutations") {
  const std::vector<int> truth{0, 0, 1, 1, 1, 0};
  CHECK(label_matched_accuracy(truth, truth) == 1.0);
  const std::vector<int> flipped{1, 1, 0, 0, 0, 1};
  CHECK(label_matched_accuracy(flipped, truth) == 1.0);
  // A constant prediction can only capture the majority class.
  CHECK(label_matched_accuracy({0, 0, 0, 0}, {0, 0, 1, 1}, 2) == 0.5);
  // Injectivity forbids collapsing two truth labels onto one prediction.
  const std::vector<int> three_truth{0, 1, 2, 0, 1, 2};
  const std::vector<int> merged{0, 0, 1, 0, 0, 1};
  CHECK(label_matched_accuracy(merged, three_truth, 3) ==
        Catch::Approx(4.0 / 6.0));
  CHECK_THROWS_AS(label_matched_accuracy({0, 0}, {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(label_matched_accuracy({0, 9}, {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(label_matched_accuracy({0}, {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(label_matched_accuracy({-1, 0}, {0, 1}), std::invalid_argument);
}

TEST_CASE("random predictions score near chance level") {
  Rng rng(1);
  std::vector<int> truth(10000), pred(10000);
  for (int i = 0; i < 10000; ++i) {
    truth[i] = rng.below(2);
    pred[i] = rng.below(2);
  }
  const double acc = label_matched_accuracy(pred, truth);
  CHECK(acc >= 0.5);
  CHECK(acc < 0.53);
}

TEST_CASE("switch_count counts code changes") {
  CHECK(switch_count({0, 0, 1, 1, 0}) == 2);
  CHECK(switch_count({2}) == 0);
  CHECK(switch_count({}) == 0);
  CHECK(switch_count({0, 1, 0, 1}) == 3);
}

TEST_CASE("segmenting with an untrained encoder matches the trivial baseline") {
  Mlp q = mlp_make({4, 3, 2});
  zero_mlp(q);
  Rng rng(2);
  const Dataset ds = circleworld_expert_dataset(2, rng);
  const SegmentationReport rep = segment_dataset(q, 2, ds);
  REQUIRE(rep.codes.size() == 2);
  for (int sw : rep.switch_counts) CHECK(sw == 0);
  CHECK(rep.usage == std::vector<long>{200, 0});
  REQUIRE(rep.has_accuracy);
  // Constant codes capture exactly the larger phase, here a 50/50 split.
  CHECK(rep.accuracy == 0.5);
}

TEST_CASE("greedy rollouts on circleworld are deterministic") {
  Mlp pi = mlp_make({2, 4, 2});
  zero_mlp(pi);
  CircleWorldEnv env;
  Rng rng(3);
  const Trajectory tr = rollout_episode(pi, nullptr, 0, false, env, rng);
  REQUIRE(tr.length() == 100);  // runs to the cap
  CHECK(tr.phases.empty());
  CHECK(trajectory_return(tr) == 0.0);
  // Zero mean: the env normalizes the degenerate action to (1, 0).
  CHECK(tr.steps[1].state[0] == Catch::Approx(kCircleWorldStep));

  Rng root(4);
  const ReturnStats st = evaluate_returns(pi, nullptr, 0, false, env, 5, root);
  CHECK(st.mean == 0.0);
  CHECK(st.std_dev == 0.0);
  CHECK(st.n_episodes == 5);
}

TEST_CASE("parallel return evaluation agrees with the serial path") {
  Rng init(5);
  Mlp pi = mlp_make({3, 8, 1});
  mlp_init(pi, init);
  PendulumEnv env;
  Rng root(6);
  const ReturnStats serial = evaluate_returns(pi, nullptr, 0, false, env, 9, root);
  CHECK(serial.std_dev > 0.0);
  for (int workers : {1, 3, 4}) {
    const ReturnStats par = evaluate_returns_parallel(pi, nullptr, 0, false,
                                                      "pendulum", 9, root, workers);
    CHECK(par.mean == Catch::Approx(serial.mean).epsilon(1e-12));
    CHECK(par.std_dev == Catch::Approx(serial.std_dev).margin(1e-9));
    CHECK(par.n_episodes == 9);
  }
}

TEST_CASE("schedule composition follows the given codes") {
  Mlp pi = mlp_make({4, 3, 2});
  zero_mlp(pi);
  CircleWorldEnv env;
  Rng rng(7);
  const std::vector<int> schedule{0, 0, 1, 1, 1};
  const Trajectory tr = compose_with_schedule(pi, false, 2, schedule, env, rng);
  REQUIRE(tr.length() == 5);
  CHECK(tr.phases == schedule);
  Rng rng2(7);
  const Trajectory tr2 = compose_with_schedule(pi, false, 2, schedule, env, rng2);
  for (int t = 0; t < 5; ++t) CHECK(tr2.steps[t].state == tr.steps[t].state);
  CHECK_THROWS_AS(compose_with_schedule(pi, false, 2, {}, env, rng),
                  std::invalid_argument);
}

TEST_CASE("displacement crosses sign the turn direction") {
  const std::vector<Vec> left{Vec{0.0, 0.0}, Vec{1.0, 0.0}, Vec{1.0, 1.0}};
  CHECK(displacement_crosses(left) == std::vector<double>{1.0});
  const std::vector<Vec> right{Vec{0.0, 0.0}, Vec{1.0, 0.0}, Vec{1.0, -1.0}};
  CHECK(displacement_crosses(right) == std::vector<double>{-1.0});
  CHECK_THROWS_AS(displacement_crosses({Vec{0.0, 0.0}, Vec{1.0, 0.0}}),
                  std::invalid_argument);
}

TEST_CASE("pca components are orthonormal with non-increasing variance") {
  Rng rng(8);
  std::vector<Vec> states;
  std::vector<int> codes;
  for (int i = 0; i < 60; ++i) {
    states.push_back(Vec{rng.normal() * 3.0, rng.normal(), rng.normal() * 0.2,
                         rng.normal() * 0.05});
    codes.push_back(i % 2);
  }
  const PcaProjection proj = pca_project(states, codes, 3);
  REQUIRE(proj.components.size() == 3);
  CHECK_FALSE(proj.rank_deficient);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double dot = 0.0;
      for (int d = 0; d < 4; ++d) dot += proj.components[i][d] * proj.components[j][d];
      CHECK(dot == Catch::Approx(i == j ? 1.0 : 0.0).margin(1e-9));
    }
  double total = 0.0;
  for (std::size_t i = 0; i < proj.explained.size(); ++i) {
    total += proj.explained[i];
    if (i > 0) CHECK(proj.explained[i] <= proj.explained[i - 1] + 1e-12);
  }
  CHECK(total <= 1.0 + 1e-12);
  // Projected coordinates are centered.
  Vec avg(3, 0.0);
  for (const Vec& p : proj.points)
    for (int i = 0; i < 3; ++i) avg[i] += p[i] / proj.points.size();
  for (double v : avg) CHECK(std::abs(v) < 1e-9);
  CHECK(proj.labels == codes);
}

TEST_CASE("pca recovers an axis-aligned two-dimensional spread") {
  const std::vector<Vec> states{Vec{2.0, 0.0}, Vec{-2.0, 0.0}, Vec{0.0, 1.0},
                                Vec{0.0, -1.0}};
  const PcaProjection proj = pca_project(states, {0, 0, 1, 1}, 2);
  REQUIRE(proj.components.size() == 2);
  CHECK(std::abs(proj.components[0][0]) == Catch::Approx(1.0).margin(1e-10));
  CHECK(proj.explained[0] == Catch::Approx(0.8).margin(1e-12));
  CHECK(proj.explained[1] == Catch::Approx(0.2).margin(1e-12));
  CHECK(std::abs(proj.points[0][0]) == Catch::Approx(2.0).margin(1e-10));
}

TEST_CASE("pca flags rank deficiency on embedded low-dimensional data") {
  std::vector<Vec> states;
  std::vector<int> codes;
  for (int i = 0; i < 20; ++i) {
    const double t = 0.3 * i - 2.0;
    states.push_back(Vec{t, 2.0 * t, -t});
    codes.push_back(0);
  }
  const PcaProjection line = pca_project(states, codes, 2);
  CHECK(line.rank_deficient);
  REQUIRE(line.components.size() == 1);
  CHECK(line.explained[0] == Catch::Approx(1.0).margin(1e-12));

  CHECK_THROWS_AS(pca_project(states, codes, 0), std::invalid_argument);
  CHECK_THROWS_AS(pca_project(states, {0}, 1), std::invalid_argument);
  const std::vector<Vec> constant(5, Vec{1.0, 1.0});
  CHECK_THROWS_AS(pca_project(constant, {0, 0, 0, 0, 0}, 1), std::invalid_argument);
}

TEST_CASE("action maps cover free cells and disagreement ignores walls") {
  Mlp pi = mlp_make({330 + 2, 4, 4});
  zero_mlp(pi);
  const int apple = FourRoomsMap::cell(8, 11);
  const std::vector<int> map = fourrooms_action_map(pi, 2, 0, apple);
  REQUIRE(map.size() == FourRoomsMap::kCells);
  int walls = 0;
  for (int cell = 0; cell < FourRoomsMap::kCells; ++cell) {
    if (map[cell] < 0) {
      walls += 1;
      CHECK(FourRoomsMap::is_wall(FourRoomsMap::row_of(cell), FourRoomsMap::col_of(cell)));
    } else {
      CHECK(map[cell] == 0);  // untrained net ties break to the first action
    }
  }
  CHECK(walls == 21);
  CHECK(action_map_disagreement(map, map) == 0.0);
  std::vector<int> other = map;
  other[FourRoomsMap::cell(0, 0)] = 3;
  CHECK(action_map_disagreement(map, other) == Catch::Approx(1.0 / 144.0));
}

TEST_CASE("fourrooms evaluation reports code usage and bounded rates") {
  Rng init(9);
  Mlp pi = mlp_make({330 + 2, 8, 4});
  mlp_init(pi, init);
  Mlp q = mlp_make({330 + 2, 8, 2});
  zero_mlp(q);
  FourRoomsEnv env;
  Rng root(10);
  const FourRoomsEval ev = evaluate_fourrooms(pi, &q, 2, env, 5, root);
  CHECK(ev.n_episodes == 5);
  CHECK(ev.success_rate >= 0.0);
  CHECK(ev.success_rate <= 1.0);
  CHECK(ev.n_success <= 5);
  REQUIRE(ev.code_usage.size() == 2);
  CHECK(ev.code_usage[0] > 0);
  CHECK(ev.code_usage[1] == 0);
  if (ev.n_success > 0) CHECK(ev.mean_path_ratio >= 1.0);
}

TEST_CASE("expert action mse scores the untrained policy at unit error") {
  Mlp pi = mlp_make({2, 3, 2});
  zero_mlp(pi);
  Rng rng(11);
  const Dataset expert = circleworld_expert_dataset(3, rng);
  // Expert actions are unit vectors; a zero mean leaves exactly |a|^2 = 1.
  CHECK(expert_action_mse(pi, nullptr, 0, expert) == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mode_action picks the argmax or the mean") {
  Mlp pi = mlp_make({2, 3});
  zero_mlp(pi);
  pi.b[0] = Vec{0.1, 0.9, 0.3};
  CHECK(mode_action(pi, true, Vec{0.0, 0.0}) == Vec{1.0});
  CHECK(mode_action(pi, false, Vec{0.0, 0.0}) == Vec{0.1, 0.9, 0.3});
}
