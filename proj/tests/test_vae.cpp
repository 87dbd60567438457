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

#include "digail/circle_world.hpp"
#include "digail/vae.hpp"
#include "test_util.hpp"

using namespace digail;
using digail_test::central_diff;
using digail_test::rel_err;

namespace {

void zero_mlp(Mlp& m) {
  for (Vec& w : m.w) w.assign(w.size(), 0.0);
  for (Vec& b : m.b) b.assign(b.size(), 0.0);
}

Trajectory toy_trajectory(int T, int state_dim, bool discrete, int action_dim,
                          Rng& rng) {
  Trajectory tr;
  tr.env_id = "toy";
  for (int t = 0; t < T; ++t) {
    Step s;
    for (int i = 0; i < state_dim; ++i) s.state.push_back(rng.normal());
    if (discrete) {
      s.action = Vec{static_cast<double>(t % action_dim)};
    } else {
      for (int i = 0; i < action_dim; ++i) s.action.push_back(rng.normal());
    }
    tr.steps.push_back(std::move(s));
  }
  return tr;
}

}  // namespace

TEST_CASE("categorical kl matches hand values and is nonnegative") {
  const Vec u{0.25, 0.25, 0.25, 0.25};
  CHECK(kl_categorical(u, u) == 0.0);
  const Vec p{0.9, 0.1};
  const Vec q{0.5, 0.5};
  const double expect = 0.5 * std::log(0.5 / 0.9) + 0.5 * std::log(0.5 / 0.1);
  CHECK(kl_categorical(q, p) == Catch::Approx(expect).epsilon(1e-14));
  CHECK(kl_categorical(Vec{1.0, 0.0}, p) == Catch::Approx(-std::log(0.9)).epsilon(1e-14));
  CHECK(kl_categorical(q, Vec{0.5, 0.5}) == 0.0);
}

TEST_CASE("zero-weight vae loss is pure reconstruction entropy") {
  Rng rng(1);
  VaeNets nets = make_vae_nets(2, 4, /*discrete=*/true, /*k=*/4, rng);
  zero_mlp(nets.q);
  zero_mlp(nets.pi);
  const Trajectory tr = toy_trajectory(10, 2, true, 4, rng);
  Rng noise(7);
  const VaeLossParts parts = vae_loss(nets, tr, 1.0, 0.0, noise);
  CHECK(parts.nll == Catch::Approx(10.0 * std::log(4.0)).epsilon(1e-14));
  // A zero-weight encoder emits uniform posteriors, which match the uniform
  // code prior exactly, so the KL term vanishes at every step.
  CHECK(parts.kl == Catch::Approx(0.0).margin(1e-12));
  CHECK(parts.smooth == 0.0);
  CHECK(parts.total() == Catch::Approx(10.0 * std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("decoder logprob matches hand-computed gaussian and categorical values") {
  Rng rng(2);
  VaeNets cont = make_vae_nets(2, 2, /*discrete=*/false, /*k=*/2, rng);
  zero_mlp(cont.pi);
  const double lp =
      decode_logprob(cont.pi, cont.log_std, Vec{0.3, -0.1}, Vec{1.0, 0.0},
                     Vec{1.0, -1.0}, false);
  CHECK(lp == Catch::Approx(-kLog2Pi - 1.0).epsilon(1e-14));

  VaeNets disc = make_vae_nets(2, 4, /*discrete=*/true, /*k=*/2, rng);
  zero_mlp(disc.pi);
  const double lpd =
      decode_logprob(disc.pi, Vec{}, Vec{0.0, 0.0}, Vec{0.0, 1.0}, Vec{2.0}, true);
  CHECK(lpd == Catch::Approx(-std::log(4.0)).epsilon(1e-14));
  CHECK_THROWS_AS(
      decode_logprob(disc.pi, Vec{}, Vec{0.0, 0.0}, Vec{0.0, 1.0}, Vec{9.0}, true),
      std::invalid_argument);
}

TEST_CASE("smoothing penalty scores code agreement") {
  CHECK(smoothing_penalty({Vec{1.0, 0.0}, Vec{1.0, 0.0}}) == 0.0);
  CHECK(smoothing_penalty({Vec{1.0, 0.0}, Vec{0.0, 1.0}}) == 1.0);
  const double mixed = smoothing_penalty({Vec{0.8, 0.2}, Vec{0.2, 0.8}});
  CHECK(mixed == Catch::Approx(1.0 - 0.32 / std::sqrt(0.68)).epsilon(1e-14));
  // Terms add over consecutive pairs.
  const Vec a{0.9, 0.1}, b{0.5, 0.5}, c{0.1, 0.9};
  CHECK(smoothing_penalty({a, b, c}) ==
        Catch::Approx(smoothing_penalty({a, b}) + smoothing_penalty({b, c}))
            .epsilon(1e-14));
  CHECK_THROWS_AS(smoothing_penalty({Vec{1.0, 0.0}}), std::invalid_argument);
}

TEST_CASE("encoder emits simplex codes and nonnegative kl") {
  Rng rng(3);
  VaeNets nets = make_vae_nets(3, 2, /*discrete=*/false, /*k=*/4, rng);
  const Trajectory tr = toy_trajectory(6, 3, false, 2, rng);
  Rng noise(11);
  Vec c_prev(4, 0.0);
  for (const Step& s : tr.steps) {
    const EncodeResult r = encode(nets.q, s.state, c_prev, 0.8, noise);
    double sum = 0.0;
    for (double v : r.code) {
      CHECK(v >= 0.0);
      sum += v;
    }
    CHECK(sum == Catch::Approx(1.0).epsilon(1e-12));
    c_prev = r.code;
  }
  Rng noise2(11);
  const VaeLossParts parts = vae_loss(nets, tr, 0.8, 0.5, noise2);
  CHECK(parts.kl >= -1e-12);
  CHECK(parts.smooth >= -1e-12);
  CHECK(parts.total() == Catch::Approx(parts.nll + parts.kl + parts.smooth));
  CHECK_THROWS_AS(vae_loss(nets, Trajectory{}, 0.8, 0.5, noise2),
                  std::invalid_argument);
}

TEST_CASE("vae backward matches finite differences end to end") {
  for (const bool discrete : {true, false}) {
    Rng init(discrete ? 5u : 6u);
    const int action_dim = discrete ? 3 : 2;
    VaeNets nets = make_vae_nets(2, action_dim, discrete, 2, init, /*hidden=*/6);
    const Trajectory tr = toy_trajectory(3, 2, discrete, action_dim, init);
    const double tau = 1.0, lambda_s = 0.7;

    auto loss_at = [&]() {
      Rng noise(99);
      return vae_loss(nets, tr, tau, lambda_s, noise).total();
    };
    {
      Rng noise(99);
      const VaeLossParts parts = vae_loss_backward(nets, tr, tau, lambda_s, noise, 1.0);
      CHECK(parts.total() == Catch::Approx(loss_at()).epsilon(1e-12));
    }
    int checked = 0;
    for (const ParamSlice& sl : vae_param_slices(nets)) {
      for (std::size_t i = 0; i < sl.n; ++i) {
        const double analytic = sl.grad[i];
        const double fd = central_diff(sl.value[i], loss_at);
        REQUIRE(rel_err(analytic, fd) < 1e-3);
        checked += 1;
      }
    }
    CHECK(checked > 100);
  }
}

TEST_CASE("vae backward scales gradients linearly") {
  Rng init(8);
  VaeNets a = make_vae_nets(2, 2, /*discrete=*/true, /*k=*/2, init, /*hidden=*/4);
  VaeNets b = a;
  const Trajectory tr = toy_trajectory(4, 2, true, 2, init);
  Rng n1(13), n2(13);
  vae_loss_backward(a, tr, 1.0, 0.3, n1, 1.0);
  vae_loss_backward(b, tr, 1.0, 0.3, n2, 0.25);
  for (int l = 0; l < a.q.n_layers(); ++l)
    for (std::size_t i = 0; i < a.q.gw[l].size(); ++i)
      CHECK(b.q.gw[l][i] == Catch::Approx(0.25 * a.q.gw[l][i]).margin(1e-15));
}

TEST_CASE("pretraining drives the loss down on a real dataset") {
  Rng data_rng(4);
  Dataset ds = circleworld_expert_dataset(4, data_rng);
  TrainConfig cfg = default_config("circleworld");
  cfg.vae_epochs = 30;
  cfg.vae_batch = 4;
  cfg.vae_lr = 1e-3;
  cfg.k = 2;
  Rng rng(12);
  const VaePretrainResult res = pretrain_vae(ds, cfg, rng);
  REQUIRE(res.curve.size() == 30);
  CHECK(res.curve.front().epoch == 0);
  CHECK(res.curve.back().epoch == 29);
  CHECK(res.curve.back().total < res.curve.front().total);
  for (const VaeCurveRow& row : res.curve)
    CHECK(row.total == Catch::Approx(row.nll + row.kl + row.smooth));
}

TEST_CASE("pretraining resumes from a given epoch") {
  Rng data_rng(4);
  Dataset ds = circleworld_expert_dataset(2, data_rng);
  TrainConfig cfg = default_config("circleworld");
  cfg.vae_epochs = 6;
  cfg.vae_batch = 2;
  Rng rng(12);
  VaePretrainResult first = pretrain_vae(ds, cfg, rng);
  Rng rng2(13);
  const VaePretrainResult more =
      pretrain_vae(ds, cfg, rng2, &first.nets, /*start_epoch=*/3);
  REQUIRE(more.curve.size() == 3);
  CHECK(more.curve.front().epoch == 3);
  CHECK(more.curve.back().epoch == 5);
  // Resuming at the end is a no-op.
  Rng rng3(14);
  CHECK(pretrain_vae(ds, cfg, rng3, &first.nets, 6).curve.empty());
}
