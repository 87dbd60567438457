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
//
// Release gate for the library: ten end-to-end criteria, one verdict line
// each on stdout. Every tolerance and training budget is pinned here so a
// re-run is comparable across machines. Exit status 0 iff all gates pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "digail/digail.hpp"
#include "digail/envs.hpp"
#include "digail/evaluation.hpp"
#include "digail/figures.hpp"
#include "digail/info_oracle.hpp"
#include "digail/model_io.hpp"

using namespace digail;

namespace {

struct Verdict {
  bool ok = false;
  std::string detail;
};

double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

/* ------------------------------------------------------------------ */
/* criterion 1: variational bound <= directed info <= mutual info     */
/* ------------------------------------------------------------------ */

Verdict criterion1() {
  constexpr double kTol = 1e-10;
  constexpr int kModels = 120;
  constexpr int kPosteriors = 5;
  Rng rng(1001);
  double max_slack = 0.0;
  double max_eq_gap = 0.0;
  for (int i = 0; i < kModels; ++i) {
    const int T = 1 + rng.below(3);
    const int n_tau = 1 + rng.below(3);
    const int n_c = 1 + rng.below(3);
    const DiscreteChainModel m = random_chain_model(T, n_tau, n_c, rng);
    const double mi = exact_mutual_information(m);
    const double di = exact_directed_information(m);
    const double h = exact_latent_entropy(m);
    max_slack = std::max(max_slack, di - mi);
    max_slack = std::max(max_slack, mi - h);
    const double l1_true = exact_variational_bound(m, true_posterior(m));
    max_eq_gap = std::max(max_eq_gap, std::abs(l1_true - di));
    for (int j = 0; j < kPosteriors; ++j) {
      const double l1 = exact_variational_bound(m, random_posterior(m, rng));
      max_slack = std::max(max_slack, l1 - di);
    }
  }
  Verdict v;
  v.ok = max_slack <= kTol && max_eq_gap <= kTol;
  v.detail = "max chain slack " + fmt(max_slack) + ", max equality gap " +
             fmt(max_eq_gap) + " over " + std::to_string(kModels) + " models";
  return v;
}

/* ------------------------------------------------------------------ */
/* criterion 2: analytic gradients match finite differences           */
/* ------------------------------------------------------------------ */

double fd_max_rel(std::vector<ParamSlice> slices, const std::function<double()>& loss,
                  const std::function<void()>& backward) {
  constexpr double kH = 1e-5;
  for (ParamSlice& s : slices)
    for (std::size_t i = 0; i < s.n; ++i) s.grad[i] = 0.0;
  backward();
  double worst = 0.0;
  for (ParamSlice& s : slices)
    for (std::size_t i = 0; i < s.n; ++i) {
      const double keep = s.value[i];
      s.value[i] = keep + kH;
      const double hi = loss();
      s.value[i] = keep - kH;
      const double lo = loss();
      s.value[i] = keep;
      worst = std::max(worst, rel_err(s.grad[i], (hi - lo) / (2.0 * kH)));
    }
  return worst;
}

Verdict criterion2() {
  constexpr double kMlpTol = 1e-4;
  constexpr double kEndToEndTol = 1e-3;
  Rng rng(2002);
  double worst_mlp = 0.0;
  for (const std::vector<int>& sizes :
       {std::vector<int>{3, 5, 2}, std::vector<int>{4, 4}, std::vector<int>{2, 8, 8, 1}}) {
    Mlp m = mlp_make(sizes);
    mlp_init(m, rng, std::sqrt(2.0), 1.0);
    Vec x(sizes.front());
    for (double& xi : x) xi = rng.normal();
    auto loss = [&] {
      const Vec out = mlp_forward(m, x);
      double s = 0.0;
      for (double o : out) s += 0.5 * o * o;
      return s;
    };
    auto backward = [&] { mlp_backward(m, x, mlp_forward(m, x)); };
    worst_mlp = std::max(worst_mlp, fd_max_rel(param_slices(m), loss, backward));
  }

  double worst_e2e = 0.0;
  for (bool discrete : {false, true}) {
    Rng init(2003);
    VaeNets nets = make_vae_nets(2, discrete ? 4 : 2, discrete, 2, init, 6);
    Trajectory tr;
    tr.env_id = "toy";
    tr.steps.resize(3);
    tr.steps[0] = {Vec{0.3, -0.2}, discrete ? Vec{3.0} : Vec{0.5, -0.3}, 0.0};
    tr.steps[1] = {Vec{-0.1, 0.4}, discrete ? Vec{1.0} : Vec{0.1, 0.2}, 0.0};
    tr.steps[2] = {Vec{0.2, 0.1}, discrete ? Vec{0.0} : Vec{-0.4, 0.6}, 0.0};
    auto loss = [&] {
      Rng noise(99);
      return vae_loss(nets, tr, 1.0, 0.7, noise).total();
    };
    auto backward = [&] {
      Rng noise(99);
      vae_loss_backward(nets, tr, 1.0, 0.7, noise, 1.0);
    };
    worst_e2e = std::max(worst_e2e, fd_max_rel(vae_param_slices(nets), loss, backward));
  }

  Verdict v;
  v.ok = worst_mlp <= kMlpTol && worst_e2e <= kEndToEndTol;
  v.detail = "max rel err mlp " + fmt(worst_mlp) + ", end-to-end " + fmt(worst_e2e);
  return v;
}

/* ------------------------------------------------------------------ */
/* criterion 3: four rooms goal reaching with specialized codes       */
/* ------------------------------------------------------------------ */

Verdict criterion3() {
  constexpr int kDemos = 200;
  constexpr int kEvalEpisodes = 100;
  Rng data_rng(3001);
  const Dataset expert = fourrooms_expert_dataset(kDemos, data_rng);
  const TrainConfig cfg = default_config("fourrooms");

  Rng vae_rng(3002);
  const VaePretrainResult vae = pretrain_vae(expert, cfg, vae_rng);

  FourRoomsEnv env;
  Rng train_rng(3003);
  const TrainResult res = train_digail(cfg, expert, &vae.nets, env, train_rng);

  Rng eval_rng(3004);
  const FourRoomsEval ev =
      evaluate_fourrooms(res.nets.pi, &vae.nets.q, cfg.k, env, kEvalEpisodes, eval_rng);
  long total_steps = 0;
  for (long u : ev.code_usage) total_steps += u;
  int busy_codes = 0;
  for (long u : ev.code_usage)
    if (total_steps > 0 && static_cast<double>(u) / total_steps >= 0.10) busy_codes += 1;

  const int apple = FourRoomsMap::cell(8, 11);
  std::vector<std::vector<int>> maps;
  for (int c = 0; c < cfg.k; ++c)
    maps.push_back(fourrooms_action_map(res.nets.pi, cfg.k, c, apple));
  double max_disagreement = 0.0;
  for (std::size_t a = 0; a < maps.size(); ++a)
    for (std::size_t b = a + 1; b < maps.size(); ++b)
      max_disagreement = std::max(max_disagreement, action_map_disagreement(maps[a], maps[b]));

  Verdict v;
  v.ok = ev.success_rate >= 0.90 &&
         (ev.n_success == 0 || ev.mean_path_ratio <= 1.25) && busy_codes >= 2 &&
         max_disagreement >= 0.30;
  v.detail = "success " + fmt(ev.success_rate) + ", path ratio " +
             fmt(ev.mean_path_ratio) + ", codes >=10% " + std::to_string(busy_codes) +
             ", map disagreement " + fmt(max_disagreement);
  return v;
}

/* ------------------------------------------------------------------ */
/* criteria 4 + 5 + 7 + 10 share the circle-world pipeline            */
/* ------------------------------------------------------------------ */

struct CircleArtifacts {
  Dataset expert;
  VaePretrainResult vae_smooth;  // lambda_s = 1.0 (env default)
  TrainConfig cfg;
};

CircleArtifacts g_circle;

Verdict criterion4() {
  constexpr int kDemos = 20;
  Rng data_rng(4001);
  g_circle.expert = circleworld_expert_dataset(kDemos, data_rng);
  g_circle.cfg = default_config("circleworld");

  Rng smooth_rng(4002);
  g_circle.vae_smooth = pretrain_vae(g_circle.expert, g_circle.cfg, smooth_rng);
  const SegmentationReport smooth =
      segment_dataset(g_circle.vae_smooth.nets.q, g_circle.cfg.k, g_circle.expert);

  TrainConfig rough_cfg = g_circle.cfg;
  rough_cfg.lambda_s = 0.0;
  Rng rough_rng(4002);
  const VaePretrainResult vae_rough = pretrain_vae(g_circle.expert, rough_cfg, rough_rng);
  const SegmentationReport rough =
      segment_dataset(vae_rough.nets.q, rough_cfg.k, g_circle.expert);

  auto mean_switches = [](const SegmentationReport& r) {
    double s = 0.0;
    for (int n : r.switch_counts) s += n;
    return s / r.switch_counts.size();
  };
  const double sw_smooth = mean_switches(smooth);
  const double sw_rough = mean_switches(rough);

  Verdict v;
  v.ok = smooth.has_accuracy && smooth.accuracy >= 0.90 && sw_smooth < sw_rough;
  v.detail = "accuracy " + fmt(smooth.accuracy) + ", mean switches " + fmt(sw_smooth) +
             " (smoothing on) vs " + fmt(sw_rough) + " (off)";
  return v;
}

Verdict criterion5() {
  CircleWorldEnv env;
  Rng train_rng(5001);
  const TrainResult res =
      train_digail(g_circle.cfg, g_circle.expert, &g_circle.vae_smooth.nets, env, train_rng);

  std::vector<int> schedule(100, 0);
  for (int t = 50; t < 100; ++t) schedule[t] = 1;
  std::vector<int> swapped(100, 1);
  for (int t = 50; t < 100; ++t) swapped[t] = 0;

  Rng ra(5002), rb(5002);
  const Trajectory ta =
      compose_with_schedule(res.nets.pi, false, g_circle.cfg.k, schedule, env, ra);
  const Trajectory tb =
      compose_with_schedule(res.nets.pi, false, g_circle.cfg.k, swapped, env, rb);
  const std::vector<double> ca = displacement_crosses(trajectory_points(ta));
  const std::vector<double> cb = displacement_crosses(trajectory_points(tb));

  int flipped = 0;
  const std::size_t n = std::min(ca.size(), cb.size());
  for (std::size_t i = 0; i < n; ++i)
    if (ca[i] * cb[i] < 0.0) flipped += 1;
  const double frac = n > 0 ? static_cast<double>(flipped) / n : 0.0;

  Verdict v;
  v.ok = frac >= 0.90;
  v.detail = "sign flipped on " + fmt(frac) + " of " + std::to_string(n) + " steps";
  return v;
}

/* ------------------------------------------------------------------ */
/* criterion 6: pendulum return ordering                              */
/* ------------------------------------------------------------------ */

double pendulum_expert_mean_return(int episodes, const Rng& root) {
  PendulumEnv env;
  double sum = 0.0;
  for (int i = 0; i < episodes; ++i) {
    Rng ep = root.fork(static_cast<std::uint64_t>(i));
    env.reset(ep);
    double ret = 0.0;
    for (int t = 0; t < env.spec().episode_cap; ++t) {
      const EnvStep es = env.step(Vec{pendulum_expert_torque(env.state())});
      ret += es.reward;
      if (es.done) break;
    }
    sum += ret;
  }
  return sum / episodes;
}

Verdict criterion6() {
  constexpr int kDemos = 25;
  constexpr int kEvalEpisodes = 300;
  Rng data_rng(6001);
  const Dataset expert = pendulum_expert_dataset(kDemos, data_rng);
  const TrainConfig cfg = default_config("pendulum");

  Rng vae_rng(6002);
  const VaePretrainResult vae = pretrain_vae(expert, cfg, vae_rng);

  PendulumEnv env;
  Rng di_rng(6003);
  const TrainResult di = train_digail(cfg, expert, &vae.nets, env, di_rng);
  Rng gail_rng(6004);
  const TrainResult gail = train_gail(cfg, expert, env, gail_rng);

  Rng eval_root(6005);
  const ReturnStats bc =
      evaluate_returns(vae.nets.pi, &vae.nets.q, cfg.k, false, env, kEvalEpisodes, eval_root);
  const ReturnStats di_st =
      evaluate_returns(di.nets.pi, &vae.nets.q, cfg.k, false, env, kEvalEpisodes, eval_root);
  const ReturnStats gail_st =
      evaluate_returns(gail.nets.pi, nullptr, 0, false, env, kEvalEpisodes, eval_root);
  const double expert_mean = pendulum_expert_mean_return(kEvalEpisodes, eval_root);

  const bool beats_bc = di_st.mean >= bc.mean;
  const bool near_expert = std::abs(di_st.mean - expert_mean) <= 0.25 * std::abs(expert_mean);
  const bool overlaps =
      std::abs(di_st.mean - gail_st.mean) <= di_st.std_dev + gail_st.std_dev;

  Verdict v;
  v.ok = beats_bc && near_expert && overlaps;
  v.detail = "digail " + fmt(di_st.mean) + "+-" + fmt(di_st.std_dev) + ", gail " +
             fmt(gail_st.mean) + "+-" + fmt(gail_st.std_dev) + ", vae-bc " +
             fmt(bc.mean) + ", expert " + fmt(expert_mean);
  return v;
}

/* ------------------------------------------------------------------ */
/* criterion 7: the l2 anchor keeps the policy near the expert        */
/* ------------------------------------------------------------------ */

Verdict criterion7() {
  constexpr int kSeeds = 5;
  constexpr double kWeight = 1.0;
  TrainConfig cfg = g_circle.cfg;
  cfg.epochs = 60;
  cfg.batch_size = 256;

  int reduced = 0;
  std::string pairs;
  for (int s = 0; s < kSeeds; ++s) {
    CircleWorldEnv env;
    TrainConfig plain = cfg;
    plain.l2_bc_weight = 0.0;
    Rng ra(7001 + s);
    const TrainResult base =
        train_digail(plain, g_circle.expert, &g_circle.vae_smooth.nets, env, ra);
    TrainConfig anchored = cfg;
    anchored.l2_bc_weight = kWeight;
    Rng rb(7001 + s);
    const TrainResult reg =
        train_digail(anchored, g_circle.expert, &g_circle.vae_smooth.nets, env, rb);
    const double mse_base = expert_action_mse(base.nets.pi, &g_circle.vae_smooth.nets.q,
                                              cfg.k, g_circle.expert);
    const double mse_reg = expert_action_mse(reg.nets.pi, &g_circle.vae_smooth.nets.q,
                                             cfg.k, g_circle.expert);
    if (mse_reg < mse_base) reduced += 1;
    if (!pairs.empty()) pairs += " ";
    pairs += fmt(mse_base) + ">" + fmt(mse_reg);
  }

  Verdict v;
  v.ok = reduced == kSeeds;
  v.detail = std::to_string(reduced) + "/" + std::to_string(kSeeds) +
             " paired seeds reduced (" + pairs + ")";
  return v;
}

/* ------------------------------------------------------------------ */
/* criterion 8: byte-identical pipeline re-runs                       */
/* ------------------------------------------------------------------ */

struct PipelineBytes {
  std::string vae_ckpt;
  std::string policy_ckpt;
  std::string code_svg;
  std::string path_svg;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

PipelineBytes run_pipeline(const std::string& tag) {
  TrainConfig cfg = default_config("circleworld");
  cfg.vae_epochs = 25;
  cfg.epochs = 8;
  cfg.batch_size = 128;
  cfg.seed = 8001;

  Rng data_rng(8002);
  const Dataset expert = circleworld_expert_dataset(12, data_rng);
  Rng vae_rng(8003);
  const VaePretrainResult vae = pretrain_vae(expert, cfg, vae_rng);
  CircleWorldEnv env;
  Rng train_rng(8004);
  const TrainResult res = train_digail(cfg, expert, &vae.nets, env, train_rng);

  PipelineBytes out;
  const std::string vae_path = "acceptance_vae_" + tag + ".ckpt";
  const std::string pol_path = "acceptance_policy_" + tag + ".ckpt";
  checkpoint_save(vae_path, vae_to_checkpoint(vae.nets, "circleworld", "onehot",
                                              cfg.vae_epochs));
  checkpoint_save(pol_path,
                  policy_to_checkpoint(res.nets, &vae.nets.q, "digail", "circleworld",
                                       "onehot"));
  out.vae_ckpt = slurp(vae_path);
  out.policy_ckpt = slurp(pol_path);
  std::remove(vae_path.c_str());
  std::remove(pol_path.c_str());

  const std::vector<int> codes =
      segment_trajectory(vae.nets.q, cfg.k, expert.trajectories.front());
  out.code_svg = code_time_svg(codes, cfg.k);
  Rng roll_rng(8005);
  const Trajectory tr =
      rollout_episode(res.nets.pi, &vae.nets.q, cfg.k, false, env, roll_rng);
  ColoredPath path;
  path.points = trajectory_points(tr);
  path.codes = tr.phases;
  out.path_svg = paths_svg({path});
  return out;
}

Verdict criterion8() {
  const PipelineBytes a = run_pipeline("a");
  const PipelineBytes b = run_pipeline("b");
  const bool ckpts = a.vae_ckpt == b.vae_ckpt && a.policy_ckpt == b.policy_ckpt;
  const bool figs = a.code_svg == b.code_svg && a.path_svg == b.path_svg;
  Verdict v;
  v.ok = ckpts && figs && !a.vae_ckpt.empty() && !a.code_svg.empty();
  v.detail = std::string("checkpoints ") + (ckpts ? "identical" : "DIFFER") +
             ", figures " + (figs ? "identical" : "DIFFER");
  return v;
}

/* ------------------------------------------------------------------ */
/* criterion 9: default configurations match the published table      */
/* ------------------------------------------------------------------ */

Verdict criterion9() {
  std::vector<std::string> bad;
  auto expect = [&](bool cond, const std::string& what) {
    if (!cond) bad.push_back(what);
  };
  const TrainConfig fr = default_config("fourrooms");
  expect(fr.k == 4 && fr.epochs == 1000 && fr.batch_size == 256 && fr.lambda1 == 0.1,
         "fourrooms digail");
  expect(fr.vae_epochs == 500 && fr.vae_batch == 32 && fr.lambda_s == 0.0,
         "fourrooms vae");
  const TrainConfig cw = default_config("circleworld");
  expect(cw.k == 2 && cw.epochs == 1000 && cw.batch_size == 512 && cw.lambda1 == 0.01,
         "circleworld digail");
  expect(cw.vae_epochs == 1000 && cw.vae_batch == 16 && cw.lambda_s == 1.0,
         "circleworld vae");
  const TrainConfig pd = default_config("pendulum");
  expect(pd.k == 4 && pd.epochs == 2000 && pd.batch_size == 1024 && pd.lambda1 == 0.01,
         "pendulum digail");
  expect(pd.vae_epochs == 1000 && pd.vae_batch == 16 && pd.lambda_s == 0.0,
         "pendulum vae");
  for (const TrainConfig& c : {fr, cw, pd}) {
    expect(c.lr == 3e-4 && c.vae_lr == 3e-4, "adam lr");
    expect(c.ppo_clip == 0.2 && c.ppo_epochs == 4 && c.minibatches == 4, "ppo");
    expect(c.gamma == 0.99 && c.gae_lambda == 0.95 && c.lambda2 == 1e-3, "rl shared");
    expect(c.tau0 == 5.0 && c.tau_decay == 3e-3 && c.tau_floor == 0.1, "temperature");
    expect(c.warm_start && c.workers == 1 && c.latent_source == "expert-demo" &&
               c.l2_bc_weight == 0.0,
           "misc shared");
  }
  Verdict v;
  v.ok = bad.empty();
  if (bad.empty()) {
    v.detail = "all defaults match the pinned table";
  } else {
    v.detail = "mismatch:";
    for (const std::string& b : bad) v.detail += " " + b;
  }
  return v;
}

/* ------------------------------------------------------------------ */
/* criterion 10: segmentation still works with k = 8                  */
/* ------------------------------------------------------------------ */

Verdict criterion10() {
  TrainConfig cfg = g_circle.cfg;
  cfg.k = 8;
  Rng rng(10001);
  const VaePretrainResult vae = pretrain_vae(g_circle.expert, cfg, rng);
  const SegmentationReport rep = segment_dataset(vae.nets.q, cfg.k, g_circle.expert);
  Verdict v;
  v.ok = rep.has_accuracy && rep.accuracy >= 0.90;
  v.detail = "k=8 accuracy " + fmt(rep.accuracy);
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> gates = {
      {"oracle inequality chain", criterion1},
      {"gradient checks", criterion2},
      {"four rooms goal reaching", criterion3},
      {"circle-world segmentation", criterion4},
      {"code-swap composition", criterion5},
      {"pendulum return ordering", criterion6},
      {"l2 behavior-cloning anchor", criterion7},
      {"byte-identical re-runs", criterion8},
      {"default config table", criterion9},
      {"k=8 robustness", criterion10},
  };
  bool all_ok = true;
  for (std::size_t i = 0; i < gates.size(); ++i) {
    std::cerr << "running criterion " << (i + 1) << " (" << gates[i].first << ")..."
              << std::endl;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = gates[i].second();
    } catch (const std::exception& e) {
      v.ok = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all_ok = all_ok && v.ok;
    std::cout << "criterion " << (i + 1) << " [" << gates[i].first << "]: "
              << (v.ok ? "PASS" : "FAIL") << " - " << v.detail << " (" << fmt(secs)
              << "s)" << std::endl;
  }
  std::cout << (all_ok ? "ACCEPTANCE: ALL CRITERIA PASS" : "ACCEPTANCE: FAILURES PRESENT")
            << std::endl;
  return all_ok ? 0 : 1;
}
