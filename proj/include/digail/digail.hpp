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

#ifndef DIGAIL_DIGAIL_HPP_
#define DIGAIL_DIGAIL_HPP_

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "digail/adam.hpp"
#include "digail/categorical.hpp"
#include "digail/config.hpp"
#include "digail/env.hpp"
#include "digail/trajectory.hpp"
#include "digail/vae.hpp"

namespace digail {

constexpr double kDiscClampLo = 1e-8;
constexpr double kDiscClampHi = 1.0 - 1e-8;

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
inline double softplus(double x) { return x > 30.0 ? x : std::log1p(std::exp(x)); }

// Discriminator input (s ++ a): discrete actions enter one-hot.
inline Vec disc_input(const Vec& state, const Vec& action, bool discrete,
                      int action_dim) {
  Vec in = state;
  if (discrete) {
    Vec oh(action_dim, 0.0);
    oh[static_cast<int>(action[0])] = 1.0;
    in.insert(in.end(), oh.begin(), oh.end());
  } else {
    in.insert(in.end(), action.begin(), action.end());
  }
  return in;
}

inline double disc_prob(const Mlp& d, const Vec& input) {
  double p = sigmoid(mlp_forward(d, input)[0]);
  if (p < kDiscClampLo) p = kDiscClampLo;
  if (p > kDiscClampHi) p = kDiscClampHi;
  return p;
}

// Binary cross-entropy with policy samples labeled 1 and expert samples
// labeled 0: -E_pi[log D] - E_E[log(1 - D)], each term a batch mean.
inline double discriminator_loss(const Mlp& d, const std::vector<Vec>& policy_inputs,
                                 const std::vector<Vec>& expert_inputs) {
  if (policy_inputs.empty() || expert_inputs.empty())
    throw std::invalid_argument("discriminator_loss: empty batch");
  double loss = 0.0;
  for (const Vec& in : policy_inputs)
    loss += softplus(-mlp_forward(d, in)[0]) / policy_inputs.size();
  for (const Vec& in : expert_inputs)
    loss += softplus(mlp_forward(d, in)[0]) / expert_inputs.size();
  return loss;
}

// One gradient accumulation pass of the BCE loss (no optimizer step).
inline void discriminator_backward(Mlp& d, const std::vector<Vec>& policy_inputs,
                                   const std::vector<Vec>& expert_inputs) {
  for (const Vec& in : policy_inputs) {
    const double p = sigmoid(mlp_forward(d, in)[0]);
    mlp_backward(d, in, Vec{(p - 1.0) / policy_inputs.size()});
  }
  for (const Vec& in : expert_inputs) {
    const double p = sigmoid(mlp_forward(d, in)[0]);
    mlp_backward(d, in, Vec{p / expert_inputs.size()});
  }
}

// Per-step policy reward: surprise of the discriminator plus the frozen
// posterior's log-likelihood of the realized code:
//   r = -log D(s, a) + lambda1 * log q(c_t | s_t, c_{t-1}).
inline double step_reward(const Mlp& d, const Mlp* q, const Vec& s, const Vec& a,
                          const Vec& c, const Vec& c_prev, double lambda1,
                          bool discrete, int action_dim) {
  double r = -std::log(disc_prob(d, disc_input(s, a, discrete, action_dim)));
  if (lambda1 != 0.0) {
    if (!q) throw std::invalid_argument("step_reward: lambda1 > 0 requires a posterior");
    const Vec lp = softmax_logprobs(mlp_forward(*q, concat(s, c_prev)));
    r += lambda1 * lp[argmax(c)];
  }
  return r;
}

// Hardened code sequence from running the frozen encoder along a
// trajectory's states (greedy argmax chaining, c_0 = zeros).
inline std::vector<Vec> encode_sequence(const Mlp& q, int k, const Trajectory& tr) {
  std::vector<Vec> codes(tr.length());
  Vec c_prev(k, 0.0);
  for (int t = 0; t < tr.length(); ++t) {
    const Vec logits = mlp_forward(q, concat(tr.steps[t].state, c_prev));
    codes[t] = one_hot(argmax(logits), k);
    c_prev = codes[t];
  }
  return codes;
}

// Expert-demo latent source: hardened codes of one randomly drawn expert
// trajectory. Rollouts truncate a long schedule and repeat its last code
// when they outlive it.
inline std::vector<Vec> sample_latent_sequence(const Mlp& q, int k,
                                               const Dataset& expert, Rng& rng) {
  if (expert.trajectories.empty())
    throw std::invalid_argument("sample_latent_sequence: empty expert dataset");
  const int idx = rng.below(static_cast<int>(expert.trajectories.size()));
  return encode_sequence(q, k, expert.trajectories[idx]);
}

inline const Vec& schedule_code(const std::vector<Vec>& schedule, int t) {
  return t < static_cast<int>(schedule.size()) ? schedule[t] : schedule.back();
}

struct RolloutBatch {
  std::vector<Vec> states;
  std::vector<Vec> codes;       // empty Vec entries when k == 0
  std::vector<Vec> pol_inputs;  // state ++ code
  std::vector<Vec> actions;     // raw action (index in [0] for discrete)
  std::vector<double> logprobs;
  std::vector<double> rewards;      // step_reward surrogate
  std::vector<double> env_rewards;  // environment reward, diagnostics only
  std::vector<char> dones;          // 1 at episode end (true or cap)
  std::vector<char> truncs;         // 1 when the end was the step cap, not the env
  std::vector<Vec> next_states;     // successor observations (GAE bootstrap)
  int n_episodes = 0;

  int size() const { return static_cast<int>(states.size()); }
};

struct GailNets {
  Mlp pi;
  Vec log_std;
  Vec g_log_std;
  Mlp value;
  Mlp disc;
  int k = 0;  // 0 = plain GAIL (no latent conditioning)
  int state_dim = 0;
  int action_dim = 0;
  bool discrete = false;
};

inline double gaussian_logprob(const Vec& a, const Vec& mean, const Vec& log_std) {
  double lp = 0.0;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    const double z = (a[i] - mean[i]) / std::exp(log_std[i]);
    lp += -0.5 * kLog2Pi - log_std[i] - 0.5 * z * z;
  }
  return lp;
}

// Gathers whole episodes until at least cfg.batch_size steps are banked.
// Rewards come from the current discriminator and the frozen posterior at
// collection time.
inline RolloutBatch collect_rollouts(const GailNets& nets, const Mlp* q, Env& env,
                                     const TrainConfig& cfg, const Dataset& expert,
                                     Rng& rng) {
  RolloutBatch batch;
  const bool use_codes = nets.k > 0;
  const bool online = cfg.latent_source == "online-posterior";
  while (batch.size() < cfg.batch_size) {
    std::vector<Vec> schedule;
    if (use_codes && !online) schedule = sample_latent_sequence(*q, nets.k, expert, rng);
    Vec s = env.reset(rng);
    Vec c_prev(nets.k, 0.0);
    for (int t = 0; t < env.spec().episode_cap; ++t) {
      Vec c;
      if (use_codes) {
        c = online ? one_hot(argmax(mlp_forward(*q, concat(s, c_prev))), nets.k)
                   : schedule_code(schedule, t);
      }
      const Vec pol_in = concat(s, c);
      const Vec out = mlp_forward(nets.pi, pol_in);
      Vec a;
      double logprob;
      if (nets.discrete) {
        const Vec lp = softmax_logprobs(out);
        const int idx = sample_from_logits(out, rng);
        a = Vec{static_cast<double>(idx)};
        logprob = lp[idx];
      } else {
        a.resize(nets.action_dim);
        logprob = 0.0;
        for (int i = 0; i < nets.action_dim; ++i) {
          const double sig = std::exp(nets.log_std[i]);
          const double z = rng.normal();
          a[i] = out[i] + sig * z;
          logprob += -0.5 * kLog2Pi - nets.log_std[i] - 0.5 * z * z;
        }
      }
      const double r = step_reward(nets.disc, q, s, a, c, c_prev,
                                   use_codes ? cfg.lambda1 : 0.0, nets.discrete,
                                   nets.action_dim);
      const EnvStep es = env.step(a);
      const bool done = es.done || t == env.spec().episode_cap - 1;
      batch.states.push_back(s);
      batch.codes.push_back(c);
      batch.pol_inputs.push_back(pol_in);
      batch.actions.push_back(a);
      batch.logprobs.push_back(logprob);
      batch.rewards.push_back(r);
      batch.env_rewards.push_back(es.reward);
      batch.dones.push_back(done ? 1 : 0);
      batch.truncs.push_back(done && !es.done ? 1 : 0);
      batch.next_states.push_back(es.state);
      if (done) break;
      c_prev = c;
      s = es.state;
    }
    batch.n_episodes += 1;
  }
  return batch;
}

struct PpoDiagnostics {
  bool rejected = false;
  double mean_ratio = 1.0;
  double clip_fraction = 0.0;
  double value_loss = 0.0;
};

// Extra supervision for continuous envs: pulls the policy mean toward
// expert actions on expert states (codes from the frozen posterior).
struct L2BcData {
  std::vector<Vec> inputs;   // expert state ++ hardened code
  std::vector<Vec> actions;  // expert actions
};

inline L2BcData make_l2_bc_data(const Mlp& q, int k, const Dataset& expert) {
  L2BcData out;
  for (const Trajectory& tr : expert.trajectories) {
    std::vector<Vec> codes;
    if (k > 0) codes = encode_sequence(q, k, tr);
    for (int t = 0; t < tr.length(); ++t) {
      out.inputs.push_back(k > 0 ? concat(tr.steps[t].state, codes[t])
                                 : tr.steps[t].state);
      out.actions.push_back(tr.steps[t].action);
    }
  }
  return out;
}

// Mean squared distance between the policy mean and expert actions on a
// random expert sample; gradients scaled by `weight` land in the policy
// buffers. Discrete envs have no action mean to regress.
inline double l2_bc_gradient(Mlp& pi, const L2BcData& data, double weight,
                             int n_samples, bool discrete, Rng& rng) {
  if (discrete) throw std::invalid_argument("l2_bc_gradient: discrete actions");
  if (data.inputs.empty()) throw std::invalid_argument("l2_bc_gradient: no expert data");
  double mse = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const int idx = rng.below(static_cast<int>(data.inputs.size()));
    const Vec mean = mlp_forward(pi, data.inputs[idx]);
    Vec dmean(mean.size());
    for (std::size_t j = 0; j < mean.size(); ++j) {
      const double diff = mean[j] - data.actions[idx][j];
      mse += diff * diff / n_samples;
      dmean[j] = weight * 2.0 * diff / n_samples;
    }
    if (weight != 0.0) mlp_backward(pi, data.inputs[idx], dmean);
  }
  return mse;
}

inline std::vector<ParamSlice> policy_slices(GailNets& n) {
  std::vector<ParamSlice> s = param_slices(n.pi);
  if (!n.discrete)
    s.push_back({n.log_std.data(), n.g_log_std.data(), n.log_std.size()});
  return s;
}

// Clipped-surrogate PPO with GAE advantages (normalized per batch), an
// entropy bonus weighted by lambda2, and a value regression to discounted
// returns. Minibatch order reshuffles every pass.
inline PpoDiagnostics ppo_update(GailNets& nets, AdamState& adam_pi,
                                 AdamState& adam_value, const RolloutBatch& batch,
                                 const TrainConfig& cfg, Rng& rng,
                                 const L2BcData* l2_data = nullptr) {
  const int n = batch.size();
  PpoDiagnostics diag;

  Vec values(n);
  for (int i = 0; i < n; ++i)
    values[i] = mlp_forward(nets.value, batch.pol_inputs[i])[0];
  Vec adv(n, 0.0), ret(n, 0.0);
  double gae = 0.0;
  for (int i = n - 1; i >= 0; --i) {
    const bool done = batch.dones[i] != 0 || i + 1 == n;
    // Step-cap cutoffs are truncations, not terminals: bootstrap with the
    // value of the successor observation (paired with the step's own code;
    // schedules repeat their last code past the horizon anyway). Batches
    // built without successor records fall back to terminal handling.
    double next_v = 0.0;
    if (!done) {
      next_v = values[i + 1];
    } else if (i < static_cast<int>(batch.truncs.size()) && batch.truncs[i] != 0) {
      next_v = mlp_forward(nets.value, concat(batch.next_states[i], batch.codes[i]))[0];
    }
    if (done) gae = 0.0;
    const double delta = batch.rewards[i] + cfg.gamma * next_v - values[i];
    gae = delta + cfg.gamma * cfg.gae_lambda * gae;
    adv[i] = gae;
    ret[i] = adv[i] + values[i];
  }
  double mean = 0.0, sq = 0.0;
  for (double a : adv) mean += a / n;
  for (double a : adv) sq += (a - mean) * (a - mean) / n;
  const double sd = std::sqrt(sq);
  for (double& a : adv) {
    a = (a - mean) / (sd + 1e-8);
    if (!std::isfinite(a)) diag.rejected = true;
  }
  if (diag.rejected) return diag;

  long ratio_count = 0, clip_count = 0;
  double ratio_sum = 0.0, vloss_sum = 0.0;
  long vloss_count = 0;
  for (int pass = 0; pass < cfg.ppo_epochs; ++pass) {
    const std::vector<int> perm = rng.permutation(n);
    const int chunk = (n + cfg.minibatches - 1) / cfg.minibatches;
    for (int start = 0; start < n; start += chunk) {
      const int bn = std::min(chunk, n - start);
      for (int ii = 0; ii < bn; ++ii) {
        const int i = perm[start + ii];
        const Vec& pol_in = batch.pol_inputs[i];
        const Vec out = mlp_forward(nets.pi, pol_in);
        const double scale = 1.0 / bn;
        if (nets.discrete) {
          const Vec lp = softmax_logprobs(out);
          Vec p(lp.size());
          for (std::size_t j = 0; j < p.size(); ++j) p[j] = std::exp(lp[j]);
          const int a_idx = static_cast<int>(batch.actions[i][0]);
          const double ratio = std::exp(lp[a_idx] - batch.logprobs[i]);
          ratio_sum += ratio;
          ratio_count += 1;
          const double a = adv[i];
          const double clipped =
              std::clamp(ratio, 1.0 - cfg.ppo_clip, 1.0 + cfg.ppo_clip);
          const bool unclipped_active = ratio * a <= clipped * a;
          if (!unclipped_active) clip_count += 1;
          const double coef = unclipped_active ? -a * ratio : 0.0;
          const double h = entropy(p);
          Vec dz(out.size());
          for (std::size_t j = 0; j < dz.size(); ++j) {
            const double dlogp = (static_cast<int>(j) == a_idx ? 1.0 : 0.0) - p[j];
            const double logp = p[j] > 0.0 ? lp[j] : -745.0;
            dz[j] = scale * (coef * dlogp + cfg.lambda2 * p[j] * (logp + h));
          }
          mlp_backward(nets.pi, pol_in, dz);
        } else {
          double lp = gaussian_logprob(batch.actions[i], out, nets.log_std);
          const double ratio = std::exp(lp - batch.logprobs[i]);
          ratio_sum += ratio;
          ratio_count += 1;
          const double a = adv[i];
          const double clipped =
              std::clamp(ratio, 1.0 - cfg.ppo_clip, 1.0 + cfg.ppo_clip);
          const bool unclipped_active = ratio * a <= clipped * a;
          if (!unclipped_active) clip_count += 1;
          const double coef = unclipped_active ? -a * ratio : 0.0;
          Vec dmean(out.size());
          for (std::size_t j = 0; j < out.size(); ++j) {
            const double sig = std::exp(nets.log_std[j]);
            const double z = (batch.actions[i][j] - out[j]) / sig;
            dmean[j] = scale * coef * (z / sig);
            // d logprob / d log_std = z^2 - 1; entropy bonus adds -lambda2.
            nets.g_log_std[j] += scale * (coef * (z * z - 1.0) - cfg.lambda2);
          }
          mlp_backward(nets.pi, pol_in, dmean);
        }
        const double v = mlp_forward(nets.value, pol_in)[0];
        vloss_sum += 0.5 * (v - ret[i]) * (v - ret[i]);
        vloss_count += 1;
        mlp_backward(nets.value, pol_in, Vec{scale * (v - ret[i])});
      }
      if (l2_data && cfg.l2_bc_weight > 0.0 && !nets.discrete)
        l2_bc_gradient(nets.pi, *l2_data, cfg.l2_bc_weight, bn, nets.discrete, rng);
      auto pslices = policy_slices(nets);
      adam_step(adam_pi, pslices);
      if (!nets.discrete) clamp_log_std(nets.log_std);
      adam_step(adam_value, nets.value);
    }
  }
  diag.mean_ratio = ratio_count ? ratio_sum / ratio_count : 1.0;
  diag.clip_fraction = ratio_count ? static_cast<double>(clip_count) / ratio_count : 0.0;
  diag.value_loss = vloss_count ? vloss_sum / vloss_count : 0.0;
  return diag;
}

struct TrainCurveRow {
  long epoch = 0;
  double mean_env_return = 0.0;
  double mean_reward = 0.0;  // surrogate per-step reward
  double disc_loss = 0.0;
  int n_episodes = 0;
};

struct TrainResult {
  GailNets nets;
  std::vector<TrainCurveRow> curve;
};

// Adversarial stage: alternate discriminator BCE steps with PPO on the
// surrogate reward. The posterior stays frozen throughout. vae == nullptr
// (or cfg.lambda1 == 0 with k forced to 0 by train_gail) recovers plain
// GAIL; warm_start copies the VAE decoder into the policy.
inline TrainResult train_digail(const TrainConfig& cfg, const Dataset& expert,
                                const VaeNets* vae, Env& env, Rng& rng) {
  if (expert.trajectories.empty())
    throw std::invalid_argument("train_digail: empty expert dataset");
  const bool use_codes = vae != nullptr;
  if (!use_codes && cfg.lambda1 != 0.0)
    throw std::invalid_argument("train_digail: lambda1 > 0 requires a pre-trained posterior");
  TrainResult res;
  GailNets& nets = res.nets;
  nets.k = use_codes ? vae->k : 0;
  nets.state_dim = expert.header.state_dim;
  nets.action_dim = expert.header.action_dim;
  nets.discrete = expert.header.discrete_actions;
  if (use_codes && cfg.warm_start) {
    nets.pi = vae->pi;
    mlp_zero_grads(nets.pi);
    nets.log_std = vae->log_std;
  } else {
    nets.pi = mlp_make({nets.state_dim + nets.k, 64, 64, nets.action_dim});
    mlp_init(nets.pi, rng);
    if (!nets.discrete) nets.log_std.assign(nets.action_dim, 0.0);
  }
  if (!nets.discrete) nets.g_log_std.assign(nets.action_dim, 0.0);
  // A near-zero value head keeps early advantages sane around a warm-started
  // policy instead of injecting O(1) noise into the first GAE passes.
  nets.value = mlp_make({nets.state_dim + nets.k, 64, 64, 1});
  mlp_init(nets.value, rng, std::sqrt(2.0), 0.01);
  nets.disc = mlp_make({nets.state_dim + nets.action_dim, 64, 64, 1});
  mlp_init(nets.disc, rng);

  auto pslices = policy_slices(nets);
  AdamState adam_pi = adam_make(param_count(pslices), cfg.lr);
  AdamState adam_value = adam_make(param_count(param_slices(nets.value)), cfg.lr);
  AdamState adam_disc = adam_make(param_count(param_slices(nets.disc)), cfg.lr);

  std::vector<Vec> expert_inputs;
  for (const Trajectory& tr : expert.trajectories)
    for (const Step& st : tr.steps)
      expert_inputs.push_back(
          disc_input(st.state, st.action, nets.discrete, nets.action_dim));

  L2BcData l2_data;
  if (cfg.l2_bc_weight > 0.0 && !nets.discrete)
    l2_data = make_l2_bc_data(use_codes ? vae->q : nets.pi, nets.k, expert);

  const Mlp* q = use_codes ? &vae->q : nullptr;
  for (long epoch = 0; epoch < cfg.epochs; ++epoch) {
    const RolloutBatch batch = collect_rollouts(nets, q, env, cfg, expert, rng);

    std::vector<Vec> pol_inputs(batch.size());
    for (int i = 0; i < batch.size(); ++i)
      pol_inputs[i] = disc_input(batch.states[i], batch.actions[i], nets.discrete,
                                 nets.action_dim);
    // Two shuffled minibatch passes keep the discriminator in step with the
    // ppo_epochs * minibatches policy updates each epoch takes; a one-step
    // critic lags the policy and lets it farm stale positive rewards.
    std::vector<Vec> expert_sample(batch.size());
    for (int pass = 0; pass < 2; ++pass) {
      const std::vector<int> perm = rng.permutation(batch.size());
      const int chunk = (batch.size() + cfg.minibatches - 1) / cfg.minibatches;
      for (int start = 0; start < batch.size(); start += chunk) {
        const int bn = std::min(chunk, batch.size() - start);
        std::vector<Vec> pol_mb(bn), exp_mb(bn);
        for (int i = 0; i < bn; ++i) {
          pol_mb[i] = pol_inputs[perm[start + i]];
          exp_mb[i] =
              expert_inputs[rng.below(static_cast<int>(expert_inputs.size()))];
          expert_sample[start + i] = exp_mb[i];
        }
        discriminator_backward(nets.disc, pol_mb, exp_mb);
        adam_step(adam_disc, nets.disc);
      }
    }

    ppo_update(nets, adam_pi, adam_value, batch, cfg, rng,
               cfg.l2_bc_weight > 0.0 && !nets.discrete ? &l2_data : nullptr);

    TrainCurveRow row;
    row.epoch = epoch;
    row.n_episodes = batch.n_episodes;
    double ep_ret = 0.0;
    for (int i = 0; i < batch.size(); ++i) {
      ep_ret += batch.env_rewards[i];
      row.mean_reward += batch.rewards[i] / batch.size();
    }
    row.mean_env_return = ep_ret / batch.n_episodes;
    row.disc_loss = discriminator_loss(nets.disc, pol_inputs, expert_sample);
    res.curve.push_back(row);
  }
  return res;
}

// Plain GAIL: the lambda1 = 0, k = 0 special case of the same loop.
inline TrainResult train_gail(const TrainConfig& cfg, const Dataset& expert, Env& env,
                              Rng& rng) {
  TrainConfig c = cfg;
  c.lambda1 = 0.0;
  return train_digail(c, expert, nullptr, env, rng);
}

}  // namespace digail

#endif  // DIGAIL_DIGAIL_HPP_
