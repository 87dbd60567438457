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

#ifndef DIGAIL_VAE_HPP_
#define DIGAIL_VAE_HPP_

#include <cmath>
#include <stdexcept>
#include <vector>

#include "digail/adam.hpp"
#include "digail/categorical.hpp"
#include "digail/config.hpp"
#include "digail/mlp.hpp"
#include "digail/trajectory.hpp"

namespace digail {

constexpr double kLogStdMin = -5.0;
constexpr double kLogStdMax = 2.0;
constexpr double kLog2Pi = 1.8378770664093453;

// KL(q || p) for categoricals; q_j = 0 terms contribute 0.
inline double kl_categorical(const Vec& q, const Vec& p) {
  double kl = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j)
    if (q[j] > 0.0) kl += q[j] * (std::log(q[j]) - std::log(p[j]));
  return kl < 0.0 ? 0.0 : kl;
}

// Encoder q(c_t | s_t, c_{t-1}) and decoder pi(a_t | s_t, c_t). The decoder
// head is action logits for discrete envs, or an action mean plus a learned
// state-independent log-std for continuous envs. c_0 is the all-zeros
// vector, distinguishable from every real one-hot code.
struct VaeNets {
  Mlp q;        // (state_dim + k) -> k logits
  Mlp pi;       // (state_dim + k) -> action logits or mean
  Vec log_std;  // continuous envs only, clamped to [kLogStdMin, kLogStdMax]
  Vec g_log_std;
  int k = 0;
  int state_dim = 0;
  int action_dim = 0;
  bool discrete = false;
};

inline VaeNets make_vae_nets(int state_dim, int action_dim, bool discrete, int k,
                             Rng& rng, int hidden = 64) {
  if (k < 2) throw std::invalid_argument("vae: k must be >= 2");
  VaeNets n;
  n.k = k;
  n.state_dim = state_dim;
  n.action_dim = action_dim;
  n.discrete = discrete;
  n.q = mlp_make({state_dim + k, hidden, hidden, k});
  n.pi = mlp_make({state_dim + k, hidden, hidden, action_dim});
  mlp_init(n.q, rng);
  mlp_init(n.pi, rng);
  if (!discrete) {
    n.log_std.assign(action_dim, 0.0);
    n.g_log_std.assign(action_dim, 0.0);
  }
  return n;
}

inline void clamp_log_std(Vec& log_std) {
  for (double& v : log_std) {
    if (v < kLogStdMin) v = kLogStdMin;
    if (v > kLogStdMax) v = kLogStdMax;
  }
}

inline Vec concat(const Vec& a, const Vec& b) {
  Vec out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

struct EncodeResult {
  Vec code;    // relaxed one-hot sample on the simplex
  Vec logits;  // pre-noise encoder logits
};

inline EncodeResult encode(const Mlp& q, const Vec& s, const Vec& c_prev,
                           double tau, Rng& rng) {
  EncodeResult r;
  r.logits = mlp_forward(q, concat(s, c_prev));
  r.code = gumbel_softmax_sample(r.logits, tau, rng);
  return r;
}

// Log-likelihood of an expert action under the decoder: categorical over
// logits (discrete) or diagonal Gaussian (continuous).
inline double decode_logprob(const Mlp& pi, const Vec& log_std, const Vec& s,
                             const Vec& c, const Vec& a, bool discrete) {
  const Vec out = mlp_forward(pi, concat(s, c));
  if (discrete) {
    const int idx = static_cast<int>(a.at(0));
    if (idx < 0 || idx >= static_cast<int>(out.size()))
      throw std::invalid_argument("decode_logprob: action index out of range");
    return softmax_logprobs(out)[idx];
  }
  if (a.size() != out.size() || log_std.size() != out.size())
    throw std::invalid_argument("decode_logprob: action dimension mismatch");
  double lp = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double z = (a[i] - out[i]) / std::exp(log_std[i]);
    lp += -0.5 * kLog2Pi - log_std[i] - 0.5 * z * z;
  }
  return lp;
}

// Appendix-style switch penalty over consecutive soft codes:
//   L_s = sum_t [ 1 - (c_{t-1} . c_t) / max(|c_{t-1}|, |c_t|) ].
// A zero-norm partner (impossible for simplex points) scores a full switch.
inline double smoothing_penalty(const std::vector<Vec>& codes) {
  if (codes.size() < 2) throw std::invalid_argument("smoothing_penalty: need T >= 2");
  double total = 0.0;
  for (std::size_t t = 1; t < codes.size(); ++t) {
    double dot = 0.0, n1 = 0.0, n2 = 0.0;
    for (std::size_t i = 0; i < codes[t].size(); ++i) {
      dot += codes[t - 1][i] * codes[t][i];
      n1 += codes[t - 1][i] * codes[t - 1][i];
      n2 += codes[t][i] * codes[t][i];
    }
    const double denom = std::sqrt(n1 > n2 ? n1 : n2);
    total += denom < 1e-12 ? 1.0 : 1.0 - dot / denom;
  }
  return total;
}

struct VaeLossParts {
  double nll = 0.0;
  double kl = 0.0;
  double smooth = 0.0;  // lambda_s-weighted contribution
  double total() const { return nll + kl + smooth; }
};

// Reconstruction + KL against the uniform code prior + weighted smoothing for
// one trajectory. Consumes T*k Gumbel draws from rng; a fixed seed fixes the
// loss exactly.
inline VaeLossParts vae_loss(const VaeNets& nets, const Trajectory& tr, double tau,
                             double lambda_s, Rng& rng) {
  if (tr.length() == 0) throw std::invalid_argument("vae_loss: empty trajectory");
  VaeLossParts parts;
  const Vec uniform(nets.k, 1.0 / nets.k);
  std::vector<Vec> codes(tr.length());
  Vec c_prev(nets.k, 0.0);
  for (int t = 0; t < tr.length(); ++t) {
    const EncodeResult enc = encode(nets.q, tr.steps[t].state, c_prev, tau, rng);
    codes[t] = enc.code;
    parts.nll -= decode_logprob(nets.pi, nets.log_std, tr.steps[t].state, enc.code,
                                tr.steps[t].action, nets.discrete);
    parts.kl += kl_categorical(softmax(enc.logits), uniform);
    c_prev = enc.code;
  }
  if (lambda_s != 0.0 && tr.length() >= 2)
    parts.smooth = lambda_s * smoothing_penalty(codes);
  return parts;
}

namespace detail {

// d/dc of one smoothing term 1 - dot/max(n1, n2) with respect to both
// partners; ties break toward the first argument's norm.
inline void smoothing_pair_grads(const Vec& c1, const Vec& c2, Vec& g1, Vec& g2) {
  double dot = 0.0, s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < c1.size(); ++i) {
    dot += c1[i] * c2[i];
    s1 += c1[i] * c1[i];
    s2 += c2[i] * c2[i];
  }
  const double n1 = std::sqrt(s1), n2 = std::sqrt(s2);
  const double m = n1 >= n2 ? n1 : n2;
  g1.assign(c1.size(), 0.0);
  g2.assign(c2.size(), 0.0);
  if (m < 1e-12) return;
  for (std::size_t i = 0; i < c1.size(); ++i) {
    g1[i] = -c2[i] / m;
    g2[i] = -c1[i] / m;
  }
  // The max-norm partner also moves the denominator.
  if (n1 >= n2) {
    for (std::size_t i = 0; i < c1.size(); ++i) g1[i] += dot * c1[i] / (n1 * m * m);
  } else {
    for (std::size_t i = 0; i < c2.size(); ++i) g2[i] += dot * c2[i] / (n2 * m * m);
  }
}

}  // namespace detail

// Gaussian NLL for a precomputed decoder mean (backward-pass helper).
inline double decode_logprob_mean(const VaeNets& nets, const Vec& mean, const Vec& a) {
  double lp = 0.0;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    const double z = (a[i] - mean[i]) / std::exp(nets.log_std[i]);
    lp += -0.5 * kLog2Pi - nets.log_std[i] - 0.5 * z * z;
  }
  return lp;
}

// Same loss with reverse-mode gradients accumulated into the network grad
// buffers, scaled by grad_scale. Backpropagation runs through the sampled
// codes: each c_t receives gradient from the decoder at t, from both
// smoothing terms touching it, and from the encoder input at t+1.
inline VaeLossParts vae_loss_backward(VaeNets& nets, const Trajectory& tr, double tau,
                                      double lambda_s, Rng& rng, double grad_scale) {
  const int T = tr.length();
  if (T == 0) throw std::invalid_argument("vae_loss_backward: empty trajectory");
  VaeLossParts parts;

  const Vec uniform(nets.k, 1.0 / nets.k);
  std::vector<Vec> x(T), logits(T), probs(T), codes(T), dec_in(T), dec_out(T);
  Vec kl_t(T, 0.0);
  Vec c_prev(nets.k, 0.0);
  for (int t = 0; t < T; ++t) {
    x[t] = concat(tr.steps[t].state, c_prev);
    logits[t] = mlp_forward(nets.q, x[t]);
    codes[t] = gumbel_softmax_sample(logits[t], tau, rng);
    probs[t] = softmax(logits[t]);
    dec_in[t] = concat(tr.steps[t].state, codes[t]);
    dec_out[t] = mlp_forward(nets.pi, dec_in[t]);
    parts.nll -= nets.discrete
                     ? softmax_logprobs(dec_out[t])[static_cast<int>(tr.steps[t].action[0])]
                     : decode_logprob_mean(nets, dec_out[t], tr.steps[t].action);
    kl_t[t] = kl_categorical(probs[t], uniform);
    parts.kl += kl_t[t];
    c_prev = codes[t];
  }
  if (lambda_s != 0.0 && T >= 2) parts.smooth = lambda_s * smoothing_penalty(codes);

  std::vector<Vec> dC(T, Vec(nets.k, 0.0));
  for (int t = T - 1; t >= 0; --t) {
    // Reconstruction term through the decoder.
    Vec dout(nets.action_dim, 0.0);
    if (nets.discrete) {
      const Vec p = softmax(dec_out[t]);
      const int idx = static_cast<int>(tr.steps[t].action[0]);
      for (int j = 0; j < nets.action_dim; ++j)
        dout[j] = grad_scale * (p[j] - (j == idx ? 1.0 : 0.0));
    } else {
      for (int j = 0; j < nets.action_dim; ++j) {
        const double sig = std::exp(nets.log_std[j]);
        const double z = (tr.steps[t].action[j] - dec_out[t][j]) / sig;
        dout[j] = grad_scale * (-z / sig);  // d nll / d mean
        nets.g_log_std[j] += grad_scale * (1.0 - z * z);
      }
    }
    const Vec din = mlp_backward(nets.pi, dec_in[t], dout);
    for (int j = 0; j < nets.k; ++j) dC[t][j] += din[nets.state_dim + j];

    // Smoothing pair (t-1, t); the (t, t+1) pair landed in dC[t] already.
    if (lambda_s != 0.0 && t >= 1) {
      Vec g1, g2;
      detail::smoothing_pair_grads(codes[t - 1], codes[t], g1, g2);
      for (int j = 0; j < nets.k; ++j) {
        dC[t - 1][j] += grad_scale * lambda_s * g1[j];
        dC[t][j] += grad_scale * lambda_s * g2[j];
      }
    }

    // Through the Gumbel-softmax into the encoder logits, plus the KL term
    // d KL(q || u)/d z_j = q_j (log q_j - log u_j - KL).
    Vec dz = gumbel_softmax_backward(codes[t], tau, dC[t]);
    for (int j = 0; j < nets.k; ++j) {
      const double logq = probs[t][j] > 0.0 ? std::log(probs[t][j]) : -745.0;
      dz[j] += grad_scale * probs[t][j] * (logq - std::log(uniform[j]) - kl_t[t]);
    }
    const Vec dx = mlp_backward(nets.q, x[t], dz);
    if (t >= 1)
      for (int j = 0; j < nets.k; ++j) dC[t - 1][j] += dx[nets.state_dim + j];
  }
  return parts;
}

struct VaeCurveRow {
  long epoch = 0;
  double nll = 0.0;
  double kl = 0.0;
  double smooth = 0.0;
  double total = 0.0;
};

struct VaePretrainResult {
  VaeNets nets;
  std::vector<VaeCurveRow> curve;
};

inline std::vector<ParamSlice> vae_param_slices(VaeNets& n) {
  std::vector<ParamSlice> s = param_slices(n.q);
  for (ParamSlice& p : param_slices(n.pi)) s.push_back(p);
  if (!n.discrete)
    s.push_back({n.log_std.data(), n.g_log_std.data(), n.log_std.size()});
  return s;
}

// Minibatch Adam over the summed per-trajectory losses; temperature anneals
// per epoch. start_epoch > 0 continues a run (resume) with the schedule and
// curve indices picking up where they left off.
inline VaePretrainResult pretrain_vae(const Dataset& ds, const TrainConfig& cfg,
                                      Rng& rng, VaeNets* resume_from = nullptr,
                                      long start_epoch = 0) {
  if (ds.trajectories.empty()) throw std::invalid_argument("pretrain_vae: empty dataset");
  VaePretrainResult res;
  if (resume_from) {
    res.nets = *resume_from;
  } else {
    res.nets = make_vae_nets(ds.header.state_dim, ds.header.action_dim,
                             ds.header.discrete_actions, cfg.k, rng);
  }
  VaeNets& nets = res.nets;
  auto slices = vae_param_slices(nets);
  AdamState adam = adam_make(param_count(slices), cfg.vae_lr);
  const TemperatureSchedule sched{cfg.tau0, cfg.tau_decay, cfg.tau_floor};
  const int n = static_cast<int>(ds.trajectories.size());
  for (long epoch = start_epoch; epoch < cfg.vae_epochs; ++epoch) {
    const double tau = temperature(sched, epoch);
    const std::vector<int> perm = rng.permutation(n);
    VaeCurveRow row;
    row.epoch = epoch;
    for (int start = 0; start < n; start += cfg.vae_batch) {
      const int bn = std::min(cfg.vae_batch, n - start);
      for (int i = 0; i < bn; ++i) {
        const Trajectory& tr = ds.trajectories[perm[start + i]];
        const VaeLossParts parts = vae_loss_backward(nets, tr, tau, cfg.lambda_s, rng,
                                                     1.0 / bn);
        row.nll += parts.nll;
        row.kl += parts.kl;
        row.smooth += parts.smooth;
      }
      adam_step(adam, slices);
      if (!nets.discrete) clamp_log_std(nets.log_std);
    }
    row.nll /= n;
    row.kl /= n;
    row.smooth /= n;
    row.total = row.nll + row.kl + row.smooth;
    res.curve.push_back(row);
  }
  return res;
}

}  // namespace digail

#endif  // DIGAIL_VAE_HPP_
