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

#ifndef DIGAIL_CATEGORICAL_HPP_
#define DIGAIL_CATEGORICAL_HPP_

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "digail/rng.hpp"

namespace digail {

inline int argmax(const Vec& v) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(v.size()); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

inline Vec one_hot(int k, int n) {
  Vec v(n, 0.0);
  v[k] = 1.0;
  return v;
}

// Log-probabilities, stabilized by max subtraction.
inline Vec softmax_logprobs(const Vec& logits) {
  if (logits.empty()) throw std::invalid_argument("softmax: empty logits");
  double mx = logits[0];
  for (double z : logits) {
    if (!std::isfinite(z)) throw std::invalid_argument("softmax: non-finite logit");
    if (z > mx) mx = z;
  }
  double sum = 0.0;
  for (double z : logits) sum += std::exp(z - mx);
  const double lse = mx + std::log(sum);
  Vec lp(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) lp[i] = logits[i] - lse;
  return lp;
}

inline Vec softmax(const Vec& logits) {
  Vec p = softmax_logprobs(logits);
  for (double& x : p) x = std::exp(x);
  return p;
}

inline double entropy(const Vec& p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log(x);
  return h;
}

// KL(q || p) in nats, with 0 log 0 := 0. A zero in p where q has mass is an
// out-of-support event and yields +infinity.
inline double categorical_kl(const Vec& q, const Vec& p) {
  if (q.size() != p.size())
    throw std::invalid_argument("categorical_kl: size mismatch");
  double kl = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] <= 0.0) continue;
    if (p[i] <= 0.0) return std::numeric_limits<double>::infinity();
    kl += q[i] * std::log(q[i] / p[i]);
  }
  return kl < 0.0 ? 0.0 : kl;
}

inline int sample_from_logits(const Vec& logits, Rng& rng) {
  Vec p = softmax(logits);
  double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    if (u <= acc) return static_cast<int>(i);
  }
  return static_cast<int>(p.size()) - 1;
}

// tau(t) = max(floor, tau0 * exp(-decay * t)), annealed per epoch.
struct TemperatureSchedule {
  double tau0 = 5.0;
  double decay = 3e-3;
  double floor = 0.1;
};

inline double temperature(const TemperatureSchedule& s, long epoch) {
  if (epoch < 0) throw std::invalid_argument("temperature: negative epoch");
  const double t = s.tau0 * std::exp(-s.decay * static_cast<double>(epoch));
  return t > s.floor ? t : s.floor;
}

// Relaxed one-hot from pre-drawn Gumbel noise: softmax((logits + g) / tau).
inline Vec gumbel_softmax(const Vec& logits, const Vec& gumbels, double tau) {
  if (tau <= 0.0) throw std::invalid_argument("gumbel_softmax: tau must be > 0");
  if (logits.size() != gumbels.size())
    throw std::invalid_argument("gumbel_softmax: noise size mismatch");
  Vec z(logits.size());
  for (std::size_t i = 0; i < z.size(); ++i)
    z[i] = (logits[i] + gumbels[i]) / tau;
  return softmax(z);
}

inline Vec gumbel_noise(std::size_t n, Rng& rng) {
  Vec g(n);
  for (double& x : g) x = rng.gumbel();
  return g;
}

inline Vec gumbel_softmax_sample(const Vec& logits, double tau, Rng& rng) {
  return gumbel_softmax(logits, gumbel_noise(logits.size(), rng), tau);
}

// d(upstream . y)/d(logits) for y = softmax((logits + g) / tau).
inline Vec gumbel_softmax_backward(const Vec& y, double tau, const Vec& upstream) {
  if (y.size() != upstream.size())
    throw std::invalid_argument("gumbel_softmax_backward: size mismatch");
  double dot = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) dot += y[i] * upstream[i];
  Vec g(y.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    g[i] = y[i] * (upstream[i] - dot) / tau;
  return g;
}

// Exact one-hot at the argmax of a relaxed sample.
inline Vec harden(const Vec& soft) {
  return one_hot(argmax(soft), static_cast<int>(soft.size()));
}

}  // namespace digail

#endif  // DIGAIL_CATEGORICAL_HPP_
