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

#ifndef DIGAIL_INFO_ORACLE_HPP_
#define DIGAIL_INFO_ORACLE_HPP_

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "digail/rng.hpp"

namespace digail {

// Explicit joint distribution over short chains (tau_1..tau_T, c_1..c_T)
// factored causally:
//
//   p(tau, c) = prod_t p(tau_t | tau_{1:t-1}, c_{1:t-1})
//                    * p(c_t   | c_{1:t-1}, tau_{1:t})
//
// Everything here works in nats by exhaustive enumeration; alphabets are
// tiny (n^T <= a few thousand outcomes) so exactness is cheap.
//
// Table layout. A length-k history over alphabet n is identified by its
// positional id (first symbol most significant): id = ((x_1*n + x_2)*n + ...).
// For step t (0-based):
//   p_tau[t]: row index = tau_hist_id(t) * n_c^t + c_hist_id(t), row = dist over tau_t
//   p_c[t]:   row index = c_hist_id(t) * n_tau^(t+1) + tau_hist_id(t+1), row = dist over c_t
struct DiscreteChainModel {
  int T = 1;
  int n_tau = 2;
  int n_c = 2;
  std::vector<Vec> p_tau;  // p_tau[t] has n_tau^t * n_c^t rows of length n_tau
  std::vector<Vec> p_c;    // p_c[t] has n_c^t * n_tau^(t+1) rows of length n_c
};

// Per-step conditional tables q(c_t | c_{1:t-1}, tau_{1:t}), same row
// convention as DiscreteChainModel::p_c.
struct ApproximatePosterior {
  int T = 1;
  int n_tau = 2;
  int n_c = 2;
  std::vector<Vec> q;
  // Rows whose conditioning event has probability zero in the generating
  // model; filled uniform by true_posterior and flagged here.
  std::vector<std::vector<char>> unreachable;
};

inline long ipow(int base, int exp) {
  long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

inline void validate_chain_model(const DiscreteChainModel& m) {
  if (m.T < 1 || m.T > 4) throw std::invalid_argument("chain model: T must be in [1,4]");
  if (m.n_tau < 1 || m.n_tau > 3 || m.n_c < 1 || m.n_c > 3)
    throw std::invalid_argument("chain model: alphabet sizes must be in [1,3]");
  if (static_cast<int>(m.p_tau.size()) != m.T || static_cast<int>(m.p_c.size()) != m.T)
    throw std::invalid_argument("chain model: need one table per step");
  for (int t = 0; t < m.T; ++t) {
    const long rows_tau = ipow(m.n_tau, t) * ipow(m.n_c, t);
    const long rows_c = ipow(m.n_c, t) * ipow(m.n_tau, t + 1);
    if (static_cast<long>(m.p_tau[t].size()) != rows_tau * m.n_tau)
      throw std::invalid_argument("chain model: p_tau table size mismatch");
    if (static_cast<long>(m.p_c[t].size()) != rows_c * m.n_c)
      throw std::invalid_argument("chain model: p_c table size mismatch");
    for (long r = 0; r < rows_tau; ++r) {
      double s = 0.0;
      for (int k = 0; k < m.n_tau; ++k) {
        const double v = m.p_tau[t][r * m.n_tau + k];
        if (v < 0.0) throw std::invalid_argument("chain model: negative probability");
        s += v;
      }
      if (std::fabs(s - 1.0) > 1e-12)
        throw std::invalid_argument("chain model: p_tau row does not sum to 1");
    }
    for (long r = 0; r < rows_c; ++r) {
      double s = 0.0;
      for (int k = 0; k < m.n_c; ++k) {
        const double v = m.p_c[t][r * m.n_c + k];
        if (v < 0.0) throw std::invalid_argument("chain model: negative probability");
        s += v;
      }
      if (std::fabs(s - 1.0) > 1e-12)
        throw std::invalid_argument("chain model: p_c row does not sum to 1");
    }
  }
}

namespace detail {

// Positional id of the first `len` symbols of `seq` over alphabet n.
inline long prefix_id(const std::vector<int>& seq, int len, int n) {
  long id = 0;
  for (int i = 0; i < len; ++i) id = id * n + seq[i];
  return id;
}

inline double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

// Full joint as a dense matrix joint[tau_id][c_id], tau_id over n_tau^T.
inline std::vector<Vec> enumerate_joint(const DiscreteChainModel& m) {
  const long n_tau_seq = ipow(m.n_tau, m.T), n_c_seq = ipow(m.n_c, m.T);
  std::vector<Vec> joint(n_tau_seq, Vec(n_c_seq, 0.0));
  std::vector<int> tau(m.T), c(m.T);
  for (long ti = 0; ti < n_tau_seq; ++ti) {
    long rem = ti;
    for (int i = m.T - 1; i >= 0; --i) {
      tau[i] = static_cast<int>(rem % m.n_tau);
      rem /= m.n_tau;
    }
    for (long ci = 0; ci < n_c_seq; ++ci) {
      rem = ci;
      for (int i = m.T - 1; i >= 0; --i) {
        c[i] = static_cast<int>(rem % m.n_c);
        rem /= m.n_c;
      }
      double p = 1.0;
      for (int t = 0; t < m.T && p > 0.0; ++t) {
        const long row_tau = prefix_id(tau, t, m.n_tau) * ipow(m.n_c, t) +
                             prefix_id(c, t, m.n_c);
        p *= m.p_tau[t][row_tau * m.n_tau + tau[t]];
        const long row_c = prefix_id(c, t, m.n_c) * ipow(m.n_tau, t + 1) +
                           prefix_id(tau, t + 1, m.n_tau);
        p *= m.p_c[t][row_c * m.n_c + c[t]];
      }
      joint[ti][ci] = p;
    }
  }
  return joint;
}

// Marginal over the c sequence.
inline Vec c_marginal(const std::vector<Vec>& joint) {
  Vec pc(joint[0].size(), 0.0);
  for (const Vec& row : joint)
    for (std::size_t ci = 0; ci < row.size(); ++ci) pc[ci] += row[ci];
  return pc;
}

// Weight of every (c_{1:t-1}, tau_{1:t}) conditioning event of p_c[t]:
// out[t][row] = p(c_{1:t-1}, tau_{1:t}), rows in the p_c layout.
inline std::vector<Vec> context_weights(const DiscreteChainModel& m) {
  std::vector<Vec> out(m.T);
  // Forward prefix distribution over (tau_{1:t}, c_{1:t}).
  Vec prefix(1, 1.0);  // t = 0: empty history
  for (int t = 0; t < m.T; ++t) {
    const long n_tau_hist = ipow(m.n_tau, t), n_c_hist = ipow(m.n_c, t);
    out[t].assign(ipow(m.n_c, t) * ipow(m.n_tau, t + 1), 0.0);
    Vec next(n_tau_hist * m.n_tau * n_c_hist * m.n_c, 0.0);
    for (long th = 0; th < n_tau_hist; ++th) {
      for (long ch = 0; ch < n_c_hist; ++ch) {
        const double w = prefix[th * n_c_hist + ch];
        if (w == 0.0) continue;
        const long row_tau = th * n_c_hist + ch;
        for (int k = 0; k < m.n_tau; ++k) {
          const double w_tau = w * m.p_tau[t][row_tau * m.n_tau + k];
          if (w_tau == 0.0) continue;
          const long th2 = th * m.n_tau + k;
          const long row_c = ch * (n_tau_hist * m.n_tau) + th2;
          out[t][row_c] += w_tau;
          for (int kc = 0; kc < m.n_c; ++kc) {
            const double w_c = w_tau * m.p_c[t][row_c * m.n_c + kc];
            if (w_c == 0.0) continue;
            next[th2 * (n_c_hist * m.n_c) + (ch * m.n_c + kc)] += w_c;
          }
        }
      }
    }
    prefix.swap(next);
  }
  return out;
}

}  // namespace detail

// I(tau; c) over full sequences, by direct enumeration of the joint.
inline double exact_mutual_information(const DiscreteChainModel& m) {
  validate_chain_model(m);
  const std::vector<Vec> joint = detail::enumerate_joint(m);
  Vec p_tau(joint.size(), 0.0);
  Vec p_c = detail::c_marginal(joint);
  for (std::size_t ti = 0; ti < joint.size(); ++ti)
    for (double v : joint[ti]) p_tau[ti] += v;
  double mi = 0.0;
  for (std::size_t ti = 0; ti < joint.size(); ++ti)
    for (std::size_t ci = 0; ci < p_c.size(); ++ci) {
      const double p = joint[ti][ci];
      if (p > 0.0) mi += p * std::log(p / (p_tau[ti] * p_c[ci]));
    }
  return mi;
}

// Entropy of the c-sequence marginal, H(c).
inline double exact_latent_entropy(const DiscreteChainModel& m) {
  validate_chain_model(m);
  const Vec p_c = detail::c_marginal(detail::enumerate_joint(m));
  double h = 0.0;
  for (double p : p_c) h -= detail::xlogx(p);
  return h;
}

// I(tau -> c) = H(c) - sum_t H(c_t | c_{1:t-1}, tau_{1:t}).
inline double exact_directed_information(const DiscreteChainModel& m) {
  validate_chain_model(m);
  const std::vector<Vec> ctx = detail::context_weights(m);
  double causal_entropy = 0.0;
  for (int t = 0; t < m.T; ++t) {
    for (std::size_t row = 0; row < ctx[t].size(); ++row) {
      const double w = ctx[t][row];
      if (w == 0.0) continue;
      double h = 0.0;
      for (int k = 0; k < m.n_c; ++k) h -= detail::xlogx(m.p_c[t][row * m.n_c + k]);
      causal_entropy += w * h;
    }
  }
  return exact_latent_entropy(m) - causal_entropy;
}

// Variational lower bound on the directed information:
//   L1 = H(c) + sum_t E_{p(c_{1:t-1}, tau_{1:t})}
//                 [ sum_{c_t} p(c_t | past) log q(c_t | past) ].
// Returns -infinity when q puts zero mass where the reachable true
// posterior has mass.
inline double exact_variational_bound(const DiscreteChainModel& m,
                                      const ApproximatePosterior& q) {
  validate_chain_model(m);
  if (q.T != m.T || q.n_tau != m.n_tau || q.n_c != m.n_c)
    throw std::invalid_argument("variational bound: posterior shape mismatch");
  const std::vector<Vec> ctx = detail::context_weights(m);
  double cross = 0.0;
  for (int t = 0; t < m.T; ++t) {
    if (q.q[t].size() != m.p_c[t].size())
      throw std::invalid_argument("variational bound: posterior table size mismatch");
    for (std::size_t row = 0; row < ctx[t].size(); ++row) {
      const double w = ctx[t][row];
      if (w == 0.0) continue;
      for (int k = 0; k < m.n_c; ++k) {
        const double p = m.p_c[t][row * m.n_c + k];
        if (p == 0.0) continue;
        const double qv = q.q[t][row * m.n_c + k];
        if (qv <= 0.0) return -std::numeric_limits<double>::infinity();
        cross += w * p * std::log(qv);
      }
    }
  }
  return exact_latent_entropy(m) + cross;
}

// The exact posterior p(c_t | c_{1:t-1}, tau_{1:t}) of the model. Under the
// causal factorization this is the model's own conditional table; rows whose
// conditioning event never occurs are filled uniform and flagged.
inline ApproximatePosterior true_posterior(const DiscreteChainModel& m) {
  validate_chain_model(m);
  const std::vector<Vec> ctx = detail::context_weights(m);
  ApproximatePosterior post;
  post.T = m.T;
  post.n_tau = m.n_tau;
  post.n_c = m.n_c;
  post.q.resize(m.T);
  post.unreachable.resize(m.T);
  for (int t = 0; t < m.T; ++t) {
    post.q[t] = m.p_c[t];
    post.unreachable[t].assign(ctx[t].size(), 0);
    for (std::size_t row = 0; row < ctx[t].size(); ++row) {
      if (ctx[t][row] == 0.0) {
        post.unreachable[t][row] = 1;
        for (int k = 0; k < m.n_c; ++k)
          post.q[t][row * m.n_c + k] = 1.0 / m.n_c;
      }
    }
  }
  return post;
}

// Random model with Dirichlet-like rows (normalized exponentials). With
// feedback off, p(tau_t | .) ignores the c history, which makes
// I(tau -> c) = I(tau; c) exactly.
inline DiscreteChainModel random_chain_model(int T, int n_tau, int n_c, Rng& rng,
                                             bool feedback = true) {
  DiscreteChainModel m;
  m.T = T;
  m.n_tau = n_tau;
  m.n_c = n_c;
  m.p_tau.resize(T);
  m.p_c.resize(T);
  auto fill_row = [&](double* row, int n) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
      row[k] = std::exp(rng.normal());
      s += row[k];
    }
    double acc = 0.0;
    for (int k = 0; k < n - 1; ++k) {
      row[k] /= s;
      acc += row[k];
    }
    row[n - 1] = 1.0 - acc;  // exact row sum for the validator
  };
  for (int t = 0; t < T; ++t) {
    const long rows_tau = ipow(n_tau, t) * ipow(n_c, t);
    const long rows_c = ipow(n_c, t) * ipow(n_tau, t + 1);
    m.p_tau[t].assign(rows_tau * n_tau, 0.0);
    m.p_c[t].assign(rows_c * n_c, 0.0);
    if (feedback) {
      for (long r = 0; r < rows_tau; ++r) fill_row(&m.p_tau[t][r * n_tau], n_tau);
    } else {
      // One distribution per tau history, copied across all c histories.
      const long n_tau_hist = ipow(n_tau, t), n_c_hist = ipow(n_c, t);
      for (long th = 0; th < n_tau_hist; ++th) {
        Vec row(n_tau);
        fill_row(row.data(), n_tau);
        for (long ch = 0; ch < n_c_hist; ++ch)
          for (int k = 0; k < n_tau; ++k)
            m.p_tau[t][(th * n_c_hist + ch) * n_tau + k] = row[k];
      }
    }
    for (long r = 0; r < rows_c; ++r) fill_row(&m.p_c[t][r * n_c], n_c);
  }
  return m;
}

inline ApproximatePosterior random_posterior(const DiscreteChainModel& m, Rng& rng) {
  ApproximatePosterior q;
  q.T = m.T;
  q.n_tau = m.n_tau;
  q.n_c = m.n_c;
  q.q.resize(m.T);
  for (int t = 0; t < m.T; ++t) {
    q.q[t].assign(m.p_c[t].size(), 0.0);
    const long rows = static_cast<long>(m.p_c[t].size()) / m.n_c;
    for (long r = 0; r < rows; ++r) {
      double s = 0.0;
      for (int k = 0; k < m.n_c; ++k) {
        q.q[t][r * m.n_c + k] = std::exp(rng.normal());
        s += q.q[t][r * m.n_c + k];
      }
      for (int k = 0; k < m.n_c; ++k) q.q[t][r * m.n_c + k] /= s;
    }
  }
  return q;
}

}  // namespace digail

#endif  // DIGAIL_INFO_ORACLE_HPP_
