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

#ifndef DIGAIL_MLP_HPP_
#define DIGAIL_MLP_HPP_

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "digail/rng.hpp"

namespace digail {

// Dense network with ReLU hidden layers and a linear output layer.
// Weight matrix l has shape (sizes[l+1] x sizes[l]), stored row-major;
// gradient buffers mirror the parameter shapes and are accumulated into
// by mlp_backward until an optimizer step consumes them.
struct Mlp {
  std::vector<int> sizes;
  std::vector<Vec> w;
  std::vector<Vec> b;
  std::vector<Vec> gw;
  std::vector<Vec> gb;

  int in_dim() const { return sizes.front(); }
  int out_dim() const { return sizes.back(); }
  int n_layers() const { return static_cast<int>(sizes.size()) - 1; }
};

inline Mlp mlp_make(std::vector<int> sizes) {
  if (sizes.size() < 2) throw std::invalid_argument("mlp: need >= 2 layer sizes");
  for (int s : sizes)
    if (s <= 0) throw std::invalid_argument("mlp: layer sizes must be positive");
  Mlp m;
  m.sizes = std::move(sizes);
  const int L = m.n_layers();
  m.w.resize(L);
  m.b.resize(L);
  m.gw.resize(L);
  m.gb.resize(L);
  for (int l = 0; l < L; ++l) {
    const std::size_t rows = m.sizes[l + 1], cols = m.sizes[l];
    m.w[l].assign(rows * cols, 0.0);
    m.b[l].assign(rows, 0.0);
    m.gw[l].assign(rows * cols, 0.0);
    m.gb[l].assign(rows, 0.0);
  }
  return m;
}

namespace detail {

// Orthonormalizes vectors of length `len` laid out with stride `stride`
// starting at offsets 0..count-1 times `vec_stride`, via modified
// Gram-Schmidt. Degenerate directions are re-drawn from the rng.
inline void gram_schmidt(Vec& a, int count, int len, int vec_stride, int stride,
                         Rng& rng) {
  for (int i = 0; i < count; ++i) {
    double* vi = &a[static_cast<std::size_t>(i) * vec_stride];
    for (int j = 0; j < i; ++j) {
      const double* vj = &a[static_cast<std::size_t>(j) * vec_stride];
      double dot = 0.0;
      for (int k = 0; k < len; ++k) dot += vi[k * stride] * vj[k * stride];
      for (int k = 0; k < len; ++k) vi[k * stride] -= dot * vj[k * stride];
    }
    double norm = 0.0;
    for (int k = 0; k < len; ++k) norm += vi[k * stride] * vi[k * stride];
    norm = std::sqrt(norm);
    if (norm < 1e-12) {
      for (int k = 0; k < len; ++k) vi[k * stride] = rng.normal();
      i--;  // redraw and retry this vector
      continue;
    }
    for (int k = 0; k < len; ++k) vi[k * stride] /= norm;
  }
}

}  // namespace detail

// Orthogonal-style init: each weight matrix gets orthonormal rows (or
// columns, whichever fit), scaled by `hidden_gain` for hidden layers and
// `out_gain` for the output layer. Biases stay zero.
inline void mlp_init(Mlp& m, Rng& rng, double hidden_gain = std::sqrt(2.0),
                     double out_gain = 0.01) {
  const int L = m.n_layers();
  for (int l = 0; l < L; ++l) {
    const int rows = m.sizes[l + 1], cols = m.sizes[l];
    for (double& x : m.w[l]) x = rng.normal();
    if (rows <= cols)
      detail::gram_schmidt(m.w[l], rows, cols, cols, 1, rng);
    else
      detail::gram_schmidt(m.w[l], cols, rows, 1, cols, rng);
    const double gain = (l == L - 1) ? out_gain : hidden_gain;
    for (double& x : m.w[l]) x *= gain;
  }
}

inline void mlp_zero_grads(Mlp& m) {
  for (auto& g : m.gw) std::fill(g.begin(), g.end(), 0.0);
  for (auto& g : m.gb) std::fill(g.begin(), g.end(), 0.0);
}

inline Vec mlp_forward(const Mlp& m, const Vec& x) {
  if (static_cast<int>(x.size()) != m.in_dim())
    throw std::invalid_argument("mlp_forward: input has dimension " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(m.in_dim()));
  const int L = m.n_layers();
  Vec cur = x;
  Vec next;
  for (int l = 0; l < L; ++l) {
    const int rows = m.sizes[l + 1], cols = m.sizes[l];
    next.assign(rows, 0.0);
    const double* W = m.w[l].data();
    for (int r = 0; r < rows; ++r) {
      const double* wr = W + static_cast<std::size_t>(r) * cols;
      double acc = m.b[l][r];
      for (int c = 0; c < cols; ++c) acc += wr[c] * cur[c];
      next[r] = (l < L - 1 && acc < 0.0) ? 0.0 : acc;
    }
    cur.swap(next);
  }
  return cur;
}

// Accumulates scale * d(upstream . output)/dtheta into the gradient buffers
// and returns the input gradient (needed to chain through sampled latents).
// Recomputes the forward activations internally.
inline Vec mlp_backward(Mlp& m, const Vec& x, const Vec& upstream,
                        double scale = 1.0) {
  if (static_cast<int>(x.size()) != m.in_dim())
    throw std::invalid_argument("mlp_backward: input dimension mismatch");
  if (static_cast<int>(upstream.size()) != m.out_dim())
    throw std::invalid_argument("mlp_backward: upstream dimension mismatch");
  for (double u : upstream)
    if (!std::isfinite(u))
      throw std::invalid_argument("mlp_backward: non-finite upstream");

  const int L = m.n_layers();
  std::vector<Vec> act(L + 1);
  act[0] = x;
  for (int l = 0; l < L; ++l) {
    const int rows = m.sizes[l + 1], cols = m.sizes[l];
    act[l + 1].assign(rows, 0.0);
    const double* W = m.w[l].data();
    for (int r = 0; r < rows; ++r) {
      const double* wr = W + static_cast<std::size_t>(r) * cols;
      double acc = m.b[l][r];
      for (int c = 0; c < cols; ++c) acc += wr[c] * act[l][c];
      act[l + 1][r] = (l < L - 1 && acc < 0.0) ? 0.0 : acc;
    }
  }

  Vec delta = upstream;
  for (int l = L - 1; l >= 0; --l) {
    const int rows = m.sizes[l + 1], cols = m.sizes[l];
    if (l < L - 1) {
      // ReLU: zero activations carry no gradient.
      for (int r = 0; r < rows; ++r)
        if (act[l + 1][r] <= 0.0) delta[r] = 0.0;
    }
    double* GW = m.gw[l].data();
    const double* in = act[l].data();
    for (int r = 0; r < rows; ++r) {
      const double dr = scale * delta[r];
      if (dr == 0.0) continue;
      double* gr = GW + static_cast<std::size_t>(r) * cols;
      for (int c = 0; c < cols; ++c) gr[c] += dr * in[c];
      m.gb[l][r] += dr;
    }
    Vec prev(cols, 0.0);
    const double* W = m.w[l].data();
    for (int r = 0; r < rows; ++r) {
      const double dr = delta[r];
      if (dr == 0.0) continue;
      const double* wr = W + static_cast<std::size_t>(r) * cols;
      for (int c = 0; c < cols; ++c) prev[c] += dr * wr[c];
    }
    delta.swap(prev);
  }
  if (scale != 1.0)
    for (double& d : delta) d *= scale;
  return delta;
}

}  // namespace digail

#endif  // DIGAIL_MLP_HPP_
