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

#ifndef DIGAIL_ADAM_HPP_
#define DIGAIL_ADAM_HPP_

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "digail/mlp.hpp"

namespace digail {

// View of one contiguous parameter array and its gradient buffer.
struct ParamSlice {
  double* value;
  double* grad;
  std::size_t n;
};

inline std::vector<ParamSlice> param_slices(Mlp& m) {
  std::vector<ParamSlice> s;
  for (int l = 0; l < m.n_layers(); ++l) {
    s.push_back({m.w[l].data(), m.gw[l].data(), m.w[l].size()});
    s.push_back({m.b[l].data(), m.gb[l].data(), m.b[l].size()});
  }
  return s;
}

inline std::size_t param_count(const std::vector<ParamSlice>& slices) {
  std::size_t n = 0;
  for (const auto& s : slices) n += s.n;
  return n;
}

// Bias-corrected Adam over a fixed set of parameter slices. Consumes the
// gradients: they are zeroed after every step.
struct AdamState {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long step = 0;
  Vec m;
  Vec v;
};

inline AdamState adam_make(std::size_t n_params, double lr = 3e-4) {
  AdamState a;
  a.lr = lr;
  a.m.assign(n_params, 0.0);
  a.v.assign(n_params, 0.0);
  return a;
}

inline void adam_step(AdamState& a, const std::vector<ParamSlice>& slices) {
  if (param_count(slices) != a.m.size())
    throw std::invalid_argument("adam_step: parameter count mismatch");
  a.step += 1;
  const double bc1 = 1.0 - std::pow(a.beta1, static_cast<double>(a.step));
  const double bc2 = 1.0 - std::pow(a.beta2, static_cast<double>(a.step));
  std::size_t off = 0;
  for (const auto& s : slices) {
    for (std::size_t i = 0; i < s.n; ++i) {
      const double g = s.grad[i];
      double& m = a.m[off + i];
      double& v = a.v[off + i];
      m = a.beta1 * m + (1.0 - a.beta1) * g;
      v = a.beta2 * v + (1.0 - a.beta2) * g * g;
      s.value[i] -= a.lr * (m / bc1) / (std::sqrt(v / bc2) + a.eps);
      s.grad[i] = 0.0;
    }
    off += s.n;
  }
}

inline void adam_step(AdamState& a, Mlp& m) {
  auto s = param_slices(m);
  adam_step(a, s);
}

}  // namespace digail

#endif  // DIGAIL_ADAM_HPP_
