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

#ifndef DIGAIL_RNG_HPP_
#define DIGAIL_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace digail {

using Vec = std::vector<double>;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic random stream. Draws are produced by explicit arithmetic on
// raw mt19937_64 output so that sequences are identical across standard
// library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(splitmix64(seed)) {}

  std::uint64_t seed() const { return seed_; }

  // Child stream derived from (seed, stream index); independent of draw state.
  Rng fork(std::uint64_t stream) const {
    return Rng(splitmix64(seed_ ^ splitmix64(stream + 1)));
  }

  std::uint64_t bits() { return gen_(); }

  // Uniform on (0, 1): 53-bit mantissa, zero mapped up to 2^-53.
  double uniform() {
    const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    return u > 0.0 ? u : 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller, cosine branch only.
  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  double gumbel() { return -std::log(-std::log(uniform())); }

  // Unbiased integer in [0, n).
  int below(int n) {
    const std::uint64_t nn = static_cast<std::uint64_t>(n);
    const std::uint64_t lim = UINT64_MAX - UINT64_MAX % nn;
    std::uint64_t r;
    do {
      r = gen_();
    } while (r >= lim);
    return static_cast<int>(r % nn);
  }

  std::vector<int> permutation(int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    for (int i = n - 1; i > 0; --i) std::swap(p[i], p[below(i + 1)]);
    return p;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace digail

#endif  // DIGAIL_RNG_HPP_
