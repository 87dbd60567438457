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

#ifndef DIGAIL_EVALUATION_HPP_
#define DIGAIL_EVALUATION_HPP_

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <thread>
#include <vector>

#include "digail/categorical.hpp"
#include "digail/digail.hpp"
#include "digail/env.hpp"
#include "digail/envs.hpp"
#include "digail/four_rooms.hpp"
#include "digail/trajectory.hpp"
#include "digail/vae.hpp"

namespace digail {

// Most-likely action: argmax index for discrete policies, the mean for
// continuous ones.
inline Vec mode_action(const Mlp& pi, bool discrete, const Vec& input) {
  const Vec out = mlp_forward(pi, input);
  if (discrete) return Vec{static_cast<double>(argmax(out))};
  return out;
}

// Hardened codes from the frozen encoder along a recorded trajectory.
inline std::vector<int> segment_trajectory(const Mlp& q, int k, const Trajectory& tr) {
  std::vector<int> codes(tr.length());
  Vec c_prev(k, 0.0);
  for (int t = 0; t < tr.length(); ++t) {
    codes[t] = argmax(mlp_forward(q, concat(tr.steps[t].state, c_prev)));
    c_prev = one_hot(codes[t], k);
  }
  return codes;
}

inline int switch_count(const std::vector<int>& codes) {
  int n = 0;
  for (std::size_t t = 1; t < codes.size(); ++t)
    if (codes[t] != codes[t - 1]) n += 1;
  return n;
}

namespace detail {

inline long best_injective_agreement(const std::vector<std::vector<long>>& count,
                                     std::vector<char>& used, int truth_label) {
  const int m = static_cast<int>(count.size());
  const int k = static_cast<int>(count[0].size());
  if (truth_label == m) return 0;
  long best = -1;
  for (int j = 0; j < k; ++j) {
    if (used[j]) continue;
    used[j] = 1;
    const long rest = best_injective_agreement(count, used, truth_label + 1);
    used[j] = 0;
    if (rest >= 0) best = std::max(best, count[truth_label][j] + rest);
  }
  return best;
}

}  // namespace detail

// Per-step agreement maximized over injective maps from truth labels into
// predicted labels. k = 0 infers the predicted alphabet from the data;
// exhaustive search, so the predicted alphabet is capped at 8.
inline double label_matched_accuracy(const std::vector<int>& pred,
                                     const std::vector<int>& truth, int k = 0) {
  if (pred.size() != truth.size() || pred.empty())
    throw std::invalid_argument("label_matched_accuracy: length mismatch");
  int m = 0;
  for (int v : truth) {
    if (v < 0) throw std::invalid_argument("label_matched_accuracy: negative label");
    m = std::max(m, v + 1);
  }
  for (int v : pred) {
    if (v < 0) throw std::invalid_argument("label_matched_accuracy: negative label");
    k = std::max(k, v + 1);
  }
  if (k < m)
    throw std::invalid_argument("label_matched_accuracy: predicted alphabet smaller than truth");
  if (k > 8)
    throw std::invalid_argument("label_matched_accuracy: predicted alphabet larger than 8");
  std::vector<std::vector<long>> count(m, std::vector<long>(k, 0));
  for (std::size_t t = 0; t < pred.size(); ++t) count[truth[t]][pred[t]] += 1;
  std::vector<char> used(k, 0);
  const long best = detail::best_injective_agreement(count, used, 0);
  return static_cast<double>(best) / static_cast<double>(pred.size());
}

struct SegmentationReport {
  std::vector<std::vector<int>> codes;  // hardened, one sequence per trajectory
  std::vector<int> switch_counts;
  std::vector<long> usage;  // per-code step counts, sums to total steps
  bool has_accuracy = false;
  double accuracy = 0.0;
};

// Segments every trajectory; the accuracy (present only when every
// trajectory carries phase labels) uses one injective map for the whole
// dataset, fitted on the concatenated sequences.
inline SegmentationReport segment_dataset(const Mlp& q, int k, const Dataset& ds) {
  SegmentationReport rep;
  rep.usage.assign(k, 0);
  std::vector<int> all_pred, all_truth;
  bool all_labeled = !ds.trajectories.empty();
  for (const Trajectory& tr : ds.trajectories) {
    rep.codes.push_back(segment_trajectory(q, k, tr));
    rep.switch_counts.push_back(switch_count(rep.codes.back()));
    for (int c : rep.codes.back()) rep.usage[c] += 1;
    if (tr.has_phases()) {
      all_pred.insert(all_pred.end(), rep.codes.back().begin(), rep.codes.back().end());
      all_truth.insert(all_truth.end(), tr.phases.begin(), tr.phases.end());
    } else {
      all_labeled = false;
    }
  }
  if (all_labeled) {
    rep.has_accuracy = true;
    rep.accuracy = label_matched_accuracy(all_pred, all_truth, k);
  }
  return rep;
}

// One greedy-action episode. Codes come from the frozen encoder in
// online-posterior mode (q != nullptr); the hardened code indices land in
// the returned trajectory's phases.
inline Trajectory rollout_episode(const Mlp& pi, const Mlp* q, int k, bool discrete,
                                  Env& env, Rng& rng) {
  Trajectory tr;
  tr.env_id = env.spec().id;
  Vec s = env.reset(rng);
  Vec c_prev(k, 0.0);
  for (int t = 0; t < env.spec().episode_cap; ++t) {
    Vec c;
    int c_idx = -1;
    if (q && k > 0) {
      c_idx = argmax(mlp_forward(*q, concat(s, c_prev)));
      c = one_hot(c_idx, k);
    }
    const Vec a = mode_action(pi, discrete, concat(s, c));
    const EnvStep es = env.step(a);
    tr.steps.push_back({s, a, es.reward});
    if (c_idx >= 0) tr.phases.push_back(c_idx);
    if (es.done) break;
    c_prev = c;
    s = es.state;
  }
  return tr;
}

struct ReturnStats {
  double mean = 0.0;
  double std_dev = 0.0;
  int n_episodes = 0;
};

inline double trajectory_return(const Trajectory& tr) {
  double r = 0.0;
  for (const Step& s : tr.steps) r += s.reward;
  return r;
}

// Undiscounted return statistics over n_episodes greedy rollouts. Episode i
// draws from root.fork(i), so the aggregate is order-insensitive and
// worker-count-independent.
inline ReturnStats evaluate_returns(const Mlp& pi, const Mlp* q, int k, bool discrete,
                                    Env& env, int n_episodes, const Rng& root) {
  if (n_episodes < 1)
    throw std::invalid_argument("evaluate_returns: n_episodes must be >= 1");
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n_episodes; ++i) {
    Rng ep = root.fork(static_cast<std::uint64_t>(i));
    const double r = trajectory_return(rollout_episode(pi, q, k, discrete, env, ep));
    sum += r;
    sumsq += r * r;
  }
  ReturnStats st;
  st.n_episodes = n_episodes;
  st.mean = sum / n_episodes;
  const double var = sumsq / n_episodes - st.mean * st.mean;
  st.std_dev = std::sqrt(var > 0.0 ? var : 0.0);
  return st;
}

// Same statistics with episodes fanned out over worker threads. Episode i
// always draws from root.fork(i) on a worker-private env, and the partial
// sums combine in worker-index order, so any worker count with the same
// root seed agrees with the serial path up to summation order.
inline ReturnStats evaluate_returns_parallel(const Mlp& pi, const Mlp* q, int k,
                                             bool discrete, const std::string& env_id,
                                             int n_episodes, const Rng& root,
                                             int workers) {
  if (n_episodes < 1)
    throw std::invalid_argument("evaluate_returns_parallel: n_episodes must be >= 1");
  workers = std::max(1, std::min(workers, n_episodes));
  std::vector<double> sums(workers, 0.0), sumsqs(workers, 0.0);
  auto run = [&](int w) {
    const std::unique_ptr<Env> env = make_env(env_id);
    for (int i = w; i < n_episodes; i += workers) {
      Rng ep = root.fork(static_cast<std::uint64_t>(i));
      const double r = trajectory_return(rollout_episode(pi, q, k, discrete, *env, ep));
      sums[w] += r;
      sumsqs[w] += r * r;
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(run, w);
    for (std::thread& t : threads) t.join();
  }
  double sum = 0.0, sumsq = 0.0;
  for (int w = 0; w < workers; ++w) {
    sum += sums[w];
    sumsq += sumsqs[w];
  }
  ReturnStats st;
  st.n_episodes = n_episodes;
  st.mean = sum / n_episodes;
  const double var = sumsq / n_episodes - st.mean * st.mean;
  st.std_dev = std::sqrt(var > 0.0 ? var : 0.0);
  return st;
}

// Rolls out the policy under an externally supplied code schedule, ignoring
// the encoder. Stops at episode end, the env cap, or schedule exhaustion.
inline Trajectory compose_with_schedule(const Mlp& pi, bool discrete, int k,
                                        const std::vector<int>& schedule, Env& env,
                                        Rng& rng) {
  if (schedule.empty())
    throw std::invalid_argument("compose_with_schedule: empty schedule");
  Trajectory tr;
  tr.env_id = env.spec().id;
  Vec s = env.reset(rng);
  const int horizon =
      std::min(env.spec().episode_cap, static_cast<int>(schedule.size()));
  for (int t = 0; t < horizon; ++t) {
    const Vec c = one_hot(schedule[t], k);
    const Vec a = mode_action(pi, discrete, concat(s, c));
    const EnvStep es = env.step(a);
    tr.steps.push_back({s, a, es.reward});
    tr.phases.push_back(schedule[t]);
    if (es.done) break;
    s = es.state;
  }
  return tr;
}

// Cross products of consecutive displacement pairs of a planar path; the
// sign gives the local turn direction.
inline std::vector<double> displacement_crosses(const std::vector<Vec>& points) {
  if (points.size() < 3)
    throw std::invalid_argument("displacement_crosses: need at least 3 points");
  std::vector<double> out;
  for (std::size_t i = 2; i < points.size(); ++i) {
    const double ax = points[i - 1][0] - points[i - 2][0];
    const double ay = points[i - 1][1] - points[i - 2][1];
    const double bx = points[i][0] - points[i - 1][0];
    const double by = points[i][1] - points[i - 1][1];
    out.push_back(ax * by - ay * bx);
  }
  return out;
}

inline std::vector<Vec> trajectory_points(const Trajectory& tr) {
  std::vector<Vec> pts;
  for (const Step& s : tr.steps) pts.push_back(s.state);
  return pts;
}

struct PcaProjection {
  Vec mean;
  std::vector<Vec> components;  // orthonormal rows, strongest first
  Vec explained;                // variance ratios, non-increasing
  std::vector<Vec> points;      // projected coordinates
  std::vector<int> labels;
  bool rank_deficient = false;
};

namespace detail {

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Returns
// (eigenvalues, eigenvectors as rows), sorted by descending eigenvalue.
inline void symmetric_eigen(std::vector<Vec> a, Vec& eigvals,
                            std::vector<Vec>& eigvecs) {
  const int n = static_cast<int>(a.size());
  eigvecs.assign(n, Vec(n, 0.0));
  for (int i = 0; i < n; ++i) eigvecs[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-24) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int i = 0; i < n; ++i) {
          const double aip = a[i][p], aiq = a[i][q];
          a[i][p] = c * aip - s * aiq;
          a[i][q] = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          const double api = a[p][i], aqi = a[q][i];
          a[p][i] = c * api - s * aqi;
          a[q][i] = s * api + c * aqi;
        }
        for (int i = 0; i < n; ++i) {
          const double vpi = eigvecs[p][i], vqi = eigvecs[q][i];
          eigvecs[p][i] = c * vpi - s * vqi;
          eigvecs[q][i] = s * vpi + c * vqi;
        }
      }
    }
  }
  eigvals.resize(n);
  for (int i = 0; i < n; ++i) eigvals[i] = a[i][i];
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return eigvals[i] > eigvals[j]; });
  Vec ev(n);
  std::vector<Vec> vecs(n);
  for (int i = 0; i < n; ++i) {
    ev[i] = eigvals[order[i]];
    vecs[i] = eigvecs[order[i]];
  }
  eigvals = ev;
  eigvecs = vecs;
}

}  // namespace detail

// Sample-covariance PCA. Components with eigenvalue below 1e-12 of the
// leading one are dropped and the projection flagged rank-deficient.
inline PcaProjection pca_project(const std::vector<Vec>& states,
                                 const std::vector<int>& codes, int d) {
  if (d < 1) throw std::invalid_argument("pca_project: d must be >= 1");
  if (states.size() != codes.size())
    throw std::invalid_argument("pca_project: states/codes length mismatch");
  const std::set<Vec> distinct(states.begin(), states.end());
  if (static_cast<int>(distinct.size()) < d + 1)
    throw std::invalid_argument("pca_project: need at least d+1 distinct states");
  const int n = static_cast<int>(states.size());
  const int dim = static_cast<int>(states[0].size());
  PcaProjection proj;
  proj.mean.assign(dim, 0.0);
  for (const Vec& s : states)
    for (int j = 0; j < dim; ++j) proj.mean[j] += s[j] / n;
  std::vector<Vec> cov(dim, Vec(dim, 0.0));
  for (const Vec& s : states)
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j)
        cov[i][j] += (s[i] - proj.mean[i]) * (s[j] - proj.mean[j]) / n;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < i; ++j) cov[i][j] = cov[j][i];

  Vec eigvals;
  std::vector<Vec> eigvecs;
  detail::symmetric_eigen(cov, eigvals, eigvecs);
  double total = 0.0;
  for (double v : eigvals) total += v > 0.0 ? v : 0.0;
  const double cutoff = 1e-12 * (eigvals.empty() || eigvals[0] < 0.0 ? 0.0 : eigvals[0]);
  const int want = std::min(d, dim);
  proj.rank_deficient = want < d;
  for (int i = 0; i < want; ++i) {
    if (eigvals[i] <= cutoff) {
      proj.rank_deficient = true;
      break;
    }
    proj.components.push_back(eigvecs[i]);
    proj.explained.push_back(total > 0.0 ? eigvals[i] / total : 0.0);
  }
  const int kept = static_cast<int>(proj.components.size());
  for (const Vec& s : states) {
    Vec p(kept, 0.0);
    for (int i = 0; i < kept; ++i)
      for (int j = 0; j < dim; ++j) p[i] += proj.components[i][j] * (s[j] - proj.mean[j]);
    proj.points.push_back(p);
  }
  proj.labels = codes;
  return proj;
}

// Greedy action table per grid cell for one latent code: entry is the
// argmax action, or -1 on walls. The apple cell is held fixed so maps for
// different codes are comparable.
inline std::vector<int> fourrooms_action_map(const Mlp& pi, int k, int code, int apple,
                                             bool compact = false) {
  std::vector<int> map(FourRoomsMap::kCells, -1);
  const Vec c = k > 0 ? one_hot(code, k) : Vec{};
  for (int r = 0; r < FourRoomsMap::kHeight; ++r) {
    for (int col = 0; col < FourRoomsMap::kWidth; ++col) {
      if (FourRoomsMap::is_wall(r, col)) continue;
      const int cell = FourRoomsMap::cell(r, col);
      const Vec obs = fourrooms_obs(cell, apple, compact);
      map[cell] = argmax(mlp_forward(pi, concat(obs, c)));
    }
  }
  return map;
}

// Fraction of non-wall cells on which two action maps disagree.
inline double action_map_disagreement(const std::vector<int>& a,
                                      const std::vector<int>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("action_map_disagreement: size mismatch");
  int total = 0, differ = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0 || b[i] < 0) continue;
    total += 1;
    if (a[i] != b[i]) differ += 1;
  }
  return total > 0 ? static_cast<double>(differ) / total : 0.0;
}

struct FourRoomsEval {
  int n_episodes = 0;
  int n_success = 0;
  double success_rate = 0.0;
  double mean_path_ratio = 0.0;  // successful episodes only
  std::vector<long> code_usage;
};

// Goal-reaching statistics over greedy episodes with online codes. The
// path ratio compares steps taken to the BFS-optimal distance drawn at
// reset.
inline FourRoomsEval evaluate_fourrooms(const Mlp& pi, const Mlp* q, int k,
                                        FourRoomsEnv& env, int n_episodes,
                                        const Rng& root) {
  FourRoomsEval ev;
  ev.n_episodes = n_episodes;
  ev.code_usage.assign(k > 0 ? k : 1, 0);
  double ratio_sum = 0.0;
  for (int i = 0; i < n_episodes; ++i) {
    Rng ep = root.fork(static_cast<std::uint64_t>(i));
    Vec s = env.reset(ep);
    const std::vector<int> dist = fourrooms_bfs_distances(env.apple());
    const int optimal = dist[env.agent()];
    Vec c_prev(k, 0.0);
    int steps = 0;
    bool success = false;
    for (int t = 0; t < env.spec().episode_cap; ++t) {
      Vec c;
      if (q && k > 0) {
        const int c_idx = argmax(mlp_forward(*q, concat(s, c_prev)));
        c = one_hot(c_idx, k);
        ev.code_usage[c_idx] += 1;
      }
      const Vec a = mode_action(pi, true, concat(s, c));
      const EnvStep es = env.step(a);
      steps += 1;
      if (es.done) {
        success = true;
        break;
      }
      c_prev = c;
      s = es.state;
    }
    if (success && optimal > 0) {
      ev.n_success += 1;
      ratio_sum += static_cast<double>(steps) / optimal;
    }
  }
  ev.success_rate = static_cast<double>(ev.n_success) / n_episodes;
  ev.mean_path_ratio = ev.n_success > 0 ? ratio_sum / ev.n_success : 0.0;
  return ev;
}

// Mean squared error between the policy mean and expert actions on expert
// states, codes from the frozen encoder (continuous envs).
inline double expert_action_mse(const Mlp& pi, const Mlp* q, int k,
                                const Dataset& expert) {
  double mse = 0.0;
  long n = 0;
  for (const Trajectory& tr : expert.trajectories) {
    std::vector<int> codes;
    if (q && k > 0) codes = segment_trajectory(*q, k, tr);
    for (int t = 0; t < tr.length(); ++t) {
      const Vec c = q && k > 0 ? one_hot(codes[t], k) : Vec{};
      const Vec mean = mlp_forward(pi, concat(tr.steps[t].state, c));
      for (std::size_t j = 0; j < mean.size(); ++j) {
        const double diff = mean[j] - tr.steps[t].action[j];
        mse += diff * diff;
      }
      n += 1;
    }
  }
  return n > 0 ? mse / n : 0.0;
}

}  // namespace digail

#endif  // DIGAIL_EVALUATION_HPP_
