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

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "digail/chain_model_io.hpp"
#include "digail/checkpoint.hpp"
#include "digail/config.hpp"
#include "digail/digail.hpp"
#include "digail/envs.hpp"
#include "digail/evaluation.hpp"
#include "digail/figures.hpp"
#include "digail/info_oracle.hpp"
#include "digail/manifest.hpp"
#include "digail/model_io.hpp"
#include "digail/pendulum.hpp"
#include "digail/trajectory.hpp"
#include "digail/vae.hpp"

namespace fs = std::filesystem;
using namespace digail;

namespace {

std::optional<std::uint64_t> env_var_seed() {
  const char* s = std::getenv("DIGAIL_SEED");
  if (!s || !*s) return std::nullopt;
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != std::strlen(s)) throw std::invalid_argument("trailing characters");
    return static_cast<std::uint64_t>(v);
  } catch (const std::exception&) {
    throw std::runtime_error("DIGAIL_SEED must be an unsigned integer, got '" +
                             std::string(s) + "'");
  }
}

int default_n_trajectories(const std::string& env_id) {
  if (env_id == "fourrooms") return 500;
  if (env_id == "circleworld") return 100;
  if (env_id == "pendulum") return 25;
  throw std::invalid_argument("unknown env '" + env_id +
                              "' (expected fourrooms, circleworld, or pendulum)");
}

// Environment key for make_env, folding in the observation encoding.
std::string env_key(const std::string& env_id, const std::string& obs_encoding) {
  if (env_id == "fourrooms" && obs_encoding == "xy") return "fourrooms-xy";
  return env_id;
}

void ensure_dir(const std::string& path) {
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec) throw std::runtime_error("cannot create directory: " + path);
}

std::string join_path(const std::string& dir, const std::string& rel) {
  return (fs::path(dir) / rel).string();
}

// Artifacts referenced by a manifest may be run-relative (produced there)
// or as-given (inputs); try the run directory first.
std::string resolve_artifact(const std::string& run_dir, const std::string& name,
                             const std::string& path) {
  const std::string local = join_path(run_dir, path);
  if (fs::exists(local)) return local;
  if (fs::exists(path)) return path;
  throw std::runtime_error("plot: missing artifact '" + name + "' (" + path + ")");
}

std::string vae_curve_csv(const std::vector<VaeCurveRow>& rows) {
  std::ostringstream o;
  o << "epoch,nll,kl,smooth,total\n";
  for (const VaeCurveRow& r : rows)
    o << r.epoch << "," << format_double(r.nll) << "," << format_double(r.kl) << ","
      << format_double(r.smooth) << "," << format_double(r.total) << "\n";
  return o.str();
}

std::string train_curve_csv(const std::vector<TrainCurveRow>& rows) {
  std::ostringstream o;
  o << "epoch,env_return,reward,disc_loss,n_episodes\n";
  for (const TrainCurveRow& r : rows)
    o << r.epoch << "," << format_double(r.mean_env_return) << ","
      << format_double(r.mean_reward) << "," << format_double(r.disc_loss) << ","
      << r.n_episodes << "\n";
  return o.str();
}

void check_dataset_dims(const Dataset& ds, int state_dim, int action_dim,
                        bool discrete, const std::string& what) {
  if (ds.header.state_dim != state_dim || ds.header.action_dim != action_dim ||
      ds.header.discrete_actions != discrete)
    throw std::runtime_error(what + ": dataset dimensions (" +
                             std::to_string(ds.header.state_dim) + ", " +
                             std::to_string(ds.header.action_dim) +
                             ") do not match the checkpoint (" +
                             std::to_string(state_dim) + ", " +
                             std::to_string(action_dim) + ")");
}

int cmd_gen_experts(const std::string& env_id, int n, std::uint64_t seed,
                    const std::string& out) {
  if (const auto s = env_var_seed()) seed = *s;
  Rng rng(seed);
  const Dataset ds = generate_expert_dataset(env_id, n, rng);
  ensure_dir(out);
  const std::string data_path = join_path(out, "dataset.jsonl");
  save_trajectories(data_path, ds);

  double mean_len = 0.0, mean_ret = 0.0;
  for (const Trajectory& tr : ds.trajectories) {
    mean_len += static_cast<double>(tr.length()) / n;
    for (const Step& s : tr.steps) mean_ret += s.reward / n;
  }
  std::cout << "wrote " << n << " trajectories (mean length " << fmt3(mean_len)
            << ", mean return " << fmt3(mean_ret) << ") to " << data_path << "\n";

  RunManifest m;
  m.command = "gen-experts";
  m.seed = seed;
  manifest_add(m, "dataset", "dataset.jsonl");
  manifest_save(join_path(out, "manifest.json"), m);
  return 0;
}

struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> epochs;
  std::optional<int> batch_size;
  std::optional<int> k;
  std::optional<double> lr;
  std::optional<double> lambda_s;
  std::optional<double> lambda1;
  std::optional<double> l2_weight;
  std::optional<std::string> latent_source;
  std::optional<bool> warm_start;
  std::optional<int> workers;
};

TrainConfig make_config(const std::string& config_path, const Dataset& ds,
                        const ConfigOverrides& ov, bool vae_stage) {
  TrainConfig cfg = config_path.empty()
                        ? default_config(ds.header.env_id)
                        : load_config_file(config_path, ds.header.env_id);
  if (ov.epochs) (vae_stage ? cfg.vae_epochs : cfg.epochs) = *ov.epochs;
  if (ov.batch_size) (vae_stage ? cfg.vae_batch : cfg.batch_size) = *ov.batch_size;
  if (ov.k) cfg.k = *ov.k;
  if (ov.lr) (vae_stage ? cfg.vae_lr : cfg.lr) = *ov.lr;
  if (ov.lambda_s) cfg.lambda_s = *ov.lambda_s;
  if (ov.lambda1) cfg.lambda1 = *ov.lambda1;
  if (ov.l2_weight) cfg.l2_bc_weight = *ov.l2_weight;
  if (ov.latent_source) cfg.latent_source = *ov.latent_source;
  if (ov.warm_start) cfg.warm_start = *ov.warm_start;
  if (ov.workers) cfg.workers = *ov.workers;
  if (ov.seed) cfg.seed = *ov.seed;
  if (const auto s = env_var_seed()) cfg.seed = *s;
  validate_config(cfg);
  return cfg;
}

int cmd_pretrain(const std::string& config_path, const std::string& data_path,
                 const std::string& out, const std::string& resume_path,
                 const ConfigOverrides& ov) {
  const Dataset ds = load_trajectories(data_path);
  const TrainConfig cfg = make_config(config_path, ds, ov, true);

  VaeNets resume_nets;
  long start_epoch = 0;
  if (!resume_path.empty()) {
    const Checkpoint c = checkpoint_load(resume_path);
    resume_nets = vae_from_checkpoint(c);
    start_epoch = vae_trained_epochs(c);
    check_dataset_dims(ds, resume_nets.state_dim, resume_nets.action_dim,
                       resume_nets.discrete, "pretrain --resume");
    if (start_epoch >= cfg.vae_epochs)
      throw std::runtime_error("pretrain --resume: checkpoint already has " +
                               std::to_string(start_epoch) +
                               " epochs, config asks for " +
                               std::to_string(cfg.vae_epochs));
    if (resume_nets.k != cfg.k)
      throw std::runtime_error("pretrain --resume: checkpoint k=" +
                               std::to_string(resume_nets.k) + " but config k=" +
                               std::to_string(cfg.k));
  }

  Rng rng(cfg.seed);
  const VaePretrainResult res = pretrain_vae(
      ds, cfg, rng, resume_path.empty() ? nullptr : &resume_nets, start_epoch);

  ensure_dir(out);
  checkpoint_save(join_path(out, "vae.ckpt"),
                  vae_to_checkpoint(res.nets, cfg.env_id, cfg.obs_encoding,
                                    cfg.vae_epochs));
  write_text_file(join_path(out, "vae_curve.csv"), vae_curve_csv(res.curve));
  write_text_file(join_path(out, "config.ini"), save_config(cfg));
  if (!res.curve.empty())
    std::cout << "pretrained " << cfg.vae_epochs << " epochs on " << cfg.env_id
              << " (final loss " << fmt3(res.curve.back().total) << ")\n";

  RunManifest m;
  m.command = "pretrain";
  m.seed = cfg.seed;
  m.config_text = save_config(cfg);
  manifest_add(m, "data", data_path);
  manifest_add(m, "vae", "vae.ckpt");
  manifest_add(m, "curve", "vae_curve.csv");
  manifest_add(m, "config", "config.ini");
  manifest_save(join_path(out, "manifest.json"), m);
  return 0;
}

int cmd_train(const std::string& config_path, const std::string& data_path,
              const std::string& vae_path, const std::string& method,
              const std::string& out, const ConfigOverrides& ov) {
  if (method != "digail" && method != "gail")
    throw CLI::ValidationError("--method", "expected digail or gail");
  if (method == "digail" && vae_path.empty())
    throw CLI::ValidationError("--method digail requires --vae");
  if (method == "gail" && !vae_path.empty())
    std::cerr << "warning: --method gail ignores --vae\n";

  const Dataset ds = load_trajectories(data_path);
  TrainConfig cfg = make_config(config_path, ds, ov, false);

  VaeNets vae;
  const bool use_vae = method == "digail";
  if (use_vae) {
    vae = vae_from_checkpoint(checkpoint_load(vae_path));
    check_dataset_dims(ds, vae.state_dim, vae.action_dim, vae.discrete, "train");
    cfg.k = vae.k;  // the pre-trained latent width is authoritative
  }
  if (cfg.workers > 1)
    std::cerr << "note: training rollouts run single-worker for bit-reproducibility\n";

  const std::unique_ptr<Env> env = make_env(env_key(cfg.env_id, cfg.obs_encoding));
  Rng rng(cfg.seed);
  const TrainResult res = use_vae ? train_digail(cfg, ds, &vae, *env, rng)
                                  : train_gail(cfg, ds, *env, rng);

  ensure_dir(out);
  checkpoint_save(join_path(out, "policy.ckpt"),
                  policy_to_checkpoint(res.nets, use_vae ? &vae.q : nullptr, method,
                                       cfg.env_id, cfg.obs_encoding));
  write_text_file(join_path(out, "train_curve.csv"), train_curve_csv(res.curve));
  write_text_file(join_path(out, "config.ini"), save_config(cfg));
  if (!res.curve.empty())
    std::cout << "trained " << method << " for " << cfg.epochs << " epochs on "
              << cfg.env_id << " (final env return "
              << fmt3(res.curve.back().mean_env_return) << ", disc loss "
              << fmt3(res.curve.back().disc_loss) << ")\n";

  RunManifest m;
  m.command = "train";
  m.seed = cfg.seed;
  m.config_text = save_config(cfg);
  manifest_add(m, "data", data_path);
  if (use_vae) manifest_add(m, "vae", vae_path);
  manifest_add(m, "policy", "policy.ckpt");
  manifest_add(m, "curve", "train_curve.csv");
  manifest_add(m, "config", "config.ini");
  manifest_add(m, "method", method);
  manifest_save(join_path(out, "manifest.json"), m);
  return 0;
}

// A loaded checkpoint viewed as an evaluable policy.
struct EvalPolicy {
  Mlp pi;
  Mlp q;
  bool has_q = false;
  int k = 0;
  bool discrete = false;
  std::string method;
  std::string env_id;
  std::string obs_encoding;
};

EvalPolicy load_eval_policy(const std::string& policy_path,
                            const std::string& vae_path) {
  const Checkpoint c = checkpoint_load(policy_path);
  EvalPolicy p;
  const std::string kind = c.get_str("kind");
  if (kind == "vae") {
    const VaeNets v = vae_from_checkpoint(c);
    p.pi = v.pi;
    p.q = v.q;
    p.has_q = true;
    p.k = v.k;
    p.discrete = v.discrete;
    p.method = "vae-bc";
  } else if (kind == "policy") {
    const GailNets n = policy_from_checkpoint(c);
    p.pi = n.pi;
    p.k = n.k;
    p.discrete = n.discrete;
    p.method = c.get_str("method");
    if (c.has_mlp("q")) {
      p.q = c.get_mlp("q");
      p.has_q = true;
    }
  } else {
    throw std::runtime_error("checkpoint: unknown kind '" + kind + "'");
  }
  p.env_id = c.get_str("env_id");
  p.obs_encoding = c.get_str("obs_encoding");
  if (!vae_path.empty() && !p.has_q) {
    const VaeNets v = vae_from_checkpoint(checkpoint_load(vae_path));
    if (v.k != p.k && p.k != 0)
      throw std::runtime_error("eval: --vae k=" + std::to_string(v.k) +
                               " does not match policy k=" + std::to_string(p.k));
    p.q = v.q;
    p.has_q = true;
    if (p.k == 0) p.k = v.k;
  }
  if (p.k > 0 && !p.has_q)
    throw std::runtime_error(
        "eval: policy is latent-conditioned but carries no posterior; pass --vae");
  return p;
}

int cmd_eval(const std::string& policy_path, const std::string& vae_path,
             const std::string& env_flag, int episodes, std::uint64_t seed,
             int workers, const std::string& out) {
  const EvalPolicy p = load_eval_policy(policy_path, vae_path);
  if (!env_flag.empty() && env_flag != p.env_id)
    throw std::runtime_error("eval: policy was trained on '" + p.env_id +
                             "', not '" + env_flag + "'");
  if (const auto s = env_var_seed()) seed = *s;

  const Rng root(seed);
  const ReturnStats st = evaluate_returns_parallel(
      p.pi, p.has_q ? &p.q : nullptr, p.k, p.discrete,
      env_key(p.env_id, p.obs_encoding), episodes, root, workers);

  ensure_dir(join_path(out, "tables"));
  write_text_file(join_path(out, "tables/returns.csv"),
                  returns_csv_header() + returns_csv_row(p.method, p.env_id, st));
  std::cout << p.method << " on " << p.env_id << ": " << fmt3(st.mean) << " +/- "
            << fmt3(st.std_dev) << " over " << st.n_episodes << " episodes\n";

  RunManifest m;
  m.command = "eval";
  m.seed = seed;
  manifest_add(m, "policy", policy_path);
  manifest_add(m, "returns", "tables/returns.csv");
  manifest_save(join_path(out, "manifest.json"), m);
  return 0;
}

int cmd_segment(const std::string& vae_path, const std::string& data_path,
                const std::string& out) {
  const VaeNets vae = vae_from_checkpoint(checkpoint_load(vae_path));
  const Dataset ds = load_trajectories(data_path);
  check_dataset_dims(ds, vae.state_dim, vae.action_dim, vae.discrete, "segment");
  const SegmentationReport rep = segment_dataset(vae.q, vae.k, ds);

  ensure_dir(join_path(out, "tables"));
  write_text_file(join_path(out, "tables/segmentation.csv"), segmentation_csv(rep));
  double mean_switches = 0.0;
  for (int s : rep.switch_counts)
    mean_switches += static_cast<double>(s) / rep.switch_counts.size();
  std::cout << "segmented " << rep.codes.size() << " trajectories (mean switches "
            << fmt3(mean_switches) << ")\n";
  if (rep.has_accuracy)
    std::cout << "label-matched accuracy: " << fmt3(rep.accuracy) << "\n";

  RunManifest m;
  m.command = "segment";
  m.seed = 0;
  manifest_add(m, "vae", vae_path);
  manifest_add(m, "data", data_path);
  manifest_add(m, "segmentation", "tables/segmentation.csv");
  manifest_save(join_path(out, "manifest.json"), m);
  return 0;
}

ColoredPath to_colored_path(const std::vector<Vec>& points,
                            const std::vector<int>& phases) {
  ColoredPath p;
  p.points = points;
  p.codes = phases;
  while (p.codes.size() < p.points.size())
    p.codes.push_back(p.codes.empty() ? 0 : p.codes.back());
  p.codes.resize(p.points.size());
  return p;
}

std::vector<Vec> pendulum_phase_points(const Trajectory& tr) {
  std::vector<Vec> pts;
  for (const Step& s : tr.steps)
    pts.push_back({std::atan2(s.state[1], s.state[0]), s.state[2]});
  return pts;
}

int cmd_plot(const std::string& run_dir, const std::string& out) {
  const RunManifest m = manifest_load(join_path(run_dir, "manifest.json"));
  if (m.command != "train" && m.command != "pretrain")
    throw std::runtime_error("plot: run directory holds a '" + m.command +
                             "' manifest; expected train or pretrain");

  const std::string data_path =
      resolve_artifact(run_dir, "data", manifest_output(m, "data"));
  const Dataset ds = load_trajectories(data_path);

  Mlp pi, q;
  int k = 0;
  bool discrete = false, has_q = false;
  std::string env_id, obs_encoding;
  if (m.command == "train") {
    const std::string policy_path =
        resolve_artifact(run_dir, "policy", manifest_output(m, "policy"));
    const Checkpoint c = checkpoint_load(policy_path);
    const GailNets n = policy_from_checkpoint(c);
    pi = n.pi;
    k = n.k;
    discrete = n.discrete;
    if (c.has_mlp("q")) {
      q = c.get_mlp("q");
      has_q = true;
    }
    env_id = c.get_str("env_id");
    obs_encoding = c.get_str("obs_encoding");
  } else {
    const std::string vae_path =
        resolve_artifact(run_dir, "vae", manifest_output(m, "vae"));
    const Checkpoint c = checkpoint_load(vae_path);
    const VaeNets v = vae_from_checkpoint(c);
    pi = v.pi;
    q = v.q;
    has_q = true;
    k = v.k;
    discrete = v.discrete;
    env_id = c.get_str("env_id");
    obs_encoding = c.get_str("obs_encoding");
  }

  ensure_dir(join_path(out, "figures"));
  ensure_dir(join_path(out, "tables"));
  RunManifest pm;
  pm.command = "plot";
  pm.seed = m.seed;

  const bool compact = obs_encoding == "xy";
  const Rng root(m.seed);

  // Rollouts drive the trajectory and PCA panels for trained policies;
  // expert demonstrations stand in after pre-training alone.
  std::vector<Trajectory> rolls;
  if (m.command == "train") {
    const std::unique_ptr<Env> env = make_env(env_key(env_id, obs_encoding));
    for (int i = 0; i < 8; ++i) {
      Rng ep = root.fork(static_cast<std::uint64_t>(i));
      rolls.push_back(
          rollout_episode(pi, has_q ? &q : nullptr, k, discrete, *env, ep));
    }
  } else {
    for (int i = 0; i < 8 && i < static_cast<int>(ds.trajectories.size()); ++i) {
      Trajectory tr = ds.trajectories[i];
      if (has_q) {
        const std::vector<int> codes = segment_trajectory(q, k, tr);
        tr.phases = codes;
      }
      rolls.push_back(tr);
    }
  }
  if (rolls.empty()) throw std::runtime_error("plot: no trajectories to draw");

  std::vector<ColoredPath> paths;
  for (const Trajectory& tr : rolls) {
    if (env_id == "fourrooms")
      paths.push_back(to_colored_path(fourrooms_points(tr, compact), tr.phases));
    else if (env_id == "pendulum")
      paths.push_back(to_colored_path(pendulum_phase_points(tr), tr.phases));
    else
      paths.push_back(to_colored_path(trajectory_points(tr), tr.phases));
  }
  write_text_file(join_path(out, "figures/trajectories.svg"), paths_svg(paths));
  manifest_add(pm, "trajectories", "figures/trajectories.svg");

  const std::vector<int> first_codes =
      !rolls[0].phases.empty()
          ? rolls[0].phases
          : std::vector<int>(static_cast<std::size_t>(rolls[0].length()), 0);
  write_text_file(join_path(out, "figures/code_vs_time.svg"),
                  code_time_svg(first_codes, k > 0 ? k : 1));
  write_text_file(join_path(out, "tables/code_vs_time.csv"),
                  code_time_csv(first_codes));
  manifest_add(pm, "code_vs_time_svg", "figures/code_vs_time.svg");
  manifest_add(pm, "code_vs_time_csv", "tables/code_vs_time.csv");

  if (env_id == "fourrooms" && k > 0) {
    // Fixed apple cell so the per-code maps are comparable.
    const int apple = FourRoomsMap::cell(8, 11);
    for (int c = 0; c < k; ++c) {
      const std::vector<int> map = fourrooms_action_map(pi, k, c, apple, compact);
      const std::string name = "figures/arrow_map_code" + std::to_string(c) + ".svg";
      write_text_file(join_path(out, name), fourrooms_arrow_svg(map, apple, c));
      manifest_add(pm, "arrow_map_code" + std::to_string(c), name);
    }
  }

  if (env_id != "fourrooms") {
    std::vector<Vec> states;
    std::vector<int> codes;
    for (const Trajectory& tr : rolls)
      for (int t = 0; t < tr.length(); ++t) {
        states.push_back(tr.steps[t].state);
        codes.push_back(tr.phases.empty() ? 0 : tr.phases[t]);
      }
    const int d = std::min<int>(3, static_cast<int>(states[0].size()));
    const PcaProjection proj = pca_project(states, codes, d);
    if (proj.components.size() >= 2) {
      write_text_file(join_path(out, "figures/pca.svg"), pca_scatter_svg(proj));
      manifest_add(pm, "pca_svg", "figures/pca.svg");
    }
    write_text_file(join_path(out, "tables/pca.csv"), pca_csv(proj));
    manifest_add(pm, "pca_csv", "tables/pca.csv");
  }

  std::cout << "wrote " << pm.outputs.size() << " figure/table files to " << out
            << "\n";
  manifest_save(join_path(out, "manifest.json"), pm);
  return 0;
}

int cmd_oracle(const std::string& models_path, int trials, std::uint64_t seed) {
  if (const auto s = env_var_seed()) seed = *s;
  Rng rng(seed);
  double max_slack = 0.0;
  long n_models = 0, n_posteriors = 0;

  auto check_model = [&](const DiscreteChainModel& model, bool expect_tight_mi) {
    const double mi = exact_mutual_information(model);
    const double di = exact_directed_information(model);
    max_slack = std::max(max_slack, di - mi);
    if (expect_tight_mi) max_slack = std::max(max_slack, std::abs(mi - di));
    const ApproximatePosterior tp = true_posterior(model);
    max_slack = std::max(max_slack, std::abs(exact_variational_bound(model, tp) - di));
    for (int r = 0; r < 5; ++r) {
      const ApproximatePosterior ap = random_posterior(model, rng);
      max_slack = std::max(max_slack, exact_variational_bound(model, ap) - di);
      n_posteriors += 1;
    }
    n_models += 1;
  };

  if (!models_path.empty()) {
    std::vector<std::string> files;
    if (fs::is_directory(models_path)) {
      for (const auto& entry : fs::directory_iterator(models_path))
        if (entry.path().extension() == ".ini") files.push_back(entry.path().string());
      std::sort(files.begin(), files.end());
    } else {
      files.push_back(models_path);
    }
    if (files.empty())
      throw std::runtime_error("oracle: no .ini model files in " + models_path);
    for (const std::string& f : files) check_model(chain_model_load(f), false);
  } else {
    for (int i = 0; i < trials; ++i) {
      const int T = 1 + rng.below(3);
      const int n_tau = 1 + rng.below(3);
      const int n_c = 1 + rng.below(3);
      const bool feedback = rng.below(2) == 0;
      check_model(random_chain_model(T, n_tau, n_c, rng, feedback), !feedback);
    }
  }

  std::cout << "checked " << n_models << " models, " << n_posteriors
            << " posterior draws; max slack = " << max_slack << "\n";
  if (max_slack > 1e-10) {
    std::cerr << "error: bound violation exceeds 1e-10\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical imitation learning with a directed-information "
               "latent-code regularizer"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen-experts", "Generate expert demonstrations");
  std::string gen_env, gen_out;
  int gen_n = 0;
  std::uint64_t gen_seed = 0;
  gen->add_option("--env", gen_env, "fourrooms | circleworld | pendulum")->required();
  auto* gen_n_opt =
      gen->add_option("--n", gen_n, "Trajectory count (default per env)")
          ->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--out", gen_out, "Run directory")->required();

  ConfigOverrides pre_ov;
  auto* pre = app.add_subcommand("pretrain", "Pre-train the latent-code VAE");
  std::string pre_config, pre_data, pre_out, pre_resume;
  pre->add_option("--config", pre_config, "INI config file");
  pre->add_option("--data", pre_data, "Expert dataset (JSON lines)")->required();
  pre->add_option("--out", pre_out, "Run directory")->required();
  pre->add_option("--resume", pre_resume, "Continue from a VAE checkpoint");
  pre->add_option("--seed", pre_ov.seed, "Overrides config seed");
  pre->add_option("--epochs", pre_ov.epochs, "Overrides [vae] epochs");
  pre->add_option("--batch-size", pre_ov.batch_size, "Overrides [vae] batch_size");
  pre->add_option("--k", pre_ov.k, "Overrides [vae] k");
  pre->add_option("--lr", pre_ov.lr, "Overrides [vae] lr");
  pre->add_option("--lambda-s", pre_ov.lambda_s, "Overrides [vae] lambda_s");

  ConfigOverrides tr_ov;
  auto* tr = app.add_subcommand("train", "Adversarial imitation stage");
  std::string tr_config, tr_data, tr_vae, tr_method = "digail", tr_out;
  tr->add_option("--config", tr_config, "INI config file");
  tr->add_option("--data", tr_data, "Expert dataset (JSON lines)")->required();
  tr->add_option("--vae", tr_vae, "Pre-trained VAE checkpoint");
  tr->add_option("--method", tr_method, "digail | gail");
  tr->add_option("--out", tr_out, "Run directory")->required();
  tr->add_option("--seed", tr_ov.seed, "Overrides config seed");
  tr->add_option("--epochs", tr_ov.epochs, "Overrides [digail] epochs");
  tr->add_option("--batch-size", tr_ov.batch_size, "Overrides [digail] batch_size");
  tr->add_option("--lambda1", tr_ov.lambda1, "Overrides [digail] lambda1");
  tr->add_option("--l2-weight", tr_ov.l2_weight, "Overrides [digail] l2_bc_weight");
  tr->add_option("--latent-source", tr_ov.latent_source,
                 "expert-demo | online-posterior");
  tr->add_option("--warm-start", tr_ov.warm_start,
                 "Warm-start the policy from the VAE decoder");
  tr->add_option("--workers", tr_ov.workers, "Worker count (training stays serial)");

  auto* ev = app.add_subcommand("eval", "Greedy-policy return statistics");
  std::string ev_policy, ev_vae, ev_env, ev_out;
  int ev_episodes = 300, ev_workers = 1;
  std::uint64_t ev_seed = 0;
  ev->add_option("--policy", ev_policy, "Policy or VAE checkpoint")->required();
  ev->add_option("--vae", ev_vae, "VAE checkpoint (posterior source)");
  ev->add_option("--env", ev_env, "Must match the checkpoint env");
  ev->add_option("--episodes", ev_episodes, "Episode count")
      ->check(CLI::PositiveNumber);
  ev->add_option("--seed", ev_seed, "Root seed for per-episode streams");
  ev->add_option("--workers", ev_workers, "Parallel episode workers")
      ->check(CLI::PositiveNumber);
  ev->add_option("--out", ev_out, "Run directory")->required();

  auto* seg = app.add_subcommand("segment", "Segment demonstrations with a VAE");
  std::string seg_vae, seg_data, seg_out;
  seg->add_option("--vae", seg_vae, "VAE checkpoint")->required();
  seg->add_option("--data", seg_data, "Dataset to segment")->required();
  seg->add_option("--out", seg_out, "Run directory")->required();

  auto* pl = app.add_subcommand("plot", "Emit figures from a finished run");
  std::string pl_run, pl_out;
  pl->add_option("--run", pl_run, "Run directory with a manifest")->required();
  pl->add_option("--out", pl_out, "Output directory")->required();

  auto* orc = app.add_subcommand("oracle", "Information-bound oracle checks");
  std::string orc_models;
  int orc_trials = 100;
  std::uint64_t orc_seed = 0;
  orc->add_option("--models", orc_models, "Chain-model INI file or directory");
  orc->add_option("--trials", orc_trials, "Random models to scan")
      ->check(CLI::PositiveNumber);
  orc->add_option("--seed", orc_seed, "RNG seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      if (!*gen_n_opt) gen_n = default_n_trajectories(gen_env);
      return cmd_gen_experts(gen_env, gen_n, gen_seed, gen_out);
    }
    if (*pre) return cmd_pretrain(pre_config, pre_data, pre_out, pre_resume, pre_ov);
    if (*tr) return cmd_train(tr_config, tr_data, tr_vae, tr_method, tr_out, tr_ov);
    if (*ev)
      return cmd_eval(ev_policy, ev_vae, ev_env, ev_episodes, ev_seed, ev_workers,
                      ev_out);
    if (*seg) return cmd_segment(seg_vae, seg_data, seg_out);
    if (*pl) return cmd_plot(pl_run, pl_out);
    if (*orc) return cmd_oracle(orc_models, orc_trials, orc_seed);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
