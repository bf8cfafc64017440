// Copyright 2026 The icic Authors. All rights reserved.
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

// Command-line front end: train, eval, power and oracle subcommands.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "icic/config_io.hpp"
#include "icic/dqn.hpp"
#include "icic/oracle.hpp"
#include "icic/power_mgmt.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace icic {
namespace {

struct Options {
  std::string config_path;
  std::string scenario = "all-edge";
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::string checkpoint;
  std::optional<int> episodes;
  std::optional<std::uint64_t> placement_seed;
  double p_step = kDefaultPowerStepDb;
  std::string mask;
  bool grid = false;
};

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

RunConfig load_config(const Options& o) {
  return o.config_path.empty() ? parse_run_config("{}") : load_run_config(o.config_path);
}

fs::path prepare_out_dir(const Options& o) {
  fs::create_directories(o.out_dir);
  return fs::path(o.out_dir);
}

void write_manifest(const fs::path& dir, const std::string& command, const Options& o,
                    const RunConfig& config, const std::vector<fs::path>& outputs) {
  nlohmann::json doc;
  doc["command"] = command;
  doc["scenario"] = scenario_name(parse_scenario(o.scenario));
  doc["seed"] = o.seed;
  doc["config"] = nlohmann::json::parse(run_config_to_json(config));
  nlohmann::json files = nlohmann::json::array();
  for (const fs::path& p : outputs) files.push_back(p.filename().string());
  doc["outputs"] = files;
  open_output(dir / "run_manifest.json") << doc.dump(2) << '\n';
}

QNetwork load_checkpoint(const std::string& path, const NetworkConfig& config) {
  if (path.empty()) throw std::runtime_error("--checkpoint is required");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read checkpoint " + path);
  QNetwork net = QNetwork::load(in);
  if (net.input_size() != observation_size(config) ||
      net.output_size() != num_actions(config)) {
    throw std::runtime_error("checkpoint does not match the configured network size");
  }
  return net;
}

void print_rates(const std::vector<double>& rates, const NetworkConfig& config) {
  for (std::size_t i = 0; i < rates.size(); ++i) {
    std::cout << "  R_" << i / config.users_per_cell << '_' << i % config.users_per_cell
              << " = " << rates[i] / 1e6 << " Mbps\n";
  }
}

int run_train(const Options& o) {
  RunConfig config = load_config(o);
  config.train.rng_seed = o.seed;
  if (o.episodes) config.train.episodes = *o.episodes;
  if (o.placement_seed) {
    config.train.fixed_placement = true;
    config.train.placement_seed = *o.placement_seed;
  }
  config.train.validate();
  const ScenarioKind scenario = parse_scenario(o.scenario);
  const fs::path dir = prepare_out_dir(o);

  const int total = config.train.episodes;
  const TrainResult result =
      train(config.network, config.train, scenario, [total](const EpisodeLog& e) {
        if ((e.episode + 1) % 100 == 0 || e.episode + 1 == total) {
          std::cout << "episode " << e.episode + 1 << '/' << total
                    << "  reward " << e.cumulative_reward
                    << "  mean100 " << e.running_mean_reward
                    << "  epsilon " << e.epsilon << '\n';
        }
      });

  const fs::path checkpoint = o.checkpoint.empty() ? dir / "q_network.txt" : fs::path(o.checkpoint);
  const fs::path log_path = dir / "train_log.csv";
  {
    std::ofstream out = open_output(checkpoint);
    result.net.save(out);
  }
  {
    std::ofstream out = open_output(log_path);
    write_train_log_csv(out, result.log);
  }
  write_manifest(dir, "train", o, config, {checkpoint, log_path});
  std::cout << "wrote " << checkpoint.string() << " and " << log_path.string() << '\n';
  return 0;
}

// Greedy rollout of the checkpoint on the topology drawn from --seed.
Rollout rollout_from_checkpoint(const Options& o, const RunConfig& config,
                                const Topology& topology) {
  const QNetwork net = load_checkpoint(o.checkpoint, config.network);
  return greedy_rollout(net, config.network, topology, config.train.horizon,
                        config.train.stability_bonus);
}

int run_eval(const Options& o) {
  const RunConfig config = load_config(o);
  const Topology topology = build_topology(config.network, parse_scenario(o.scenario), o.seed);
  const Rollout rollout = rollout_from_checkpoint(o, config, topology);
  const fs::path dir = prepare_out_dir(o);
  const fs::path path = dir / "rollout.csv";
  {
    std::ofstream out = open_output(path);
    write_rollout_csv(out, rollout, config.network);
  }
  write_manifest(dir, "eval", o, config, {path});

  const LinkState links =
      evaluate_links(topology, rollout.final_mask, full_power(config.network), config.network);
  std::cout << "final mask " << rollout.final_mask.to_string() << " ("
            << (links.all_users_meet(config.network.r_min) ? "feasible" : "infeasible")
            << ")\n";
  print_rates(links.rate_per_user, config.network);
  return 0;
}

MaskMatrix parse_mask(const std::string& text, const NetworkConfig& config) {
  MaskMatrix mask(config.num_cells, config.num_subbands);
  int k = 0, n = 0;
  for (char ch : text) {
    if (ch == '|') {
      if (n != config.num_subbands) throw std::invalid_argument("malformed --mask " + text);
      ++k;
      n = 0;
      continue;
    }
    if ((ch != '0' && ch != '1') || k >= config.num_cells || n >= config.num_subbands) {
      throw std::invalid_argument("malformed --mask " + text);
    }
    mask.set(k, n++, ch == '1');
  }
  if (k != config.num_cells - 1 || n != config.num_subbands) {
    throw std::invalid_argument("malformed --mask " + text);
  }
  return mask;
}

int run_power(const Options& o) {
  const RunConfig config = load_config(o);
  const Topology topology = build_topology(config.network, parse_scenario(o.scenario), o.seed);
  const MaskMatrix beta = o.mask.empty() ? rollout_from_checkpoint(o, config, topology).final_mask
                                         : parse_mask(o.mask, config.network);
  const PowerResult result = reduce_power(topology, beta, config.network, o.p_step);
  const fs::path dir = prepare_out_dir(o);
  const fs::path path = dir / "power_trace.csv";
  {
    std::ofstream out = open_output(path);
    write_power_trace_csv(out, result.trace, config.network);
  }
  write_manifest(dir, "power", o, config, {path});

  std::cout << "mask " << beta.to_string() << "\n";
  for (int k = 0; k < config.network.num_cells; ++k) {
    std::cout << "  p_" << k << " = " << result.power[k] << " dBm\n";
  }
  print_rates(result.trace.back().user_rates, config.network);
  return 0;
}

int run_oracle(const Options& o) {
  const RunConfig config = load_config(o);
  const Topology topology = build_topology(config.network, parse_scenario(o.scenario), o.seed);
  const OracleResult result = exhaustive_mask_search(topology, config.network);
  const fs::path dir = prepare_out_dir(o);
  std::vector<fs::path> outputs = {dir / "oracle_masks.csv"};
  {
    std::ofstream out = open_output(outputs.back());
    write_oracle_csv(out, result, config.network);
  }
  std::cout << result.feasible_masks.size() << " of " << result.records.size()
            << " masks feasible\n"
            << "max-min user rate " << result.max_min_user_rate / 1e6 << " Mbps with "
            << result.max_min_mask.to_string() << '\n';
  if (result.best_mask) {
    std::cout << "best mask " << result.best_mask->to_string() << '\n';
    if (o.grid) {
      const PowerVector power =
          power_grid_search(topology, *result.best_mask, config.network, o.p_step);
      outputs.push_back(dir / "oracle_power.csv");
      std::ofstream out = open_output(outputs.back());
      out << "cell,p_k\n";
      for (int k = 0; k < config.network.num_cells; ++k) {
        out << k << ',' << power[k] << '\n';
        std::cout << "  p_" << k << " = " << power[k] << " dBm\n";
      }
    }
  } else {
    std::cout << "no feasible mask\n";
  }
  write_manifest(dir, "oracle", o, config, outputs);
  return 0;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config_path, "JSON run configuration")
      ->check(CLI::ExistingFile);
  cmd->add_option("--scenario", o.scenario,
                  "all-edge | one-edge | all-center | random (or case1..case3)")
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--out", o.out_dir, "output directory (created if absent)")
      ->capture_default_str();
}

}  // namespace
}  // namespace icic

int main(int argc, char** argv) {
  using namespace icic;
  CLI::App app{"Inter-cell interference coordination with DQN sub-band masking"};
  app.require_subcommand(1);
  Options o;

  CLI::App* train_cmd = app.add_subcommand("train", "train a Q-network");
  add_common(train_cmd, o);
  train_cmd->add_option("--checkpoint", o.checkpoint,
                        "checkpoint to write (default <out>/q_network.txt)");
  train_cmd->add_option("--episodes", o.episodes, "override the episode count")
      ->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--placement-seed", o.placement_seed,
                        "keep one UE placement for every episode");

  CLI::App* eval_cmd = app.add_subcommand("eval", "greedy rollout of a checkpoint");
  add_common(eval_cmd, o);
  eval_cmd->add_option("--checkpoint", o.checkpoint, "checkpoint to load")->required();

  CLI::App* power_cmd = app.add_subcommand("power", "greedy power reduction");
  add_common(power_cmd, o);
  power_cmd->add_option("--checkpoint", o.checkpoint, "checkpoint whose final mask is used");
  power_cmd->add_option("--mask", o.mask, "explicit mask such as 1011|0100");
  power_cmd->add_option("--p-step", o.p_step, "power step in dB")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  CLI::App* oracle_cmd = app.add_subcommand("oracle", "exhaustive mask search");
  add_common(oracle_cmd, o);
  oracle_cmd->add_flag("--grid", o.grid, "also grid-search the minimum power of the best mask");
  oracle_cmd->add_option("--p-step", o.p_step, "grid spacing in dB")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_cmd) return run_train(o);
    if (*eval_cmd) return run_eval(o);
    if (*power_cmd) return run_power(o);
    if (*oracle_cmd) return run_oracle(o);
  } catch (const std::exception& e) {
    std::cerr << "icic: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
