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

#ifndef ICIC_DQN_HPP_
#define ICIC_DQN_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "icic/mdp.hpp"
#include "icic/q_network.hpp"
#include "icic/radio_env.hpp"

namespace icic {

struct TrainConfig {
  double gamma = 0.995;
  double epsilon_init = 1.0;
  double epsilon_min = 0.01;
  double epsilon_decay = 8e-6;  // per timestep
  double learning_rate = 1e-4;
  int batch_size = 32;
  int horizon = 64;
  int episodes = 5000;
  std::uint64_t rng_seed = 0;

  int hidden_units = 128;
  int replay_capacity = 100000;
  double stability_bonus = kDefaultStabilityBonus;
  // 0 bootstraps from the online network; n > 0 refreshes a frozen copy
  // every n updates.
  int target_sync_interval = 0;
  // Keep one UE placement (drawn with placement_seed) for every episode.
  bool fixed_placement = false;
  std::uint64_t placement_seed = 0;

  // Throws std::invalid_argument on a violated invariant.
  void validate() const;
};

struct Transition {
  Observation s;
  ActionId a = 0;
  double r = 0.0;
  Observation s_next;
  bool terminal = false;
};

// Bounded FIFO; oldest transitions are overwritten once full.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Transition t);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& at(std::size_t i) const { return items_.at(i); }

  // Uniform with replacement. Throws std::logic_error if size() < batch_size.
  std::vector<const Transition*> sample(std::size_t batch_size,
                                        std::mt19937_64& rng) const;

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::vector<Transition> items_;
};

// Hidden sizes default to {128, 128}.
QNetwork make_q_network(const NetworkConfig& config, int hidden_units = 128);

// max(epsilon_min, epsilon_init - epsilon_decay * steps)
double epsilon_at(const TrainConfig& tconf, std::int64_t steps);

// Lowest index on ties.
ActionId argmax_action(const Eigen::VectorXd& q_values);

ActionId select_action(const QNetwork& net, std::span<const double> s,
                       double epsilon, std::mt19937_64& rng);

double bellman_target(double r, std::span<const double> s_next, bool terminal,
                      const QNetwork& net, double gamma);

// One plain gradient-descent step on the mean squared Bellman error. Targets
// come from `target_net` and are held constant. Returns the pre-update loss.
double sgd_step(QNetwork& net, const QNetwork& target_net,
                std::span<const Transition* const> batch, double gamma,
                double learning_rate);

// Bootstraps targets from `net` itself.
double sgd_step(QNetwork& net, std::span<const Transition* const> batch,
                double gamma, double learning_rate);

struct EpisodeLog {
  int episode = 0;
  double cumulative_reward = 0.0;
  // Mean cumulative reward over the last (up to) 100 episodes.
  double running_mean_reward = 0.0;
  double epsilon = 0.0;
  // Mean loss over this episode's updates; 0 when no update ran.
  double mean_loss = 0.0;
};

struct TrainResult {
  QNetwork net;
  std::vector<EpisodeLog> log;
};

using EpisodeCallback = std::function<void(const EpisodeLog&)>;

// Deep Q-learning with experience replay and epsilon-greedy exploration.
// Every episode redraws the topology for `scenario` unless
// tconf.fixed_placement is set. Deterministic given tconf.rng_seed.
TrainResult train(const NetworkConfig& config, const TrainConfig& tconf,
                  ScenarioKind scenario, const EpisodeCallback& on_episode = {});

// Same loop on a caller-supplied fixed topology.
TrainResult train_on_topology(const NetworkConfig& config,
                              const TrainConfig& tconf, const Topology& topology,
                              const EpisodeCallback& on_episode = {});

// CSV: episode,cumulative_reward,running_mean_reward,epsilon,mean_loss
void write_train_log_csv(std::ostream& out, const std::vector<EpisodeLog>& log);

struct RolloutStep {
  int step = 0;
  ActionId action = 0;
  double reward = 0.0;
  std::vector<double> user_rates;  // bits/s, after the action
  MaskMatrix mask;                 // after the action
};

struct Rollout {
  std::vector<double> initial_rates;
  MaskMatrix initial_mask;
  std::vector<RolloutStep> steps;
  MaskMatrix final_mask;
};

// Greedy policy from the all-ones mask for `horizon` steps.
Rollout greedy_rollout(const QNetwork& net, const NetworkConfig& config,
                       const Topology& topology, int horizon,
                       double rho = kDefaultStabilityBonus);

// CSV: step,action,R_0_0..R_{K-1}_{U-1} (Mbps),mask. Step 0 is the initial
// state with an empty action.
void write_rollout_csv(std::ostream& out, const Rollout& rollout,
                       const NetworkConfig& config);

}  // namespace icic

#endif  // ICIC_DQN_HPP_
