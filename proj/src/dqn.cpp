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

#include "icic/dqn.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace icic {

void TrainConfig::validate() const {
  auto require = [](bool ok, const char* message) {
    if (!ok) throw std::invalid_argument(message);
  };
  require(gamma > 0.0 && gamma < 1.0, "gamma must lie in (0, 1)");
  require(0.0 <= epsilon_min && epsilon_min <= epsilon_init && epsilon_init <= 1.0,
          "need 0 <= epsilon_min <= epsilon_init <= 1");
  require(epsilon_decay >= 0.0, "epsilon_decay must be >= 0");
  require(learning_rate > 0.0, "learning_rate must be > 0");
  require(batch_size >= 1, "batch_size must be >= 1");
  require(horizon >= 1, "horizon must be >= 1");
  require(episodes >= 0, "episodes must be >= 0");
  require(hidden_units >= 1, "hidden_units must be >= 1");
  require(replay_capacity >= batch_size, "replay_capacity must be >= batch_size");
  require(target_sync_interval >= 0, "target_sync_interval must be >= 0");
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("replay capacity must be > 0");
  items_.reserve(std::min<std::size_t>(capacity, 1 << 16));
}

void ReplayBuffer::push(Transition t) {
  if (items_.size() < capacity_) {
    items_.push_back(std::move(t));
  } else {
    items_[next_] = std::move(t);
  }
  next_ = (next_ + 1) % capacity_;
}

std::vector<const Transition*> ReplayBuffer::sample(std::size_t batch_size,
                                                    std::mt19937_64& rng) const {
  if (items_.size() < batch_size || items_.empty()) {
    throw std::logic_error("replay buffer holds fewer transitions than the batch");
  }
  std::uniform_int_distribution<std::size_t> pick(0, items_.size() - 1);
  std::vector<const Transition*> batch(batch_size);
  for (auto& t : batch) t = &items_[pick(rng)];
  return batch;
}

QNetwork make_q_network(const NetworkConfig& config, int hidden_units) {
  return QNetwork({observation_size(config), hidden_units, hidden_units,
                   num_actions(config)});
}

double epsilon_at(const TrainConfig& tconf, std::int64_t steps) {
  return std::max(tconf.epsilon_min,
                  tconf.epsilon_init -
                      tconf.epsilon_decay * static_cast<double>(steps));
}

ActionId argmax_action(const Eigen::VectorXd& q_values) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < q_values.size(); ++i) {
    if (q_values(i) > q_values(best)) best = i;
  }
  return static_cast<ActionId>(best);
}

ActionId select_action(const QNetwork& net, std::span<const double> s,
                       double epsilon, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (unit(rng) < epsilon) {
    std::uniform_int_distribution<int> any(0, net.output_size() - 1);
    return any(rng);
  }
  return argmax_action(net.forward(s));
}

double bellman_target(double r, std::span<const double> s_next, bool terminal,
                      const QNetwork& net, double gamma) {
  if (terminal) return r;
  return r + gamma * net.forward(s_next).maxCoeff();
}

double sgd_step(QNetwork& net, const QNetwork& target_net,
                std::span<const Transition* const> batch, double gamma,
                double learning_rate) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  const auto size = static_cast<Eigen::Index>(batch.size());
  const Eigen::Index width = net.input_size();

  Eigen::MatrixXd states(width, size);
  Eigen::MatrixXd next_states(width, size);
  std::vector<int> actions(batch.size());
  for (Eigen::Index j = 0; j < size; ++j) {
    const Transition& t = *batch[static_cast<std::size_t>(j)];
    if (static_cast<Eigen::Index>(t.s.size()) != width ||
        static_cast<Eigen::Index>(t.s_next.size()) != width) {
      throw std::invalid_argument("transition observation size mismatch");
    }
    states.col(j) = Eigen::Map<const Eigen::VectorXd>(t.s.data(), width);
    next_states.col(j) = Eigen::Map<const Eigen::VectorXd>(t.s_next.data(), width);
    actions[static_cast<std::size_t>(j)] = t.a;
  }

  const Eigen::RowVectorXd next_max =
      target_net.forward_batch(next_states).colwise().maxCoeff();
  std::vector<double> targets(batch.size());
  for (Eigen::Index j = 0; j < size; ++j) {
    const Transition& t = *batch[static_cast<std::size_t>(j)];
    targets[static_cast<std::size_t>(j)] =
        t.terminal ? t.r : t.r + gamma * next_max(j);
  }

  Gradients grad;
  const double loss = net.loss_and_gradient(states, actions, targets, grad);
  net.apply_gradient(grad, learning_rate);
  return loss;
}

double sgd_step(QNetwork& net, std::span<const Transition* const> batch,
                double gamma, double learning_rate) {
  // Targets are computed before the update, so reading from `net` here is
  // the same as reading from a snapshot of it.
  return sgd_step(net, net, batch, gamma, learning_rate);
}

namespace {

TrainResult run_training(const NetworkConfig& config, const TrainConfig& tconf,
                         ScenarioKind scenario, const Topology* fixed,
                         const EpisodeCallback& on_episode) {
  config.validate();
  tconf.validate();

  std::mt19937_64 rng(tconf.rng_seed);
  TrainResult result{make_q_network(config, tconf.hidden_units), {}};
  QNetwork& net = result.net;
  net.init_fan_in_uniform(rng);
  QNetwork frozen;
  if (tconf.target_sync_interval > 0) frozen = net;

  ReplayBuffer replay(static_cast<std::size_t>(tconf.replay_capacity));
  std::deque<double> recent;
  double recent_sum = 0.0;
  std::int64_t steps = 0;
  std::int64_t updates = 0;

  for (int episode = 0; episode < tconf.episodes; ++episode) {
    ResetResult reset =
        fixed ? env_reset_mask(config, *fixed)
              : env_reset(config, scenario, static_cast<std::uint64_t>(rng()));
    EnvState& state = reset.state;
    Observation s = std::move(reset.observation);

    double cumulative = 0.0;
    double loss_sum = 0.0;
    int loss_count = 0;
    for (int t = 0; t < tconf.horizon; ++t) {
      const double epsilon = epsilon_at(tconf, steps);
      const ActionId a = select_action(net, s, epsilon, rng);
      StepResult step = env_step(state, a, t, tconf.horizon, config,
                                 tconf.stability_bonus);
      cumulative += step.reward;
      replay.push({s, a, step.reward, step.next_observation, step.terminal});

      if (replay.size() >= static_cast<std::size_t>(tconf.batch_size)) {
        const auto batch =
            replay.sample(static_cast<std::size_t>(tconf.batch_size), rng);
        const double loss =
            tconf.target_sync_interval > 0
                ? sgd_step(net, frozen, batch, tconf.gamma, tconf.learning_rate)
                : sgd_step(net, batch, tconf.gamma, tconf.learning_rate);
        if (!std::isfinite(loss)) {
          throw std::runtime_error("training diverged: non-finite loss");
        }
        loss_sum += loss;
        ++loss_count;
        ++updates;
        if (tconf.target_sync_interval > 0 &&
            updates % tconf.target_sync_interval == 0) {
          frozen = net;
        }
      }
      s = std::move(step.next_observation);
      ++steps;
    }
    if (!net.all_finite()) {
      throw std::runtime_error("training diverged: non-finite parameters");
    }

    recent.push_back(cumulative);
    recent_sum += cumulative;
    if (recent.size() > 100) {
      recent_sum -= recent.front();
      recent.pop_front();
    }
    EpisodeLog entry;
    entry.episode = episode;
    entry.cumulative_reward = cumulative;
    entry.running_mean_reward = recent_sum / static_cast<double>(recent.size());
    entry.epsilon = epsilon_at(tconf, steps);
    entry.mean_loss = loss_count ? loss_sum / loss_count : 0.0;
    result.log.push_back(entry);
    if (on_episode) on_episode(entry);
  }
  return result;
}

}  // namespace

TrainResult train(const NetworkConfig& config, const TrainConfig& tconf,
                  ScenarioKind scenario, const EpisodeCallback& on_episode) {
  if (tconf.fixed_placement) {
    const Topology topology = build_topology(config, scenario, tconf.placement_seed);
    return run_training(config, tconf, scenario, &topology, on_episode);
  }
  return run_training(config, tconf, scenario, nullptr, on_episode);
}

TrainResult train_on_topology(const NetworkConfig& config,
                              const TrainConfig& tconf, const Topology& topology,
                              const EpisodeCallback& on_episode) {
  return run_training(config, tconf, ScenarioKind::kUniformRandom, &topology,
                      on_episode);
}

void write_train_log_csv(std::ostream& out, const std::vector<EpisodeLog>& log) {
  const auto old_precision = out.precision(10);
  out << "episode,cumulative_reward,running_mean_reward,epsilon,mean_loss\n";
  for (const EpisodeLog& e : log) {
    out << e.episode << ',' << e.cumulative_reward << ',' << e.running_mean_reward
        << ',' << e.epsilon << ',' << e.mean_loss << '\n';
  }
  out.precision(old_precision);
}

Rollout greedy_rollout(const QNetwork& net, const NetworkConfig& config,
                       const Topology& topology, int horizon, double rho) {
  ResetResult reset = env_reset_mask(config, topology);
  Rollout rollout;
  rollout.initial_mask = reset.state.mask;
  rollout.initial_rates =
      evaluate_links(topology, reset.state.mask, full_power(config), config)
          .rate_per_user;

  Observation s = std::move(reset.observation);
  for (int t = 0; t < horizon; ++t) {
    const ActionId a = argmax_action(net.forward(s));
    StepResult step = env_step(reset.state, a, t, horizon, config, rho);
    RolloutStep record;
    record.step = t + 1;
    record.action = a;
    record.reward = step.reward;
    record.mask = reset.state.mask;
    record.user_rates =
        evaluate_links(topology, reset.state.mask, full_power(config), config)
            .rate_per_user;
    rollout.steps.push_back(std::move(record));
    s = std::move(step.next_observation);
  }
  rollout.final_mask = reset.state.mask;
  return rollout;
}

void write_rollout_csv(std::ostream& out, const Rollout& rollout,
                       const NetworkConfig& config) {
  const auto old_precision = out.precision(10);
  out << "step,action";
  for (int k = 0; k < config.num_cells; ++k) {
    for (int u = 0; u < config.users_per_cell; ++u) out << ",R_" << k << '_' << u;
  }
  out << ",mask\n";
  auto write_row = [&](int step, const std::string& action,
                       const std::vector<double>& rates, const MaskMatrix& mask) {
    out << step << ',' << action;
    for (double r : rates) out << ',' << r / 1e6;
    out << ',' << mask.to_string() << '\n';
  };
  write_row(0, "", rollout.initial_rates, rollout.initial_mask);
  for (const RolloutStep& s : rollout.steps) {
    write_row(s.step, std::to_string(s.action), s.user_rates, s.mask);
  }
  out.precision(old_precision);
}

}  // namespace icic
