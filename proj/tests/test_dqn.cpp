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

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "icic/dqn.hpp"

namespace icic {
namespace {

// A net whose outputs are constant: zero weights, biases = values.
QNetwork constant_net(int inputs, const std::vector<double>& values) {
  QNetwork net({inputs, static_cast<int>(values.size())});
  for (std::size_t i = 0; i < values.size(); ++i) net.bias(0)(i) = values[i];
  return net;
}

NetworkConfig small_config() {
  NetworkConfig c;
  c.num_subbands = 4;
  return c;
}

TEST_CASE("epsilon schedule") {
  const TrainConfig t;
  CHECK(epsilon_at(t, 0) == 1.0);
  CHECK(epsilon_at(t, 320000) == 0.01);
  CHECK(epsilon_at(t, 1000) == 1.0 - 8e-6 * 1000);
  double previous = 2.0;
  for (std::int64_t n = 0; n < 200000; n += 997) {
    const double e = epsilon_at(t, n);
    CHECK(e == std::max(0.01, 1.0 - 8e-6 * static_cast<double>(n)));
    CHECK(e <= previous);
    CHECK(e >= 0.01);
    previous = e;
  }
}

TEST_CASE("greedy selection and tie-breaking") {
  std::mt19937_64 rng(1);
  const std::vector<double> s = {0.0};
  CHECK(select_action(constant_net(1, {1.0, 3.0, 2.0}), s, 0.0, rng) == 1);
  CHECK(select_action(constant_net(1, {5.0, 5.0}), s, 0.0, rng) == 0);
  CHECK(argmax_action(Eigen::Vector3d(-1.0, -1.0, -2.0)) == 0);
}

TEST_CASE("full exploration is uniform over actions") {
  std::mt19937_64 rng(77);
  const QNetwork net = constant_net(1, std::vector<double>(17, 0.0));
  const std::vector<double> s = {0.0};
  std::vector<int> counts(17, 0);
  constexpr int kDraws = 10000;
  for (int i = 0; i < kDraws; ++i) ++counts[select_action(net, s, 1.0, rng)];
  double chi2 = 0.0;
  const double expected = static_cast<double>(kDraws) / 17.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 16 degrees of freedom, 0.1% upper tail.
  CHECK(chi2 < 39.25);
}

TEST_CASE("bellman target") {
  const std::vector<double> s = {0.0};
  const QNetwork ten = constant_net(1, {1.0, 10.0, -4.0});
  CHECK(bellman_target(-5.0, s, true, ten, 0.995) == -5.0);
  CHECK(bellman_target(0.0, s, false, ten, 0.995) == doctest::Approx(9.95).epsilon(1e-15));
  CHECK(bellman_target(1.5, s, false, constant_net(1, {0.0, 0.0}), 0.995) == 1.5);
}

TEST_CASE("sgd_step leaves a fitted network alone") {
  QNetwork net({3, 4, 2});
  const std::vector<double> before = net.parameters();
  std::vector<Transition> items(4, Transition{{1.0, 2.0, 3.0}, 1, 0.0, {0.0, 1.0, 0.0}, true});
  items[1].terminal = false;  // zero net: bootstrapped target is also 0
  std::vector<const Transition*> batch;
  for (const auto& t : items) batch.push_back(&t);
  CHECK(sgd_step(net, batch, 0.995, 0.1) == 0.0);
  CHECK(net.parameters() == before);
}

TEST_CASE("sgd_step is one gradient step on the Bellman error") {
  std::mt19937_64 rng(3);
  QNetwork net({4, 6, 6, 3});
  net.init_fan_in_uniform(rng);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Transition> items;
  for (int j = 0; j < 5; ++j) {
    Transition t;
    for (int i = 0; i < 4; ++i) {
      t.s.push_back(normal(rng));
      t.s_next.push_back(normal(rng));
    }
    t.a = j % 3;
    t.r = normal(rng);
    t.terminal = (j == 2);
    items.push_back(t);
  }
  std::vector<const Transition*> batch;
  for (const auto& t : items) batch.push_back(&t);

  // Reference: targets via bellman_target, then loss_and_gradient.
  Eigen::MatrixXd states(4, 5);
  std::vector<int> actions;
  std::vector<double> targets;
  for (int j = 0; j < 5; ++j) {
    states.col(j) = Eigen::Map<const Eigen::VectorXd>(items[j].s.data(), 4);
    actions.push_back(items[j].a);
    targets.push_back(bellman_target(items[j].r, items[j].s_next, items[j].terminal, net, 0.9));
  }
  Gradients grad;
  QNetwork expected = net;
  const double expected_loss = expected.loss_and_gradient(states, actions, targets, grad);
  expected.apply_gradient(grad, 0.05);

  const double loss = sgd_step(net, batch, 0.9, 0.05);
  CHECK(loss == doctest::Approx(expected_loss).epsilon(1e-12));
  const auto got = net.parameters();
  const auto want = expected.parameters();
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) < 1e-12);
}

TEST_CASE("repeated updates on one transition descend monotonically") {
  std::mt19937_64 rng(10);
  QNetwork net({5, 16, 16, 4});
  net.init_fan_in_uniform(rng);
  const Transition t{{0.3, -0.2, 1.0, 0.0, 1.0}, 2, -3.0, {0.0, 0.0, 0.0, 0.0, 0.0}, true};
  const std::vector<const Transition*> batch(8, &t);
  double previous = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 100; ++i) {
    const double loss = sgd_step(net, batch, 0.995, 1e-3);
    CHECK(std::isfinite(loss));
    CHECK(loss <= previous);
    previous = loss;
  }
  CHECK(previous < 9.0);
}

TEST_CASE("frozen target network supplies the bootstrap") {
  QNetwork online({1, 2});
  const QNetwork frozen = constant_net(1, {4.0, 0.0});
  const Transition t{{1.0}, 0, 1.0, {0.0}, false};
  const std::vector<const Transition*> batch = {&t};
  // target = 1 + 0.5 * 4 = 3, online Q = 0
  CHECK(sgd_step(online, frozen, batch, 0.5, 0.0001) == 9.0);
}

TEST_CASE("replay buffer is a bounded FIFO with uniform sampling") {
  ReplayBuffer buffer(3);
  std::mt19937_64 rng(5);
  CHECK_THROWS_AS(buffer.sample(1, rng), std::logic_error);
  for (int i = 0; i < 5; ++i) buffer.push(Transition{{}, i, 0.0, {}, false});
  CHECK(buffer.size() == 3);
  std::vector<int> held;
  for (std::size_t i = 0; i < 3; ++i) held.push_back(buffer.at(i).a);
  std::sort(held.begin(), held.end());
  CHECK(held == std::vector<int>{2, 3, 4});
  CHECK_THROWS_AS(buffer.sample(4, rng), std::logic_error);

  std::vector<int> counts(5, 0);
  for (int i = 0; i < 3000; ++i) {
    for (const Transition* t : buffer.sample(2, rng)) ++counts[t->a];
  }
  CHECK(counts[0] == 0);
  CHECK(counts[1] == 0);
  for (int a = 2; a < 5; ++a) CHECK(std::abs(counts[a] - 2000) < 200);
}

TEST_CASE("zero episodes returns the initialised network") {
  TrainConfig t;
  t.episodes = 0;
  t.rng_seed = 9;
  const TrainResult r = train(small_config(), t, ScenarioKind::kAllEdge);
  CHECK(r.log.empty());
  QNetwork expected = make_q_network(small_config());
  std::mt19937_64 rng(9);
  expected.init_fan_in_uniform(rng);
  CHECK(r.net == expected);
}

TEST_CASE("short training run is logged, bounded and reproducible") {
  TrainConfig t;
  t.episodes = 6;
  t.horizon = 16;
  t.epsilon_decay = 0.01;
  t.rng_seed = 21;
  const TrainResult a = train(small_config(), t, ScenarioKind::kOneEdge);
  const TrainResult b = train(small_config(), t, ScenarioKind::kOneEdge);
  REQUIRE(a.log.size() == 6);
  CHECK(a.net.all_finite());
  double previous = 1.0;
  for (std::size_t e = 0; e < a.log.size(); ++e) {
    CHECK(a.log[e].episode == static_cast<int>(e));
    CHECK(a.log[e].epsilon <= previous);
    CHECK(a.log[e].epsilon >= t.epsilon_min);
    CHECK(std::isfinite(a.log[e].mean_loss));
    CHECK(a.log[e].cumulative_reward <= 2.0 * t.horizon);
    previous = a.log[e].epsilon;
  }
  CHECK(a.log.back().epsilon == epsilon_at(t, 6 * 16));
  // Updates start once the buffer holds a batch: episode 0 has 16 < 32.
  CHECK(a.log[0].mean_loss == 0.0);
  CHECK(a.log[2].mean_loss > 0.0);

  std::ostringstream csv_a, csv_b;
  write_train_log_csv(csv_a, a.log);
  write_train_log_csv(csv_b, b.log);
  CHECK(csv_a.str() == csv_b.str());
  CHECK(a.net == b.net);
  CHECK(csv_a.str().rfind("episode,cumulative_reward,running_mean_reward,epsilon,mean_loss\n", 0) == 0);
}

TEST_CASE("greedy rollout and its CSV") {
  const NetworkConfig c = small_config();
  const Topology topo = build_topology(c, ScenarioKind::kAllCenter, 11);
  // Always prefers action 0.
  std::vector<double> bias(num_actions(c), 0.0);
  bias[0] = 1.0;
  const QNetwork net = constant_net(observation_size(c), bias);
  const Rollout r = greedy_rollout(net, c, topo, 5);
  REQUIRE(r.steps.size() == 5);
  for (const RolloutStep& s : r.steps) {
    CHECK(s.action == 0);
    CHECK(s.user_rates == r.initial_rates);
  }
  CHECK(r.final_mask == MaskMatrix::all_ones(2, 4));

  std::ostringstream csv;
  write_rollout_csv(csv, r, c);
  std::istringstream lines(csv.str());
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  CHECK(header == "step,action,R_0_0,R_1_0,mask");
  CHECK(first.rfind("0,,", 0) == 0);
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == 5);
}

TEST_CASE("train config validation") {
  TrainConfig t;
  t.gamma = 1.0;
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
  t = TrainConfig{};
  t.epsilon_min = 0.5;
  t.epsilon_init = 0.4;
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
  CHECK_NOTHROW(TrainConfig{}.validate());
}

}  // namespace
}  // namespace icic
