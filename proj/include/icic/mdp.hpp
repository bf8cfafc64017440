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

#ifndef ICIC_MDP_HPP_
#define ICIC_MDP_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "icic/radio_env.hpp"

namespace icic {

// Flat observation of length K * (U + N): per-user rates divided by r_min,
// then the mask bits row-major by cell.
using Observation = std::vector<double>;

// 0 is the no-op; 1..K*N toggles one (cell, sub-band) pair.
using ActionId = int;

inline constexpr double kDefaultStabilityBonus = 2.0;

struct Toggle {
  int cell = 0;
  int subband = 0;
  friend bool operator==(const Toggle&, const Toggle&) = default;
};

// std::nullopt is the no-op.
using DecodedAction = std::optional<Toggle>;

inline int num_actions(const NetworkConfig& config) {
  return config.num_cells * config.num_subbands + 1;
}

inline int observation_size(const NetworkConfig& config) {
  return config.num_cells * (config.users_per_cell + config.num_subbands);
}

// Throws std::out_of_range for a outside [0, K*N].
DecodedAction decode_action(ActionId a, const NetworkConfig& config);

MaskMatrix apply_action(const MaskMatrix& beta, const DecodedAction& action);

// Sum over users of min(0, R - r_min) in Mbps, plus `rho` when the action was
// the no-op and no user has a deficit.
double compute_reward(const LinkState& links, bool action_was_noop,
                      double r_min, double rho);

Observation make_observation(const LinkState& links, const MaskMatrix& beta,
                             double r_min);

struct StepResult {
  Observation next_observation;
  double reward = 0.0;
  bool terminal = false;
};

struct EnvState {
  Topology topology;
  MaskMatrix mask;
};

// Applies `a` to state.mask in place, evaluates links at full power and
// scores the result. Requires 0 <= t < horizon.
StepResult env_step(EnvState& state, ActionId a, int t, int horizon,
                    const NetworkConfig& config,
                    double rho = kDefaultStabilityBonus);

struct ResetResult {
  EnvState state;
  Observation observation;
};

// Draws a fresh topology and starts from the all-ones mask.
ResetResult env_reset(const NetworkConfig& config, ScenarioKind scenario,
                      std::uint64_t rng_seed);

// Keeps the topology, restores the all-ones mask.
ResetResult env_reset_mask(const NetworkConfig& config, Topology topology);

}  // namespace icic

#endif  // ICIC_MDP_HPP_
