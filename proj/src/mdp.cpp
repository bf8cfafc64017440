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

#include "icic/mdp.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace icic {

DecodedAction decode_action(ActionId a, const NetworkConfig& config) {
  const int toggles = config.num_cells * config.num_subbands;
  if (a < 0 || a > toggles) throw std::out_of_range("action id out of range");
  if (a == 0) return std::nullopt;
  return Toggle{(a - 1) / config.num_subbands, (a - 1) % config.num_subbands};
}

MaskMatrix apply_action(const MaskMatrix& beta, const DecodedAction& action) {
  MaskMatrix next = beta;
  if (action) next.toggle(action->cell, action->subband);
  return next;
}

double compute_reward(const LinkState& links, bool action_was_noop,
                      double r_min, double rho) {
  double deficit = 0.0;
  for (double rate : links.rate_per_user) {
    deficit += std::min(0.0, (rate - r_min) / 1e6);
  }
  if (action_was_noop && deficit == 0.0) return deficit + rho;
  return deficit;
}

Observation make_observation(const LinkState& links, const MaskMatrix& beta,
                             double r_min) {
  Observation obs;
  obs.reserve(links.rate_per_user.size() + beta.flat().size());
  for (double rate : links.rate_per_user) obs.push_back(rate / r_min);
  for (std::uint8_t bit : beta.flat()) obs.push_back(bit);
  return obs;
}

StepResult env_step(EnvState& state, ActionId a, int t, int horizon,
                    const NetworkConfig& config, double rho) {
  if (t < 0 || t >= horizon) throw std::out_of_range("step index past horizon");
  const DecodedAction action = decode_action(a, config);
  state.mask = apply_action(state.mask, action);
  const LinkState links =
      evaluate_links(state.topology, state.mask, full_power(config), config);

  StepResult result;
  result.reward = compute_reward(links, !action.has_value(), config.r_min, rho);
  result.next_observation = make_observation(links, state.mask, config.r_min);
  result.terminal = (t + 1 == horizon);
  return result;
}

ResetResult env_reset_mask(const NetworkConfig& config, Topology topology) {
  ResetResult reset;
  reset.state.topology = std::move(topology);
  reset.state.mask = MaskMatrix::all_ones(config.num_cells, config.num_subbands);
  const LinkState links = evaluate_links(reset.state.topology, reset.state.mask,
                                         full_power(config), config);
  reset.observation = make_observation(links, reset.state.mask, config.r_min);
  return reset;
}

ResetResult env_reset(const NetworkConfig& config, ScenarioKind scenario,
                      std::uint64_t rng_seed) {
  return env_reset_mask(config, build_topology(config, scenario, rng_seed));
}

}  // namespace icic
