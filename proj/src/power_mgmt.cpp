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

#include "icic/power_mgmt.hpp"

#include <ostream>
#include <sstream>

namespace icic {

namespace {

std::string infeasible_message(int user_index, double user_rate, double r_min) {
  std::ostringstream msg;
  msg << "mask infeasible at full power: user " << user_index << " gets "
      << user_rate / 1e6 << " Mbps < r_min " << r_min / 1e6 << " Mbps";
  return msg.str();
}

}  // namespace

InfeasibleAtFullPower::InfeasibleAtFullPower(int user_index, double user_rate,
                                             double r_min)
    : std::runtime_error(infeasible_message(user_index, user_rate, r_min)),
      user_index_(user_index),
      user_rate_(user_rate) {}

void require_feasible_at_full_power(const Topology& topology,
                                    const MaskMatrix& beta,
                                    const NetworkConfig& config) {
  const LinkState links =
      evaluate_links(topology, beta, full_power(config), config);
  int weakest = 0;
  for (std::size_t i = 1; i < links.rate_per_user.size(); ++i) {
    if (links.rate_per_user[i] < links.rate_per_user[weakest]) {
      weakest = static_cast<int>(i);
    }
  }
  if (links.rate_per_user[weakest] < config.r_min) {
    throw InfeasibleAtFullPower(weakest, links.rate_per_user[weakest],
                                config.r_min);
  }
}

PowerResult reduce_power(const Topology& topology, const MaskMatrix& beta,
                         const NetworkConfig& config, double p_step) {
  if (!(p_step > 0.0)) throw std::invalid_argument("p_step must be > 0");
  require_feasible_at_full_power(topology, beta, config);

  const int num_cells = config.num_cells;
  PowerResult result;
  result.power = full_power(config);
  LinkState links = evaluate_links(topology, beta, result.power, config);
  result.trace.push_back({0, -1, result.power, links.rate_per_user});

  std::vector<bool> exhausted(static_cast<std::size_t>(num_cells), false);
  int iteration = 0;
  while (true) {
    int target = -1;
    double target_rate = 0.0;
    for (int k = 0; k < num_cells; ++k) {
      if (exhausted[k]) continue;
      if (result.power[k] - p_step < kPowerFloorDbm) {
        exhausted[k] = true;
        continue;
      }
      const double weakest = links.min_user_rate_in_cell(k);
      if (target < 0 || weakest > target_rate) {
        target = k;
        target_rate = weakest;
      }
    }
    if (target < 0) break;

    PowerVector trial = result.power;
    trial[target] -= p_step;
    LinkState trial_links = evaluate_links(topology, beta, trial, config);
    ++iteration;
    if (!trial_links.all_users_meet(config.r_min)) {
      exhausted[target] = true;
      continue;
    }
    result.power = std::move(trial);
    links = std::move(trial_links);
    for (int k = 0; k < num_cells; ++k) {
      if (k != target) exhausted[k] = false;
    }
    result.trace.push_back({iteration, target, result.power, links.rate_per_user});
  }
  return result;
}

void write_power_trace_csv(std::ostream& out,
                           const std::vector<PowerTraceEntry>& trace,
                           const NetworkConfig& config) {
  const auto old_precision = out.precision(10);
  out << "iteration,cell";
  for (int k = 0; k < config.num_cells; ++k) out << ",p_" << k;
  for (int k = 0; k < config.num_cells; ++k) {
    for (int u = 0; u < config.users_per_cell; ++u) out << ",R_" << k << '_' << u;
  }
  out << '\n';
  for (const PowerTraceEntry& e : trace) {
    out << e.iteration << ',' << e.target_cell;
    for (double p : e.power) out << ',' << p;
    for (double r : e.user_rates) out << ',' << r / 1e6;
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace icic
