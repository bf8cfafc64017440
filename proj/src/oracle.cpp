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

#include "icic/oracle.hpp"

#include <cmath>
#include <ostream>

#include "icic/power_mgmt.hpp"

namespace icic {

OracleResult exhaustive_mask_search(const Topology& topology,
                                    const NetworkConfig& config) {
  const int bits = config.num_cells * config.num_subbands;
  if (bits > kMaxOracleMaskBits) {
    throw InstanceTooLarge("exhaustive mask search is capped at 2^20 masks");
  }
  const PowerVector power = full_power(config);
  const std::uint64_t count = std::uint64_t{1} << bits;

  OracleResult result;
  result.records.reserve(count);
  bool have_max_min = false;
  std::optional<std::uint64_t> best_index;
  double best_total = 0.0;
  for (std::uint64_t index = 0; index < count; ++index) {
    const MaskMatrix mask =
        MaskMatrix::from_index(config.num_cells, config.num_subbands, index);
    const LinkState links = evaluate_links(topology, mask, power, config);
    MaskRecord record{index, links.all_users_meet(config.r_min),
                      links.total_rate, links.min_user_rate()};
    if (record.feasible) {
      result.feasible_masks.push_back(mask);
      // Index order is lexicographic order, so strict > keeps the smallest.
      if (!best_index || record.total_rate > best_total) {
        best_index = index;
        best_total = record.total_rate;
      }
    }
    if (!have_max_min || record.min_user_rate > result.max_min_user_rate) {
      have_max_min = true;
      result.max_min_user_rate = record.min_user_rate;
      result.max_min_mask = mask;
    }
    result.records.push_back(record);
  }
  if (best_index) {
    result.best_mask =
        MaskMatrix::from_index(config.num_cells, config.num_subbands, *best_index);
  }
  return result;
}

PowerVector power_grid_search(const Topology& topology, const MaskMatrix& beta,
                              const NetworkConfig& config, double p_step) {
  if (config.num_cells > kMaxOracleGridCells) {
    throw InstanceTooLarge("power grid search is capped at 3 cells");
  }
  if (!(p_step > 0.0)) throw std::invalid_argument("p_step must be > 0");
  require_feasible_at_full_power(topology, beta, config);

  const int num_cells = config.num_cells;
  const int levels =
      static_cast<int>(std::floor((config.p_max - kPowerFloorDbm) / p_step)) + 1;
  // Level j maps to the j-th smallest lattice power.
  auto level_power = [&](int j) { return config.p_max - (levels - 1 - j) * p_step; };

  std::vector<int> digits(static_cast<std::size_t>(num_cells), 0);
  PowerVector best;
  double best_sum = 0.0;
  PowerVector power(static_cast<std::size_t>(num_cells));
  while (true) {
    double sum = 0.0;
    for (int k = 0; k < num_cells; ++k) {
      power[k] = level_power(digits[k]);
      sum += power[k];
    }
    // Odometer order is lexicographic in power, so strict < keeps the
    // lexicographically smallest optimum.
    if (best.empty() || sum < best_sum) {
      if (evaluate_links(topology, beta, power, config).all_users_meet(config.r_min)) {
        best = power;
        best_sum = sum;
      }
    }
    int k = num_cells - 1;
    while (k >= 0 && ++digits[k] == levels) digits[k--] = 0;
    if (k < 0) break;
  }
  return best;
}

void write_oracle_csv(std::ostream& out, const OracleResult& result,
                      const NetworkConfig& config) {
  const auto old_precision = out.precision(10);
  out << "mask,feasible,total_rate_mbps,min_user_rate_mbps\n";
  for (const MaskRecord& r : result.records) {
    out << MaskMatrix::from_index(config.num_cells, config.num_subbands, r.index)
               .to_string()
        << ',' << (r.feasible ? 1 : 0) << ',' << r.total_rate / 1e6 << ','
        << r.min_user_rate / 1e6 << '\n';
  }
  out.precision(old_precision);
}

}  // namespace icic
