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

#ifndef ICIC_ORACLE_HPP_
#define ICIC_ORACLE_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

#include "icic/radio_env.hpp"

namespace icic {

// Brute-force baselines for small instances. Nothing here is clever on
// purpose: every mask or power point is evaluated from scratch.

inline constexpr int kMaxOracleMaskBits = 20;
inline constexpr int kMaxOracleGridCells = 3;

class InstanceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MaskRecord {
  std::uint64_t index = 0;  // MaskMatrix::from_index encoding
  bool feasible = false;
  double total_rate = 0.0;     // bits/s at full power
  double min_user_rate = 0.0;  // bits/s at full power
};

struct OracleResult {
  // One record per mask, in index order.
  std::vector<MaskRecord> records;
  std::vector<MaskMatrix> feasible_masks;
  // Feasible mask with the highest total rate; ties to the lexicographically
  // smallest flattened mask. Empty when nothing is feasible.
  std::optional<MaskMatrix> best_mask;
  // Highest min-user rate over all masks (feasible or not) and its mask.
  double max_min_user_rate = 0.0;
  MaskMatrix max_min_mask;
  // Filled by callers that also run power_grid_search on best_mask.
  std::optional<PowerVector> min_power;
};

// Enumerates all 2^(K*N) masks at full power. Throws InstanceTooLarge when
// K*N exceeds kMaxOracleMaskBits.
OracleResult exhaustive_mask_search(const Topology& topology,
                                    const NetworkConfig& config);

// Scans the per-cell lattice {p_max - i * p_step >= 0 dBm} and returns the
// feasible vector with the smallest dBm sum (ties to the lexicographically
// smallest). Throws InfeasibleAtFullPower or InstanceTooLarge.
PowerVector power_grid_search(const Topology& topology, const MaskMatrix& beta,
                              const NetworkConfig& config, double p_step);

// CSV: mask,feasible,total_rate_mbps,min_user_rate_mbps
void write_oracle_csv(std::ostream& out, const OracleResult& result,
                      const NetworkConfig& config);

}  // namespace icic

#endif  // ICIC_ORACLE_HPP_
