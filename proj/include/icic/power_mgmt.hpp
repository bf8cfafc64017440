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

#ifndef ICIC_POWER_MGMT_HPP_
#define ICIC_POWER_MGMT_HPP_

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "icic/radio_env.hpp"

namespace icic {

inline constexpr double kDefaultPowerStepDb = 0.5;
inline constexpr double kPowerFloorDbm = 0.0;

// The mask leaves some user below r_min even with every cell at p_max.
class InfeasibleAtFullPower : public std::runtime_error {
 public:
  InfeasibleAtFullPower(int user_index, double user_rate, double r_min);

  int user_index() const { return user_index_; }
  double user_rate() const { return user_rate_; }

 private:
  int user_index_;
  double user_rate_;
};

struct PowerTraceEntry {
  int iteration = 0;
  int target_cell = -1;  // -1 for the initial full-power record
  PowerVector power;
  std::vector<double> user_rates;  // bits/s
};

struct PowerResult {
  PowerVector power;
  std::vector<PowerTraceEntry> trace;
};

// Throws InfeasibleAtFullPower naming the weakest user if the mask is not
// feasible at full power.
void require_feasible_at_full_power(const Topology& topology,
                                    const MaskMatrix& beta,
                                    const NetworkConfig& config);

// Greedy per-cell power reduction with the mask held fixed. Each round picks
// the non-exhausted cell whose weakest user has the highest rate, lowers it by
// p_step, and keeps the step only if every user in the network still meets
// r_min. A rejected cell is exhausted until some other cell's power changes.
// The trace holds the initial state and every accepted step.
PowerResult reduce_power(const Topology& topology, const MaskMatrix& beta,
                         const NetworkConfig& config,
                         double p_step = kDefaultPowerStepDb);

// CSV: iteration,cell,p_0..p_{K-1} (dBm),R_0_0..R_{K-1}_{U-1} (Mbps)
void write_power_trace_csv(std::ostream& out,
                           const std::vector<PowerTraceEntry>& trace,
                           const NetworkConfig& config);

}  // namespace icic

#endif  // ICIC_POWER_MGMT_HPP_
