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

#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "icic/oracle.hpp"
#include "icic/power_mgmt.hpp"

namespace icic {
namespace {

NetworkConfig four_subbands(int cells = 2) {
  NetworkConfig c;
  c.num_cells = cells;
  c.num_subbands = 4;
  return c;
}

bool feasible(const Topology& topo, const MaskMatrix& beta, const PowerVector& p,
              const NetworkConfig& c) {
  return evaluate_links(topo, beta, p, c).all_users_meet(c.r_min);
}

// Checks the invariants every reduce_power result must satisfy.
void check_result(const PowerResult& r, const Topology& topo, const MaskMatrix& beta,
                  const NetworkConfig& c, double step) {
  REQUIRE_FALSE(r.trace.empty());
  CHECK(r.trace.front().target_cell == -1);
  CHECK(r.trace.front().power == full_power(c));
  CHECK(r.trace.back().power == r.power);
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    for (int k = 0; k < c.num_cells; ++k) {
      CHECK(r.trace[i].power[k] <= r.trace[i - 1].power[k]);
    }
    CHECK(r.trace[i].iteration > r.trace[i - 1].iteration);
    for (double rate : r.trace[i].user_rates) CHECK(rate >= c.r_min);
  }
  CHECK(feasible(topo, beta, r.power, c));
  for (int k = 0; k < c.num_cells; ++k) {
    CHECK(r.power[k] >= kPowerFloorDbm);
    CHECK(r.power[k] <= c.p_max);
    PowerVector lower = r.power;
    lower[k] -= step;
    // Local minimality: no single further step is both legal and feasible.
    CHECK((lower[k] < kPowerFloorDbm || !feasible(topo, beta, lower, c)));
  }
}

TEST_CASE("single cell stops at the binding constraint") {
  NetworkConfig c = four_subbands(1);
  const Topology topo = build_topology(c, ScenarioKind::kAllEdge, 5);
  const MaskMatrix beta = MaskMatrix::all_ones(1, 4);
  // Demand 60% of the full-power rate so the floor is not reached.
  c.r_min = 0.6 * evaluate_links(topo, beta, full_power(c), c).min_user_rate();
  const PowerResult r = reduce_power(topo, beta, c);
  check_result(r, topo, beta, c, 0.5);
  CHECK(r.power[0] < c.p_max);
  CHECK(r.power[0] > kPowerFloorDbm);
  CHECK_FALSE(feasible(topo, beta, {r.power[0] - 0.5}, c));
  CHECK(r.power == power_grid_search(topo, beta, c, 0.5));
}

TEST_CASE("single cell with a trivial demand descends to the floor") {
  NetworkConfig c = four_subbands(1);
  c.r_min = 1.0;
  c.noise_psd = -200.0;  // keeps every sub-band decodable at 0 dBm
  const Topology topo = build_topology(c, ScenarioKind::kAllCenter, 2);
  const PowerResult r = reduce_power(topo, MaskMatrix::all_ones(1, 4), c);
  CHECK(r.power[0] == 0.0);
  CHECK(r.trace.size() == 81);
}

TEST_CASE("lowering one cell's power helps the other cell") {
  const NetworkConfig c = four_subbands(2);
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const Topology topo = build_topology(c, ScenarioKind::kUniformRandom, rng());
    const MaskMatrix beta = MaskMatrix::from_index(2, 4, rng() & 0xFF);
    PowerVector p = {std::uniform_real_distribution<double>(5.0, 40.0)(rng),
                     std::uniform_real_distribution<double>(5.0, 40.0)(rng)};
    const LinkState before = evaluate_links(topo, beta, p, c);
    p[0] -= 3.0;
    const LinkState after = evaluate_links(topo, beta, p, c);
    CHECK(after.user_rate(0, 0) <= before.user_rate(0, 0));
    CHECK(after.user_rate(1, 0) >= before.user_rate(1, 0));
  }
}

TEST_CASE("greedy matches the grid optimum on the reference fixtures") {
  SUBCASE("all-centre, default r_min") {
    const NetworkConfig c = four_subbands();
    const Topology topo = build_topology(c, ScenarioKind::kAllCenter, 11);
    const MaskMatrix beta = MaskMatrix::all_ones(2, 4);
    const PowerResult r = reduce_power(topo, beta, c);
    check_result(r, topo, beta, c, 0.5);
    CHECK(r.power == PowerVector{31.0, 36.0});
    CHECK(power_grid_search(topo, beta, c, 0.5) == r.power);
  }
  SUBCASE("all-edge, scaled r_min") {
    NetworkConfig c = four_subbands();
    const Topology topo = build_topology(c, ScenarioKind::kAllEdge, 3);
    const MaskMatrix beta = MaskMatrix::all_ones(2, 4);
    c.r_min = 0.6 * exhaustive_mask_search(topo, c).max_min_user_rate;
    const PowerResult r = reduce_power(topo, beta, c);
    check_result(r, topo, beta, c, 0.5);
    CHECK(r.power == PowerVector{37.0, 37.5});
    CHECK(power_grid_search(topo, beta, c, 0.5) == r.power);
  }
  SUBCASE("one edge user, scaled r_min") {
    NetworkConfig c = four_subbands();
    const Topology topo = build_topology(c, ScenarioKind::kOneEdge, 3);
    const MaskMatrix beta = MaskMatrix::all_ones(2, 4);
    c.r_min = 0.6 * exhaustive_mask_search(topo, c).max_min_user_rate;
    const PowerResult r = reduce_power(topo, beta, c);
    check_result(r, topo, beta, c, 0.5);
    CHECK(r.power == PowerVector{36.5, 31.5});
    CHECK(power_grid_search(topo, beta, c, 0.5) == r.power);
  }
}

TEST_CASE("invariants hold across random feasible instances") {
  NetworkConfig c = four_subbands();
  std::mt19937_64 rng(99);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const Topology topo = build_topology(c, ScenarioKind::kUniformRandom, rng());
    const MaskMatrix beta = MaskMatrix::all_ones(2, 4);
    c.r_min = 0.5 * evaluate_links(topo, beta, full_power(c), c).min_user_rate();
    if (c.r_min <= 0.0) continue;
    const double step = trial % 2 == 0 ? 0.5 : 1.0;
    const PowerResult r = reduce_power(topo, beta, c, step);
    check_result(r, topo, beta, c, step);
    ++checked;
  }
  CHECK(checked > 30);
}

TEST_CASE("infeasible masks are rejected before any reduction") {
  const NetworkConfig c = four_subbands();
  const Topology topo = build_topology(c, ScenarioKind::kAllEdge, 3);
  // The default r_min is out of reach for edge users.
  CHECK_THROWS_AS(reduce_power(topo, MaskMatrix::all_ones(2, 4), c), InfeasibleAtFullPower);
  try {
    require_feasible_at_full_power(topo, MaskMatrix(2, 4), c);
    FAIL("expected InfeasibleAtFullPower");
  } catch (const InfeasibleAtFullPower& e) {
    CHECK(e.user_rate() == 0.0);
    CHECK(std::string(e.what()).find("Mbps") != std::string::npos);
  }
  CHECK_THROWS_AS(reduce_power(topo, MaskMatrix::all_ones(2, 4), c, 0.0), std::invalid_argument);
}

TEST_CASE("power trace CSV") {
  const NetworkConfig c = four_subbands();
  const Topology topo = build_topology(c, ScenarioKind::kAllCenter, 11);
  const PowerResult r = reduce_power(topo, MaskMatrix::all_ones(2, 4), c);
  std::ostringstream out;
  write_power_trace_csv(out, r.trace, c);
  std::istringstream lines(out.str());
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  CHECK(header == "iteration,cell,p_0,p_1,R_0_0,R_1_0");
  CHECK(first.rfind("0,-1,40,40,", 0) == 0);
  std::size_t rows = 1;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == r.trace.size());
}

}  // namespace
}  // namespace icic
