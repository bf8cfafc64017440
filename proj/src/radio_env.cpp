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

#include "icic/radio_env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace icic {

namespace {

constexpr double kSpeedOfLight = 3e8;
constexpr int kMaxPlacementAttempts = 100000;

void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

}  // namespace

void NetworkConfig::validate() const {
  require(num_cells >= 1, "num_cells must be >= 1");
  require(num_subbands >= 1, "num_subbands must be >= 1");
  require(users_per_cell >= 1, "users_per_cell must be >= 1");
  require(std::isfinite(p_max), "p_max must be finite");
  require(total_bandwidth > 0.0, "total_bandwidth must be > 0");
  require(carrier_freq > 0.0, "carrier_freq must be > 0");
  require(cell_radius > 0.0, "cell_radius must be > 0");
  require(edge_fraction > 0.0 && edge_fraction < 1.0,
          "edge_fraction must lie in (0, 1)");
  require(inter_site_distance > 0.0, "inter_site_distance must be > 0");
  require(r_min >= 0.0, "r_min must be >= 0");
}

ScenarioKind parse_scenario(std::string_view name) {
  if (name == "all-edge" || name == "case1") return ScenarioKind::kAllEdge;
  if (name == "one-edge" || name == "case2") return ScenarioKind::kOneEdge;
  if (name == "all-center" || name == "case3") return ScenarioKind::kAllCenter;
  if (name == "random") return ScenarioKind::kUniformRandom;
  throw std::invalid_argument("unknown scenario: " + std::string(name));
}

std::string scenario_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kAllEdge:
      return "all-edge";
    case ScenarioKind::kOneEdge:
      return "one-edge";
    case ScenarioKind::kAllCenter:
      return "all-center";
    case ScenarioKind::kUniformRandom:
      return "random";
  }
  return "unknown";
}

double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

MaskMatrix::MaskMatrix(int num_cells, int num_subbands, std::uint8_t fill)
    : num_cells_(num_cells),
      num_subbands_(num_subbands),
      bits_(static_cast<std::size_t>(num_cells * num_subbands), fill ? 1 : 0) {}

MaskMatrix MaskMatrix::from_index(int num_cells, int num_subbands,
                                  std::uint64_t index) {
  MaskMatrix mask(num_cells, num_subbands);
  const int total = num_cells * num_subbands;
  for (int j = 0; j < total; ++j) {
    mask.bits_[static_cast<std::size_t>(j)] = (index >> (total - 1 - j)) & 1U;
  }
  return mask;
}

std::uint64_t MaskMatrix::to_index() const {
  std::uint64_t index = 0;
  for (std::uint8_t bit : bits_) index = (index << 1) | bit;
  return index;
}

void MaskMatrix::set(int cell, int subband, bool on) {
  bits_.at(static_cast<std::size_t>(cell * num_subbands_ + subband)) = on;
}

void MaskMatrix::toggle(int cell, int subband) {
  auto& bit = bits_.at(static_cast<std::size_t>(cell * num_subbands_ + subband));
  bit ^= 1U;
}

int MaskMatrix::active_count(int cell) const {
  int count = 0;
  for (int n = 0; n < num_subbands_; ++n) count += (*this)(cell, n);
  return count;
}

std::string MaskMatrix::to_string() const {
  std::string out;
  for (int k = 0; k < num_cells_; ++k) {
    if (k > 0) out += '|';
    for (int n = 0; n < num_subbands_; ++n) out += (*this)(k, n) ? '1' : '0';
  }
  return out;
}

PowerVector full_power(const NetworkConfig& config) {
  return PowerVector(static_cast<std::size_t>(config.num_cells), config.p_max);
}

double LinkState::min_user_rate() const {
  return *std::min_element(rate_per_user.begin(), rate_per_user.end());
}

double LinkState::min_user_rate_in_cell(int cell) const {
  double lowest = std::numeric_limits<double>::infinity();
  for (int u = 0; u < users_per_cell; ++u) {
    lowest = std::min(lowest, user_rate(cell, u));
  }
  return lowest;
}

bool LinkState::all_users_meet(double r_min) const {
  return std::all_of(rate_per_user.begin(), rate_per_user.end(),
                     [r_min](double r) { return r >= r_min; });
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

double path_gain_db(double distance_m, const NetworkConfig& config) {
  const double d = std::max(distance_m, 1.0);
  const double intercept_db = 20.0 * std::log10(4.0 * std::numbers::pi *
                                                config.carrier_freq /
                                                kSpeedOfLight);
  return -(intercept_db + 10.0 * config.path_loss_exponent * std::log10(d)) +
         config.antenna_gain_ap + config.antenna_gain_ue;
}

int snr_to_cqi(double sinr_db) {
  // Thresholds are ascending; find the last one that is <= sinr_db.
  auto it = std::upper_bound(kCqiSnrThresholdDb.begin() + 1,
                             kCqiSnrThresholdDb.end(), sinr_db);
  return static_cast<int>(it - kCqiSnrThresholdDb.begin()) - 1;
}

double cqi_to_rate(int cqi, double subband_bandwidth_hz) {
  if (cqi < 0 || cqi > 15) throw std::out_of_range("cqi outside [0, 15]");
  const McsEntry& mcs = kCqiTable[static_cast<std::size_t>(cqi)];
  return mcs.bits_per_symbol * (mcs.code_rate_x1024 / 1024.0) *
         subband_bandwidth_hz;
}

std::vector<int> associate_max_rsrp(const std::vector<Point>& aps,
                                    const std::vector<Point>& ues,
                                    const NetworkConfig& config) {
  // Reference signals go out at p_max / N on every cell, so RSRP ordering is
  // path gain ordering.
  const double ref_dbm = config.p_max - 10.0 * std::log10(config.num_subbands);
  std::vector<int> serving(ues.size(), 0);
  for (std::size_t i = 0; i < ues.size(); ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < aps.size(); ++k) {
      const double rsrp = ref_dbm + path_gain_db(distance(aps[k], ues[i]), config);
      if (rsrp > best) {
        best = rsrp;
        serving[i] = static_cast<int>(k);
      }
    }
  }
  return serving;
}

Topology build_topology(const NetworkConfig& config, ScenarioKind scenario,
                        std::uint64_t rng_seed) {
  config.validate();
  const int num_cells = config.num_cells;
  const double radius = config.cell_radius;
  const double inner = config.center_radius();

  Topology topo;
  for (int k = 0; k < num_cells; ++k) {
    topo.ap_positions.push_back({k * config.inter_site_distance, 0.0});
  }

  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Uniform-by-area radius in [r_lo, r_hi).
  auto sample_radius = [&](double r_lo, double r_hi) {
    return std::sqrt(r_lo * r_lo + unit(rng) * (r_hi * r_hi - r_lo * r_lo));
  };

  for (int k = 0; k < num_cells; ++k) {
    bool edge = false;
    switch (scenario) {
      case ScenarioKind::kAllEdge:
        edge = true;
        break;
      case ScenarioKind::kOneEdge:
        edge = (k == 0);
        break;
      default:
        break;
    }
    // Edge UEs sit on the half facing the nearest neighbour: the next cell
    // along the line, or the previous one for the last cell.
    const double facing = (k + 1 < num_cells || num_cells == 1) ? 0.0
                                                                 : std::numbers::pi;
    const Point& ap = topo.ap_positions[static_cast<std::size_t>(k)];

    for (int u = 0; u < config.users_per_cell; ++u) {
      Point ue;
      bool placed = false;
      for (int attempt = 0; attempt < kMaxPlacementAttempts && !placed;
           ++attempt) {
        double r = 0.0;
        double theta = 0.0;
        if (edge) {
          r = sample_radius(inner, radius);
          theta = facing + (unit(rng) - 0.5) * std::numbers::pi;
        } else {
          const double outer =
              scenario == ScenarioKind::kUniformRandom ? radius : inner;
          r = sample_radius(0.0, outer);
          theta = unit(rng) * 2.0 * std::numbers::pi;
        }
        ue = {ap.x + r * std::cos(theta), ap.y + r * std::sin(theta)};
        placed = associate_max_rsrp(topo.ap_positions, {ue}, config)[0] == k;
      }
      if (!placed) {
        throw std::invalid_argument(
            "cannot place a UE served by its own cell; check geometry");
      }
      topo.ue_positions.push_back(ue);
    }
  }
  topo.association =
      associate_max_rsrp(topo.ap_positions, topo.ue_positions, config);
  return topo;
}

LinkState evaluate_links(const Topology& topology, const MaskMatrix& beta,
                         const PowerVector& power, const NetworkConfig& config) {
  const int num_cells = config.num_cells;
  const int num_subbands = config.num_subbands;
  const int per_cell = config.users_per_cell;
  const int num_users = config.num_users();
  if (static_cast<int>(power.size()) != num_cells) {
    throw std::invalid_argument("power vector size != num_cells");
  }
  for (double p : power) {
    if (!(p <= config.p_max)) throw std::invalid_argument("power above p_max");
  }
  if (beta.num_cells() != num_cells || beta.num_subbands() != num_subbands) {
    throw std::invalid_argument("mask dimensions do not match config");
  }

  LinkState links;
  links.num_cells = num_cells;
  links.num_subbands = num_subbands;
  links.users_per_cell = per_cell;
  links.gain_db.resize(num_cells * num_users);
  for (int k = 0; k < num_cells; ++k) {
    for (int i = 0; i < num_users; ++i) {
      links.gain_db[k * num_users + i] = path_gain_db(
          distance(topology.ap_positions[k], topology.ue_positions[i]), config);
    }
  }

  const double split_db = 10.0 * std::log10(num_subbands);
  const double bandwidth = config.subband_bandwidth();
  const double noise_mw =
      dbm_to_mw(config.noise_psd + 10.0 * std::log10(bandwidth));

  // Per-sub-band received power from AP k at UE i, same layout as gain_db.
  std::vector<double> rx_mw(links.gain_db.size());
  for (int k = 0; k < num_cells; ++k) {
    for (int i = 0; i < num_users; ++i) {
      rx_mw[k * num_users + i] =
          dbm_to_mw(power[k] - split_db + links.gain_db[k * num_users + i]);
    }
  }

  links.sinr_db.assign(num_users * num_subbands, 0.0);
  links.cqi.assign(num_users * num_subbands, 0);
  links.rate_per_subband.assign(num_users * num_subbands, 0.0);
  links.rate_per_user.assign(num_users, 0.0);

  for (int i = 0; i < num_users; ++i) {
    const int serving = topology.association[i];
    if (serving != i / per_cell) {
      throw std::invalid_argument("UE not served by the cell it belongs to");
    }
    const double signal = rx_mw[serving * num_users + i];
    double user_rate = 0.0;
    for (int n = 0; n < num_subbands; ++n) {
      double interference = 0.0;
      for (int k = 0; k < num_cells; ++k) {
        if (k != serving && beta(k, n)) interference += rx_mw[k * num_users + i];
      }
      const int idx = i * num_subbands + n;
      links.sinr_db[idx] = 10.0 * std::log10(signal / (interference + noise_mw));
      links.cqi[idx] = snr_to_cqi(links.sinr_db[idx]);
      links.rate_per_subband[idx] = cqi_to_rate(links.cqi[idx], bandwidth);
      if (beta(serving, n)) user_rate += links.rate_per_subband[idx];
    }
    links.rate_per_user[i] = user_rate;
  }

  links.total_rate = 0.0;
  for (double r : links.rate_per_user) links.total_rate += r;
  return links;
}

}  // namespace icic
