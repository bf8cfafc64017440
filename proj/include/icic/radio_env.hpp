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

#ifndef ICIC_RADIO_ENV_HPP_
#define ICIC_RADIO_ENV_HPP_

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace icic {

// Static topology and radio parameters of the downlink network. Powers are in
// dBm, frequencies and bandwidths in Hz, distances in meters, rates in bits/s.
struct NetworkConfig {
  int num_cells = 2;
  int num_subbands = 8;
  int users_per_cell = 1;
  double p_max = 40.0;
  double total_bandwidth = 20e6;
  double carrier_freq = 2.8e9;
  double cell_radius = 400.0;
  // Edge annulus is [(1 - edge_fraction) * r, r].
  double edge_fraction = 0.2;
  double path_loss_exponent = 3.0;
  double antenna_gain_ap = 0.0;
  double antenna_gain_ue = 0.0;
  double noise_psd = -150.0;  // dBm/Hz
  double r_min = 17.82e6;
  double inter_site_distance = 1.6 * 400.0;

  int num_users() const { return num_cells * users_per_cell; }
  double subband_bandwidth() const { return total_bandwidth / num_subbands; }
  double center_radius() const { return (1.0 - edge_fraction) * cell_radius; }

  // Throws std::invalid_argument on a violated invariant.
  void validate() const;
};

enum class ScenarioKind { kAllEdge, kOneEdge, kAllCenter, kUniformRandom };

// Accepts "all-edge", "one-edge", "all-center", "random" and the case-study
// aliases "case1", "case2", "case3".
ScenarioKind parse_scenario(std::string_view name);
std::string scenario_name(ScenarioKind kind);

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Point& a, const Point& b);

// UEs are stored cell-major: UE index i = k * users_per_cell + u was drawn in
// cell k, and placement guarantees association[i] == k.
struct Topology {
  std::vector<Point> ap_positions;
  std::vector<Point> ue_positions;
  std::vector<int> association;
};

// K x N binary activation table. beta(k, n) == 1 means cell k transmits on
// sub-band n, both serving its own UEs and interfering with neighbours there.
class MaskMatrix {
 public:
  MaskMatrix() = default;
  MaskMatrix(int num_cells, int num_subbands, std::uint8_t fill = 0);

  static MaskMatrix all_ones(int num_cells, int num_subbands) {
    return MaskMatrix(num_cells, num_subbands, 1);
  }

  // Bit j of the flattened (row-major) table is bit (K*N - 1 - j) of `index`,
  // so integer order equals lexicographic order of the flattened table.
  static MaskMatrix from_index(int num_cells, int num_subbands,
                               std::uint64_t index);
  std::uint64_t to_index() const;

  int num_cells() const { return num_cells_; }
  int num_subbands() const { return num_subbands_; }

  std::uint8_t operator()(int cell, int subband) const {
    return bits_[static_cast<std::size_t>(cell * num_subbands_ + subband)];
  }
  void set(int cell, int subband, bool on);
  void toggle(int cell, int subband);
  int active_count(int cell) const;

  const std::vector<std::uint8_t>& flat() const { return bits_; }
  // "1011|0100" style, one group per cell.
  std::string to_string() const;

  friend bool operator==(const MaskMatrix&, const MaskMatrix&) = default;

 private:
  int num_cells_ = 0;
  int num_subbands_ = 0;
  std::vector<std::uint8_t> bits_;
};

// Per-cell transmit power, dBm. Each active sub-band carries p[k] - 10 log10 N.
using PowerVector = std::vector<double>;

PowerVector full_power(const NetworkConfig& config);

struct LinkState {
  int num_cells = 0;
  int num_subbands = 0;
  int users_per_cell = 0;

  // gain_db[k * num_users + i]: AP k -> UE i.
  std::vector<double> gain_db;
  // Indexed [i * N + n] for UE i (served by cell i / U) on sub-band n.
  std::vector<double> sinr_db;
  std::vector<int> cqi;
  std::vector<double> rate_per_subband;
  // R_{k,u} at index k * U + u.
  std::vector<double> rate_per_user;
  double total_rate = 0.0;

  double user_rate(int cell, int user) const {
    return rate_per_user[static_cast<std::size_t>(cell * users_per_cell + user)];
  }
  double min_user_rate() const;
  double min_user_rate_in_cell(int cell) const;
  bool all_users_meet(double r_min) const;
};

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

// Log-distance path gain with a 1 m free-space intercept at the carrier
// frequency. Distances below 1 m are clamped to 1 m.
double path_gain_db(double distance_m, const NetworkConfig& config);

// CQI lower-bound SNR thresholds in dB; index 0 is out of range.
inline constexpr std::array<double, 16> kCqiSnrThresholdDb = {
    -std::numeric_limits<double>::infinity(),
    -6.9360, -5.1470, -3.1800, -1.2530, 0.7610,  2.6990,  4.6940,  6.5250,
    8.5730,  10.3660, 12.2890, 14.1730, 15.8880, 17.8140, 19.8290};

struct McsEntry {
  int bits_per_symbol;  // 0 for out of range
  int code_rate_x1024;
};

inline constexpr std::array<McsEntry, 16> kCqiTable = {{{0, 0},
                                                        {2, 78},
                                                        {2, 120},
                                                        {2, 193},
                                                        {2, 308},
                                                        {2, 449},
                                                        {2, 602},
                                                        {4, 378},
                                                        {4, 490},
                                                        {4, 616},
                                                        {6, 466},
                                                        {6, 567},
                                                        {6, 666},
                                                        {6, 772},
                                                        {6, 873},
                                                        {6, 948}}};

// Largest CQI whose threshold is <= sinr_db (thresholds are inclusive).
int snr_to_cqi(double sinr_db);

// Spectral efficiency times bandwidth; no overhead. Throws std::out_of_range
// for cqi outside [0, 15].
double cqi_to_rate(int cqi, double subband_bandwidth_hz);

// Max-RSRP serving cell for every UE, ties to the lowest cell index.
std::vector<int> associate_max_rsrp(const std::vector<Point>& aps,
                                    const std::vector<Point>& ues,
                                    const NetworkConfig& config);

// APs on a horizontal line, inter_site_distance apart. UE placement depends
// on the scenario; every UE is rejection-sampled until its drawing cell is
// also its max-RSRP server.
Topology build_topology(const NetworkConfig& config, ScenarioKind scenario,
                        std::uint64_t rng_seed);

LinkState evaluate_links(const Topology& topology, const MaskMatrix& beta,
                         const PowerVector& power, const NetworkConfig& config);

}  // namespace icic

#endif  // ICIC_RADIO_ENV_HPP_
