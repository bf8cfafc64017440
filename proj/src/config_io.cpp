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

#include "icic/config_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace icic {

namespace {

using nlohmann::json;

// Binds every config field to its key once, for both directions.
template <typename Visitor>
void visit_fields(RunConfig& c, Visitor&& v) {
  NetworkConfig& n = c.network;
  v("num_cells", n.num_cells);
  v("num_subbands", n.num_subbands);
  v("users_per_cell", n.users_per_cell);
  v("p_max", n.p_max);
  v("total_bandwidth", n.total_bandwidth);
  v("carrier_freq", n.carrier_freq);
  v("cell_radius", n.cell_radius);
  v("edge_fraction", n.edge_fraction);
  v("path_loss_exponent", n.path_loss_exponent);
  v("antenna_gain_ap", n.antenna_gain_ap);
  v("antenna_gain_ue", n.antenna_gain_ue);
  v("noise_psd", n.noise_psd);
  v("r_min", n.r_min);
  v("inter_site_distance", n.inter_site_distance);

  TrainConfig& t = c.train;
  v("gamma", t.gamma);
  v("epsilon_init", t.epsilon_init);
  v("epsilon_min", t.epsilon_min);
  v("epsilon_decay", t.epsilon_decay);
  v("learning_rate", t.learning_rate);
  v("batch_size", t.batch_size);
  v("horizon", t.horizon);
  v("episodes", t.episodes);
  v("rng_seed", t.rng_seed);
  v("hidden_units", t.hidden_units);
  v("replay_capacity", t.replay_capacity);
  v("stability_bonus", t.stability_bonus);
  v("target_sync_interval", t.target_sync_interval);
  v("fixed_placement", t.fixed_placement);
  v("placement_seed", t.placement_seed);
}

}  // namespace

RunConfig parse_run_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a flat JSON object");

  RunConfig config;
  std::size_t matched = 0;
  visit_fields(config, [&](const char* key, auto& field) {
    auto it = doc.find(key);
    if (it == doc.end()) return;
    ++matched;
    try {
      field = it->get<std::remove_reference_t<decltype(field)>>();
    } catch (const json::exception&) {
      throw ConfigError(std::string("config key has the wrong type: ") + key);
    }
  });
  if (matched != doc.size()) {
    RunConfig probe;
    for (const auto& [key, value] : doc.items()) {
      bool known = false;
      visit_fields(probe, [&](const char* name, auto&) { known |= (key == name); });
      if (!known) throw ConfigError("unknown config key: " + key);
    }
  }
  if (doc.contains("cell_radius") && !doc.contains("inter_site_distance")) {
    config.network.inter_site_distance = 1.6 * config.network.cell_radius;
  }
  try {
    config.network.validate();
    config.train.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_run_config(buffer.str());
}

std::string run_config_to_json(const RunConfig& config) {
  json doc = json::object();
  RunConfig copy = config;
  visit_fields(copy, [&](const char* key, auto& field) { doc[key] = field; });
  return doc.dump(2);
}

}  // namespace icic
