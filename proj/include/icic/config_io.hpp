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

#ifndef ICIC_CONFIG_IO_HPP_
#define ICIC_CONFIG_IO_HPP_

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "icic/dqn.hpp"
#include "icic/radio_env.hpp"

namespace icic {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  NetworkConfig network;
  TrainConfig train;
};

// A single flat JSON object whose keys are NetworkConfig and TrainConfig
// field names. Missing keys keep their defaults; unknown keys are rejected.
// When cell_radius is given without inter_site_distance, the latter follows
// as 1.6 * cell_radius.
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);

// Every key, pretty-printed.
std::string run_config_to_json(const RunConfig& config);

}  // namespace icic

#endif  // ICIC_CONFIG_IO_HPP_
