// Copyright 2026 The hetnet-ee Authors
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

/// \file scenario.hpp
/// YAML scenario files. Keys carry their unit, e.g. `density_per_km2`,
/// `tx_power_dbm`, `sinr_threshold_db`; unknown keys are rejected so that a
/// misspelt unit suffix cannot be silently ignored. See scenarios/*.yaml.

#pragma once

#include <string>
#include <string_view>

#include "hetnet/model.hpp"

namespace hetnet {

/// Throws ConfigError naming the offending key.
NetworkConfig parse_scenario(const std::string& yaml_text);
NetworkConfig load_scenario(const std::string& path);

/// Round-trips through parse_scenario.
std::string dump_scenario(const NetworkConfig& cfg);

/// "exponential:KAPPA", "3gpp-linear:D1", "3gpp-two-piece:D0:D1" or "always-nlos".
LosModel parse_los_spec(std::string_view spec);

PowerModel parse_power_model(std::string_view name);
std::string_view to_string(PowerModel m);

}  // namespace hetnet
