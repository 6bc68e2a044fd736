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

#pragma once

#include <cmath>

#include "hetnet/model.hpp"

namespace hetnet::testing {

/// One tier, no blockage, no shadowing, no noise, exponent 4, B = 1.
inline NetworkConfig reference_single_tier(double threshold_db, double density = 1e-4) {
  NetworkConfig cfg;
  cfg.noise_dbm = kNoiseless;
  cfg.los_model = los::AlwaysNlos{};
  TierParams t;
  t.name = "only";
  t.density = density;
  t.tx_power_dbm = 30.0;  // 1 W, and 0 dB intercepts give B = 1
  t.alpha_nl = 4.0;
  t.alpha_l = 4.0;
  t.sinr_threshold_db = threshold_db;
  cfg.tiers = {t};
  return cfg;
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace hetnet::testing
