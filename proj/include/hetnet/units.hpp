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
#include <limits>
#include <stdexcept>
#include <string>

namespace hetnet {

/// Densities are kept in BS/m^2 internally; the command line speaks BS/km^2.
inline constexpr double kPerKm2ToPerM2 = 1e-6;

/// Noise level that stands for an interference-limited (noiseless) network.
inline constexpr double kNoiseless = -std::numeric_limits<double>::infinity();

inline double db_to_linear(double x_db) {
  if (!std::isfinite(x_db))
    throw std::invalid_argument("db_to_linear: non-finite input " + std::to_string(x_db));
  return std::pow(10.0, x_db / 10.0);
}

inline double linear_to_db(double x) {
  if (!(x > 0.0))
    throw std::invalid_argument("linear_to_db: non-positive input " + std::to_string(x));
  return 10.0 * std::log10(x);
}

inline double dbm_to_watts(double p_dbm) { return db_to_linear(p_dbm - 30.0); }

/// Like dbm_to_watts, but maps kNoiseless to exactly zero.
inline double noise_dbm_to_watts(double noise_dbm) {
  if (noise_dbm == kNoiseless) return 0.0;
  return dbm_to_watts(noise_dbm);
}

inline double per_km2_to_per_m2(double density_per_km2) { return density_per_km2 * kPerKm2ToPerM2; }
inline double per_m2_to_per_km2(double density_per_m2) { return density_per_m2 / kPerKm2ToPerM2; }

}  // namespace hetnet
