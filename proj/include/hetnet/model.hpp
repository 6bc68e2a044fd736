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

/// \file model.hpp
/// Domain vocabulary of a K-tier heterogeneous network: tiers, blockage
/// (NLoS/LoS) probability, transmit power rules and the energy model.
///
/// Conventions used throughout the library:
///   - path-loss intercepts are dB losses at 1 m, PL_dB(d) = A + 10 alpha log10(d);
///   - shadowing is log-normal in the dB domain, g = 10^(X/10), X ~ N(0, sigma_dB^2);
///   - densities are BS/m^2, powers are watts, thresholds are linear
///     except in fields carrying a `_db`/`_dbm` suffix.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hetnet/units.hpp"

namespace hetnet {

/// Raised for invalid scenario data; `field()` names the offending entry.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class Link { NLoS = 0, LoS = 1 };

inline constexpr Link kLinks[] = {Link::NLoS, Link::LoS};

std::string_view to_string(Link link);

struct TierParams {
  std::string name;
  double density = 0.0;  // BS/m^2
  double tx_power_dbm = 0.0;
  double pl_intercept_nl_db = 0.0;
  double pl_intercept_l_db = 0.0;
  double alpha_nl = 4.0;
  double alpha_l = 4.0;
  double shadow_sigma_nl_db = 0.0;
  double shadow_sigma_l_db = 0.0;
  double sinr_threshold_db = 0.0;
  double energy_a = 1.0;
  double energy_b = 0.0;  // W

  double alpha(Link link) const { return link == Link::NLoS ? alpha_nl : alpha_l; }
  double shadow_sigma_db(Link link) const {
    return link == Link::NLoS ? shadow_sigma_nl_db : shadow_sigma_l_db;
  }
  double pl_intercept_db(Link link) const {
    return link == Link::NLoS ? pl_intercept_nl_db : pl_intercept_l_db;
  }
  double threshold() const { return db_to_linear(sinr_threshold_db); }
};

namespace los {

/// p^L(d) = exp(-kappa d).
struct Exponential {
  double kappa = 0.0;  // 1/m
};

/// p^L(d) = max(0, 1 - d/d1).
struct ThreeGppLinear {
  double d1 = 1.0;  // m
};

/// p^L(d) = clamp(1 - 5 exp(-d0/d)) for d <= d1, continued by p^L(d1) exp(-(d-d1)/d1).
struct ThreeGppTwoPiece {
  double d0 = 156.0;  // m
  double d1 = 30.0;   // m
};

/// p^L == 0; every link is NLoS.
struct AlwaysNlos {};

}  // namespace los

using LosModel = std::variant<los::Exponential, los::ThreeGppLinear, los::ThreeGppTwoPiece, los::AlwaysNlos>;

/// Probability of a LoS link at distance d (m). Throws std::invalid_argument for d < 0.
double los_probability(const LosModel& model, double d);

/// Probability of the given link type at distance d; the two always sum to one.
double link_probability(const LosModel& model, Link link, double d);

/// Truncated first moment \f$\int_0^x z\, p^U(z)\,dz\f$ of the link probability.
/// Closed form for every variant (the two-piece model goes through the exponential integral E3).
double link_moment(const LosModel& model, Link link, double x);

std::string describe(const LosModel& model);

enum class PowerModel { Fixed, DensityDependent };

struct NetworkConfig {
  std::vector<TierParams> tiers;
  double noise_dbm = -95.0;  // kNoiseless for an interference-limited network
  LosModel los_model = los::AlwaysNlos{};
  PowerModel power_model = PowerModel::Fixed;

  std::size_t tier_count() const { return tiers.size(); }
  double noise_watts() const { return noise_dbm_to_watts(noise_dbm); }
  bool any_deployed() const;
};

/// Checks every invariant of the tiers and the network; throws ConfigError naming the field.
void validate(const NetworkConfig& cfg);

/// Transmit power in watts. Fixed: the configured dBm value. DensityDependent:
/// P = T eta / (gain_NL r^-alpha_NL) with r = sqrt(1/(pi lambda)) and
/// gain_NL = 10^(-A_NL/10). Throws ConfigError when the rule is undefined.
double effective_tx_power(const TierParams& tier, PowerModel model, double noise_watts);

inline double effective_tx_power(const NetworkConfig& cfg, std::size_t k) {
  return effective_tx_power(cfg.tiers.at(k), cfg.power_model, cfg.noise_watts());
}

/// B_k^U: transmit power times the linear 1 m path gain 10^(-A/10).
double b_constant(const TierParams& tier, Link link, double tx_power_watts);

inline double b_constant(const NetworkConfig& cfg, std::size_t k, Link link) {
  return b_constant(cfg.tiers.at(k), link, effective_tx_power(cfg, k));
}

// Presets ------------------------------------------------------------------

enum class EnergyScenario { S1, S2, S3 };

EnergyScenario parse_energy_scenario(std::string_view name);
std::string_view to_string(EnergyScenario s);

/// Sets (a_k, b_k) of the two tiers to the named energy scenario.
void apply_energy_scenario(NetworkConfig& cfg, EnergyScenario scenario);

/// Macro + small-cell network with the published two-tier radio parameters.
/// The blockage model is deliberately a required argument.
NetworkConfig paper_two_tier(const LosModel& los_model, double lambda1_per_km2, double lambda2_per_km2,
                             double threshold_db = 1.0, EnergyScenario energy = EnergyScenario::S1,
                             PowerModel power = PowerModel::Fixed);

}  // namespace hetnet
