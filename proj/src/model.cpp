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

#include "hetnet/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/expint.hpp>

namespace hetnet {

std::string_view to_string(Link link) { return link == Link::NLoS ? "NL" : "L"; }

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double two_piece_inner(const los::ThreeGppTwoPiece& m, double d) {
  if (d <= 0.0) return 1.0;
  return std::clamp(1.0 - 5.0 * std::exp(-m.d0 / d), 0.0, 1.0);
}

// Integral of z (1 - p^L(z)) over [0, x], x <= d1. Below d0/ln 5 the blocked
// share is 5 e^{-d0/z}, and substituting s = d0/z gives 5 z^2 E3(d0/z), which
// stays accurate where the blocked share is vanishingly small.
double two_piece_blocked_moment(const los::ThreeGppTwoPiece& m, double x) {
  if (x <= 0.0) return 0.0;
  const double knee = m.d0 / std::log(5.0);
  const double z = std::min(x, knee);
  const double w = m.d0 / z;
  double blocked = w < 700.0 ? 5.0 * z * z * boost::math::expint(3, w) : 0.0;
  if (x > knee) blocked += 0.5 * (x * x - knee * knee);
  return blocked;
}

// 1 - e^-u (1 + u), accurate for small u.
double exp_moment_los(double u) {
  if (u < 0.1) {
    // sum_{n>=2} (-1)^n (n-1) u^n / n!
    double term = u * u / 2.0;  // u^n / n! at n = 2
    double sum = 0.0;
    for (int n = 2; n <= 14; ++n) {
      sum += ((n % 2 == 0) ? 1.0 : -1.0) * (n - 1) * term;
      term *= u / (n + 1);
    }
    return sum;
  }
  return 1.0 - std::exp(-u) * (1.0 + u);
}

// u^2/2 - (1 - e^-u (1 + u)), accurate for small u.
double exp_moment_nlos(double u) {
  if (u < 0.1) {
    double term = u * u * u / 6.0;  // n = 3
    double sum = 0.0;
    for (int n = 3; n <= 15; ++n) {
      sum += ((n % 2 == 1) ? 1.0 : -1.0) * (n - 1) * term;
      term *= u / (n + 1);
    }
    return sum;
  }
  return 0.5 * u * u - (1.0 - std::exp(-u) * (1.0 + u));
}

}  // namespace

double los_probability(const LosModel& model, double d) {
  if (!(d >= 0.0)) throw std::invalid_argument("los_probability: distance must be >= 0");
  return std::visit(overloaded{
                        [&](const los::Exponential& m) { return std::exp(-m.kappa * d); },
                        [&](const los::ThreeGppLinear& m) { return std::max(0.0, 1.0 - d / m.d1); },
                        [&](const los::ThreeGppTwoPiece& m) {
                          if (d <= m.d1) return two_piece_inner(m, d);
                          return two_piece_inner(m, m.d1) * std::exp(-(d - m.d1) / m.d1);
                        },
                        [](const los::AlwaysNlos&) { return 0.0; },
                    },
                    model);
}

// Computed on its own rather than as 1 - p^L, which rounds to zero wherever
// blockage is rarer than machine epsilon.
double nlos_probability(const LosModel& model, double d) {
  if (!(d >= 0.0)) throw std::invalid_argument("los_probability: distance must be >= 0");
  return std::visit(overloaded{
                        [&](const los::Exponential& m) { return -std::expm1(-m.kappa * d); },
                        [&](const los::ThreeGppLinear& m) { return std::min(1.0, d / m.d1); },
                        [&](const los::ThreeGppTwoPiece& m) {
                          if (d <= m.d1) return d <= 0.0 ? 0.0 : std::min(1.0, 5.0 * std::exp(-m.d0 / d));
                          return 1.0 - two_piece_inner(m, m.d1) * std::exp(-(d - m.d1) / m.d1);
                        },
                        [](const los::AlwaysNlos&) { return 1.0; },
                    },
                    model);
}

double link_probability(const LosModel& model, Link link, double d) {
  return link == Link::LoS ? los_probability(model, d) : nlos_probability(model, d);
}

double link_moment(const LosModel& model, Link link, double x) {
  if (!(x >= 0.0)) throw std::invalid_argument("link_moment: upper limit must be >= 0");
  const double full = 0.5 * x * x;
  return std::visit(
      overloaded{
          [&](const los::Exponential& m) {
            if (m.kappa == 0.0) return link == Link::LoS ? full : 0.0;
            const double u = m.kappa * x;
            const double k2 = m.kappa * m.kappa;
            return (link == Link::LoS ? exp_moment_los(u) : exp_moment_nlos(u)) / k2;
          },
          [&](const los::ThreeGppLinear& m) {
            const double xe = std::min(x, m.d1);
            const double los_part = 0.5 * xe * xe - xe * xe * xe / (3.0 * m.d1);
            if (link == Link::LoS) return los_part;
            if (x <= m.d1) return xe * xe * xe / (3.0 * m.d1);
            return full - los_part;
          },
          [&](const los::ThreeGppTwoPiece& m) {
            // Each link is built from its own small quantity; differences of
            // near-equal moments lose everything when one link is rare.
            if (x <= m.d1) {
              const double blocked = two_piece_blocked_moment(m, x);
              return link == Link::LoS ? full - blocked : blocked;
            }
            const double near_blocked = two_piece_blocked_moment(m, m.d1);
            const double p1 = two_piece_inner(m, m.d1);
            const double far_los = p1 * m.d1 * (2.0 * m.d1 - std::exp(-(x - m.d1) / m.d1) * (x + m.d1));
            if (link == Link::LoS) return 0.5 * m.d1 * m.d1 - near_blocked + far_los;
            return near_blocked + 0.5 * (x * x - m.d1 * m.d1) - far_los;
          },
          [&](const los::AlwaysNlos&) { return link == Link::LoS ? 0.0 : full; },
      },
      model);
}

std::string describe(const LosModel& model) {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const los::Exponential& m) { os << "exponential:" << m.kappa; },
                 [&](const los::ThreeGppLinear& m) { os << "3gpp-linear:" << m.d1; },
                 [&](const los::ThreeGppTwoPiece& m) { os << "3gpp-two-piece:" << m.d0 << ":" << m.d1; },
                 [&](const los::AlwaysNlos&) { os << "always-nlos"; },
             },
             model);
  return os.str();
}

bool NetworkConfig::any_deployed() const {
  return std::any_of(tiers.begin(), tiers.end(), [](const TierParams& t) { return t.density > 0.0; });
}

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field, what);
}

void require_finite(double v, const std::string& field) { require(std::isfinite(v), field, "must be finite"); }

}  // namespace

void validate(const NetworkConfig& cfg) {
  require(!cfg.tiers.empty(), "tiers", "at least one tier is required");
  require(cfg.noise_dbm == kNoiseless || std::isfinite(cfg.noise_dbm), "noise_dbm",
          "must be finite (or the noiseless sentinel)");
  std::visit(overloaded{
                 [](const los::Exponential& m) {
                   require(std::isfinite(m.kappa) && m.kappa >= 0.0, "los.kappa_per_m", "must be >= 0");
                 },
                 [](const los::ThreeGppLinear& m) {
                   require(std::isfinite(m.d1) && m.d1 > 0.0, "los.d1_m", "must be > 0");
                 },
                 [](const los::ThreeGppTwoPiece& m) {
                   require(std::isfinite(m.d0) && m.d0 > 0.0, "los.d0_m", "must be > 0");
                   require(std::isfinite(m.d1) && m.d1 > 0.0, "los.d1_m", "must be > 0");
                 },
                 [](const los::AlwaysNlos&) {},
             },
             cfg.los_model);

  for (std::size_t k = 0; k < cfg.tiers.size(); ++k) {
    const TierParams& t = cfg.tiers[k];
    const std::string p = "tiers[" + std::to_string(k) + "].";
    for (auto [v, name] : {std::pair{t.density, "density_per_km2"}, {t.tx_power_dbm, "tx_power_dbm"},
                           {t.pl_intercept_nl_db, "pl_intercept_nl_db"}, {t.pl_intercept_l_db, "pl_intercept_l_db"},
                           {t.alpha_nl, "alpha_nl"}, {t.alpha_l, "alpha_l"},
                           {t.shadow_sigma_nl_db, "shadow_sigma_nl_db"}, {t.shadow_sigma_l_db, "shadow_sigma_l_db"},
                           {t.sinr_threshold_db, "sinr_threshold_db"}, {t.energy_a, "energy_a"},
                           {t.energy_b, "energy_b"}}) {
      require_finite(v, p + name);
    }
    require(t.density >= 0.0, p + "density_per_km2", "must be >= 0");
    require(t.alpha_nl > 2.0, p + "alpha_nl", "must be > 2 for the interference integrals to converge");
    require(t.alpha_l > 2.0, p + "alpha_l", "must be > 2 for the interference integrals to converge");
    require(t.alpha_nl >= t.alpha_l, p + "alpha_nl", "must be >= alpha_l");
    require(t.shadow_sigma_nl_db >= 0.0, p + "shadow_sigma_nl_db", "must be >= 0");
    require(t.shadow_sigma_l_db >= 0.0, p + "shadow_sigma_l_db", "must be >= 0");
    require(t.energy_a >= 0.0, p + "energy_a", "must be >= 0");
    require(t.energy_b >= 0.0, p + "energy_b", "must be >= 0");
  }
}

double effective_tx_power(const TierParams& tier, PowerModel model, double noise_watts) {
  if (model == PowerModel::Fixed) return dbm_to_watts(tier.tx_power_dbm);
  if (!(tier.density > 0.0))
    throw ConfigError("power_model", "density-dependent power needs a positive density (tier '" + tier.name + "')");
  if (!(noise_watts > 0.0))
    throw ConfigError("power_model", "density-dependent power is undefined for a noiseless network");
  const double r = std::sqrt(1.0 / (std::numbers::pi * tier.density));
  const double gain_nl = db_to_linear(-tier.pl_intercept_nl_db);
  return tier.threshold() * noise_watts * std::pow(r, tier.alpha_nl) / gain_nl;
}

double b_constant(const TierParams& tier, Link link, double tx_power_watts) {
  return tx_power_watts * db_to_linear(-tier.pl_intercept_db(link));
}

EnergyScenario parse_energy_scenario(std::string_view name) {
  if (name == "S1" || name == "s1") return EnergyScenario::S1;
  if (name == "S2" || name == "s2") return EnergyScenario::S2;
  if (name == "S3" || name == "s3") return EnergyScenario::S3;
  throw ConfigError("energy", "unknown energy scenario '" + std::string(name) + "' (expected S1, S2 or S3)");
}

std::string_view to_string(EnergyScenario s) {
  switch (s) {
    case EnergyScenario::S1: return "S1";
    case EnergyScenario::S2: return "S2";
    case EnergyScenario::S3: return "S3";
  }
  return "?";
}

void apply_energy_scenario(NetworkConfig& cfg, EnergyScenario scenario) {
  if (cfg.tiers.size() != 2) throw ConfigError("energy", "energy scenarios are defined for two tiers");
  struct Coeffs {
    double a1, a2, b1, b2;
  };
  Coeffs c{};
  switch (scenario) {
    case EnergyScenario::S1: c = {22.6, 5.5, 414.2, 32.0}; break;
    case EnergyScenario::S2: c = {1.0, 1.0, 0.0, 0.0}; break;
    case EnergyScenario::S3: c = {10.3, 5.5, 156.2, 32.0}; break;
  }
  cfg.tiers[0].energy_a = c.a1;
  cfg.tiers[1].energy_a = c.a2;
  cfg.tiers[0].energy_b = c.b1;
  cfg.tiers[1].energy_b = c.b2;
}

NetworkConfig paper_two_tier(const LosModel& los_model, double lambda1_per_km2, double lambda2_per_km2,
                             double threshold_db, EnergyScenario energy, PowerModel power) {
  NetworkConfig cfg;
  cfg.noise_dbm = -95.0;
  cfg.los_model = los_model;
  cfg.power_model = power;

  TierParams macro;
  macro.name = "macro";
  macro.density = per_km2_to_per_m2(lambda1_per_km2);
  macro.tx_power_dbm = 46.0;
  macro.pl_intercept_nl_db = 2.7;
  macro.pl_intercept_l_db = 30.8;
  macro.alpha_nl = 4.28;
  macro.alpha_l = 2.42;
  macro.shadow_sigma_nl_db = 8.0;
  macro.shadow_sigma_l_db = 4.0;
  macro.sinr_threshold_db = threshold_db;

  TierParams small;
  small.name = "small";
  small.density = per_km2_to_per_m2(lambda2_per_km2);
  small.tx_power_dbm = 24.0;
  small.pl_intercept_nl_db = 32.9;
  small.pl_intercept_l_db = 41.1;
  small.alpha_nl = 3.75;
  small.alpha_l = 2.09;
  small.shadow_sigma_nl_db = 4.0;
  small.shadow_sigma_l_db = 3.0;
  small.sinr_threshold_db = threshold_db;

  cfg.tiers = {macro, small};
  apply_energy_scenario(cfg, energy);
  return cfg;
}

}  // namespace hetnet
