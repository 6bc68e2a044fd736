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

#include "hetnet/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace hetnet {

namespace {

bool link_possible(const LosModel& model, Link link) {
  if (std::holds_alternative<los::AlwaysNlos>(model)) return link == Link::NLoS;
  return true;
}

}  // namespace

TransformedIntensity::TransformedIntensity(const NetworkConfig& cfg, std::size_t tier, Link link,
                                           const QuadratureSpec& spec)
    : tier_(tier), link_(link), alpha_(cfg.tiers.at(tier).alpha(link)) {
  spec.validate();
  const TierParams& tp = cfg.tiers.at(tier);
  two_pi_lambda_ = 2.0 * std::numbers::pi * tp.density;
  empty_ = !(tp.density > 0.0) || !link_possible(cfg.los_model, link);
  shape_ = kernels::los_shape(cfg.los_model);
  if (empty_) return;

  const double b = b_constant(cfg, tier, link);
  const LognormalNodes nodes = lognormal_nodes(tp.shadow_sigma_db(link), spec.hermite_order);
  for (std::size_t i = 0; i < nodes.gains.size(); ++i) {
    const double c = std::pow(b * nodes.gains[i], 1.0 / alpha_);
    scale_.push_back(c);
    density_coef_.push_back(nodes.weights[i] * c * c);
    weight_.push_back(nodes.weights[i]);
  }
}

double TransformedIntensity::measure(double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("TransformedIntensity::measure: t must be >= 0");
  if (empty_ || t == 0.0) return 0.0;
  if (std::isinf(t)) return std::numeric_limits<double>::infinity();
  return two_pi_lambda_ * kernels::moment_sum(shape_, link_, scale_.data(), weight_.data(), scale_.size(), t);
}

double TransformedIntensity::density(double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("TransformedIntensity::density: t must be >= 0");
  if (empty_ || t == 0.0 || std::isinf(t)) return 0.0;
  return two_pi_lambda_ * t *
         kernels::density_sum(shape_, link_, scale_.data(), density_coef_.data(), scale_.size(), t);
}

double TransformedIntensity::laplace_exponent(double s, double lower, const QuadratureSpec& spec) const {
  if (!(s >= 0.0)) throw std::invalid_argument("laplace: s must be >= 0");
  if (!(lower >= 0.0)) throw std::invalid_argument("laplace: lower limit must be >= 0");
  if (empty_ || s == 0.0 || std::isinf(lower)) return 0.0;
  const double inv_s = 1.0 / s;
  const double a = alpha_;
  auto integrand = [&](double y) {
    const double lam = density(y);
    if (lam == 0.0) return 0.0;
    return lam / (1.0 + std::pow(y, a) * inv_s);
  };
  const double scale = std::max(std::pow(s, 1.0 / a), lower);
  return integrate_improper(integrand, lower, spec, scale);
}

double transformed_measure(const NetworkConfig& cfg, std::size_t k, Link link, double t, const QuadratureSpec& spec) {
  return TransformedIntensity(cfg, k, link, spec).measure(t);
}

double transformed_density(const NetworkConfig& cfg, std::size_t k, Link link, double t, const QuadratureSpec& spec) {
  return TransformedIntensity(cfg, k, link, spec).density(t);
}

double laplace_marp(const NetworkConfig& cfg, std::size_t j, Link link, double s, double lower,
                    const QuadratureSpec& spec) {
  if (!(s > 0.0)) throw std::invalid_argument("laplace: s must be > 0");
  return std::exp(-TransformedIntensity(cfg, j, link, spec).laplace_exponent(s, lower, spec));
}

double laplace_mirp(const NetworkConfig& cfg, std::size_t j, Link link, double s, const QuadratureSpec& spec) {
  return laplace_marp(cfg, j, link, s, 0.0, spec);
}

std::string_view to_string(Scheme s) { return s == Scheme::MIRP ? "mirp" : "marp"; }

Scheme parse_scheme(std::string_view name) {
  if (name == "mirp" || name == "MIRP") return Scheme::MIRP;
  if (name == "marp" || name == "MARP") return Scheme::MARP;
  throw ConfigError("scheme", "unknown association scheme '" + std::string(name) + "' (expected mirp or marp)");
}

namespace {

struct Evaluation {
  std::vector<TransformedIntensity> channels;  // tier-major, NLoS then LoS
  QuadratureSpec inner;
  double noise;
};

Evaluation prepare(const NetworkConfig& cfg, const QuadratureSpec& spec) {
  validate(cfg);
  spec.validate();
  Evaluation ev{{}, spec, cfg.noise_watts()};
  ev.inner.divergence_check = false;
  for (std::size_t k = 0; k < cfg.tier_count(); ++k)
    for (Link link : kLinks) ev.channels.emplace_back(cfg, k, link, spec);
  return ev;
}

// Transformed radius at which the serving channel with exponent `alpha_serving`
// expects one stronger-on-average BS; used as the length scale of the outer integral.
double typical_radius(const Evaluation& ev, double alpha_serving) {
  auto count = [&](double r) {
    double sum = 0.0;
    for (const auto& ch : ev.channels)
      if (!ch.empty()) sum += ch.measure(std::pow(r, alpha_serving / ch.alpha()));
    return sum;
  };
  double lo = 1e-12, hi = 1.0;
  while (count(hi) < 1.0 && hi < 1e30) hi *= 16.0;
  if (count(hi) < 1.0) return hi;
  lo = hi / 16.0;
  while (count(lo) > 1.0 && lo > 1e-30) lo /= 16.0;
  for (int it = 0; it < 60 && hi / lo > 1.0 + 1e-6; ++it) {
    const double mid = std::sqrt(lo * hi);
    (count(mid) < 1.0 ? lo : hi) = mid;
  }
  return std::sqrt(lo * hi);
}

CoverageBreakdown coverage_impl(const NetworkConfig& cfg, const QuadratureSpec& spec, Scheme scheme,
                                const MarpOptions& options) {
  const Evaluation ev = prepare(cfg, spec);
  CoverageBreakdown out;
  out.scheme = scheme;
  out.per_tier.assign(cfg.tier_count(), 0.0);

  QuadratureSpec outer = spec;
  outer.divergence_check = false;

  const bool truncate = scheme == Scheme::MARP && options.truncate_interferers;
  const bool voided = scheme == Scheme::MARP && options.void_factor;

  for (const auto& serving : ev.channels) {
    if (serving.empty()) continue;
    const double threshold = cfg.tiers[serving.tier()].threshold();
    const double a_serv = serving.alpha();
    auto integrand = [&](double r) {
      const double lam = serving.density(r);
      if (lam == 0.0) return 0.0;
      const double r_alpha = std::pow(r, a_serv);
      const double s = threshold * r_alpha;
      double exponent = threshold * ev.noise * r_alpha;
      for (const auto& ch : ev.channels) {
        if (ch.empty()) continue;
        const double equal_power = (truncate || voided) ? std::pow(r, a_serv / ch.alpha()) : 0.0;
        exponent += ch.laplace_exponent(s, truncate ? equal_power : 0.0, ev.inner);
        if (voided) exponent += ch.measure(equal_power);
      }
      return lam * std::exp(-exponent);
    };
    const double r0 = typical_radius(ev, a_serv);
    const double p = integrate_improper(integrand, 0.0, outer, r0);
    out.per_tier[serving.tier()] += p;
    (serving.link() == Link::NLoS ? out.nl_part : out.l_part) += p;
  }
  out.total = 0.0;
  for (double p : out.per_tier) out.total += p;
  return out;
}

}  // namespace

CoverageBreakdown coverage_mirp(const NetworkConfig& cfg, const QuadratureSpec& spec) {
  for (std::size_t k = 0; k < cfg.tier_count(); ++k) {
    const TierParams& t = cfg.tiers[k];
    if (t.density > 0.0 && t.sinr_threshold_db < 0.0) {
      throw ConfigError("tiers[" + std::to_string(k) + "].sinr_threshold_db",
                        "the instantaneous-power (MIRP) result needs T >= 0 dB; got " +
                            std::to_string(t.sinr_threshold_db) + " dB (use MARP for lower thresholds)");
    }
  }
  return coverage_impl(cfg, spec, Scheme::MIRP, {});
}

CoverageBreakdown coverage_marp(const NetworkConfig& cfg, const QuadratureSpec& spec, const MarpOptions& options) {
  return coverage_impl(cfg, spec, Scheme::MARP, options);
}

CoverageBreakdown coverage(const NetworkConfig& cfg, Scheme scheme, const QuadratureSpec& spec) {
  return scheme == Scheme::MIRP ? coverage_mirp(cfg, spec) : coverage_marp(cfg, spec);
}

double potential_throughput(const NetworkConfig& cfg, const CoverageBreakdown& breakdown) {
  if (breakdown.per_tier.size() != cfg.tier_count())
    throw std::invalid_argument("potential_throughput: breakdown has the wrong number of tiers");
  double pt = 0.0;
  for (std::size_t k = 0; k < cfg.tier_count(); ++k)
    pt += cfg.tiers[k].density * breakdown.per_tier[k] * std::log2(1.0 + cfg.tiers[k].threshold());
  return pt;
}

double total_area_power(const NetworkConfig& cfg) {
  double sum = 0.0;
  for (std::size_t k = 0; k < cfg.tier_count(); ++k) {
    const TierParams& t = cfg.tiers[k];
    if (!(t.density > 0.0)) continue;
    sum += t.density * (t.energy_a * effective_tx_power(cfg, k) + t.energy_b);
  }
  return sum;
}

double energy_efficiency(const NetworkConfig& cfg, double pt) {
  const double denom = total_area_power(cfg);
  if (!(denom > 0.0)) throw ConfigError("tiers", "energy efficiency is undefined when no power is consumed");
  return pt / denom;
}

}  // namespace hetnet
