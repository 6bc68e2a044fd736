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

#include "hetnet/montecarlo.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

#include "hetnet/kernels.hpp"
#include "hetnet/parallel.hpp"

namespace hetnet {

// Random numbers ------------------------------------------------------------

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ key[0], lo1, hi0 ^ c[3] ^ key[1], lo0};
    key[0] += kW0;
    key[1] += kW1;
  }
  return c;
}

TrialRng::TrialRng(std::uint64_t seed, std::uint64_t trial)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, trial_(trial) {}

std::uint64_t TrialRng::next_u64() {
  if (used_ >= 4) {
    buffer_ = philox4x32({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                          static_cast<std::uint32_t>(trial_), static_cast<std::uint32_t>(trial_ >> 32)},
                         key_);
    ++block_;
    used_ = 0;
  }
  const std::uint64_t v = (static_cast<std::uint64_t>(buffer_[used_]) << 32) | buffer_[used_ + 1];
  used_ += 2;
  return v;
}

double TrialRng::uniform() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

double TrialRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  const double radius = std::sqrt(-2.0 * std::log(uniform()));
  const double angle = 2.0 * std::numbers::pi * uniform();
  spare_normal_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t poisson(TrialRng& rng, double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw std::invalid_argument("poisson: mean must be finite and >= 0");
  if (mean == 0.0) return 0;
  if (mean < 10.0) {
    double p = std::exp(-mean);
    double cdf = p;
    const double u = rng.uniform();
    std::uint64_t k = 0;
    while (u > cdf && p > 0.0) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
    }
    return k;
  }
  // Transformed rejection with squeeze.
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <= -mean + k * loglam - std::lgamma(k + 1.0))
      return static_cast<std::uint64_t>(k);
  }
}

// Sampling ------------------------------------------------------------------

void SimSpec::validate() const {
  if (trials < 1) throw ConfigError("trials", "must be >= 1");
  if (!(region_radius >= 0.0) || !std::isfinite(region_radius)) throw ConfigError("region_radius", "must be >= 0");
  if (!(ci_level > 0.0 && ci_level < 1.0)) throw ConfigError("ci_level", "must lie in (0, 1)");
  if (max_points < 1) throw ConfigError("max_points", "must be >= 1");
}

double resolve_radius(const NetworkConfig& cfg, const SimSpec& spec) {
  if (spec.region_radius > 0.0) return spec.region_radius;
  double lambda_min = std::numeric_limits<double>::infinity();
  for (const auto& t : cfg.tiers)
    if (t.density > 0.0) lambda_min = std::min(lambda_min, t.density);
  if (!std::isfinite(lambda_min)) return 2000.0;
  return std::max(2000.0, 15.0 / std::sqrt(std::numbers::pi * lambda_min));
}

namespace {

struct DropPlan {
  kernels::LosShape shape;
  std::vector<kernels::TierDraw> tiers;
  std::vector<double> mean_count;
};

DropPlan plan_drop(const NetworkConfig& cfg, double radius, std::size_t max_points) {
  DropPlan plan;
  plan.shape = kernels::los_shape(cfg.los_model);
  const double area = std::numbers::pi * radius * radius;
  double expected = 0.0;
  for (std::size_t k = 0; k < cfg.tier_count(); ++k) {
    const TierParams& t = cfg.tiers[k];
    kernels::TierDraw draw;
    draw.radius = radius;
    const double count = t.density > 0.0 ? t.density * area : 0.0;
    if (count > 0.0) {
      for (Link link : kLinks) {
        const int u = static_cast<int>(link);
        draw.log_b[u] = std::log(b_constant(cfg, k, link));
        draw.log_sigma[u] = t.shadow_sigma_db(link) * std::numbers::ln10 / 10.0;
        draw.alpha[u] = t.alpha(link);
      }
    }
    expected += count;
    plan.tiers.push_back(draw);
    plan.mean_count.push_back(count);
  }
  if (expected > static_cast<double>(max_points)) {
    throw ConfigError("region_radius", "a drop of radius " + std::to_string(radius) + " m holds " +
                                           std::to_string(expected) + " BSs on average, above the cap of " +
                                           std::to_string(max_points));
  }
  return plan;
}

void draw_into(const DropPlan& plan, TrialRng& rng, std::size_t max_points, Realization& out) {
  out = Realization{};
  std::vector<double> u_radius, u_los, normal, u_fading;
  for (std::size_t k = 0; k < plan.tiers.size(); ++k) {
    if (!(plan.mean_count[k] > 0.0)) continue;
    const std::uint64_t n = poisson(rng, plan.mean_count[k]);
    if (out.size() + n > max_points)
      throw ConfigError("region_radius", "drop exceeded the cap of " + std::to_string(max_points) + " BSs");
    u_radius.resize(n);
    u_los.resize(n);
    normal.resize(n);
    u_fading.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      u_radius[i] = rng.uniform();
      u_los[i] = rng.uniform();
      normal[i] = rng.normal();
      u_fading[i] = rng.uniform();
    }
    const std::size_t offset = out.size();
    out.tier.resize(offset + n, static_cast<std::uint32_t>(k));
    out.link.resize(offset + n);
    out.distance.resize(offset + n);
    out.mean_power.resize(offset + n);
    out.inst_power.resize(offset + n);
    kernels::PowerColumns cols{u_radius.data(),          u_los.data(),
                               normal.data(),            u_fading.data(),
                               out.distance.data() + offset, out.link.data() + offset,
                               out.mean_power.data() + offset, out.inst_power.data() + offset};
    kernels::received_powers(plan.shape, plan.tiers[k], cols, n);
  }
}

double to_db(double x) { return x > 0.0 ? 10.0 * std::log10(x) : -std::numeric_limits<double>::infinity(); }

}  // namespace

Realization sample_realization(const NetworkConfig& cfg, double radius, TrialRng& rng, std::size_t max_points) {
  validate(cfg);
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ConfigError("region_radius", "must be > 0");
  const DropPlan plan = plan_drop(cfg, radius, max_points);
  Realization out;
  draw_into(plan, rng, max_points, out);
  return out;
}

std::optional<std::size_t> associate(const Realization& drop, Scheme scheme) {
  if (drop.empty()) return std::nullopt;
  const std::vector<double>& power = scheme == Scheme::MIRP ? drop.inst_power : drop.mean_power;
  std::size_t best = 0;
  for (std::size_t i = 1; i < drop.size(); ++i)
    if (power[i] > power[best]) best = i;
  return best;
}

double sinr(const Realization& drop, std::size_t serving, double noise_watts) {
  if (serving >= drop.size()) throw std::out_of_range("sinr: serving index out of range");
  double interference = 0.0;
  for (std::size_t i = 0; i < drop.size(); ++i)
    if (i != serving) interference += drop.inst_power[i];
  return drop.inst_power[serving] / (interference + noise_watts);
}

// Estimation ----------------------------------------------------------------

namespace {

double z_value(double ci_level) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + 0.5 * ci_level);
}

McEstimate from_moments(double mean, double std_error, std::size_t trials, double ci_level) {
  const double z = z_value(ci_level);
  return {mean, std_error, mean - z * std_error, mean + z * std_error, trials};
}

struct TrialPair {
  TrialOutcome mirp, marp;
};

TrialPair run_trial(const NetworkConfig& cfg, const DropPlan& plan, const SimSpec& spec, std::size_t trial,
                    double noise) {
  TrialRng rng(spec.seed, trial);
  Realization drop;
  draw_into(plan, rng, spec.max_points, drop);
  TrialPair out;
  if (drop.empty()) return out;

  double total = 0.0;
  for (double p : drop.inst_power) total += p;
  auto outcome = [&](std::size_t i) {
    TrialOutcome o;
    o.tier = static_cast<int>(drop.tier[i]);
    o.link = drop.link[i];
    const double interference = std::max(total - drop.inst_power[i], 0.0);
    const double s = drop.inst_power[i] / (interference + noise);
    o.sinr_db = to_db(s);
    o.success = s > cfg.tiers[drop.tier[i]].threshold();
    return o;
  };

  // Average power: the associated BS alone decides.
  out.marp = outcome(*associate(drop, Scheme::MARP));

  // Instantaneous power: union over BSs. Within a tier only the strongest
  // can clear the threshold, so check the per-tier maxima in tier order.
  std::vector<std::size_t> tier_best(cfg.tier_count(), drop.size());
  for (std::size_t i = 0; i < drop.size(); ++i) {
    std::size_t& b = tier_best[drop.tier[i]];
    if (b == drop.size() || drop.inst_power[i] > drop.inst_power[b]) b = i;
  }
  for (std::size_t b : tier_best) {
    if (b == drop.size()) continue;
    TrialOutcome o = outcome(b);
    if (o.success) {
      out.mirp = o;
      return out;
    }
  }
  out.mirp = outcome(*associate(drop, Scheme::MIRP));
  return out;
}

CoverageEstimate summarize(Scheme scheme, std::vector<TrialOutcome> trials, std::size_t tier_count,
                           double ci_level) {
  CoverageEstimate est;
  est.scheme = scheme;
  std::size_t ok = 0, ok_nl = 0, ok_l = 0;
  std::vector<std::size_t> ok_tier(tier_count, 0);
  for (const auto& t : trials) {
    if (!t.success) continue;
    ++ok;
    ++ok_tier[static_cast<std::size_t>(t.tier)];
    (t.link == 1 ? ok_l : ok_nl) += 1;
  }
  const std::size_t n = trials.size();
  est.total = proportion_estimate(ok, n, ci_level);
  for (std::size_t k = 0; k < tier_count; ++k) est.per_tier.push_back(proportion_estimate(ok_tier[k], n, ci_level));
  est.nl_part = proportion_estimate(ok_nl, n, ci_level);
  est.l_part = proportion_estimate(ok_l, n, ci_level);
  est.trials = std::move(trials);
  return est;
}

}  // namespace

McEstimate proportion_estimate(std::size_t successes, std::size_t trials, double ci_level) {
  if (trials == 0) throw std::invalid_argument("proportion_estimate: no trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double se = trials == 1 ? 0.5 : std::sqrt(p * (1.0 - p) / n);
  return from_moments(p, se, trials, ci_level);
}

SimResult simulate(const NetworkConfig& cfg, const SimSpec& spec) {
  validate(cfg);
  spec.validate();
  SimResult result;
  result.radius = resolve_radius(cfg, spec);
  const DropPlan plan = plan_drop(cfg, result.radius, spec.max_points);
  const double noise = cfg.noise_watts();

  std::vector<TrialPair> records(spec.trials);
  parallel_for(
      spec.trials, [&](std::size_t i) { records[i] = run_trial(cfg, plan, spec, i, noise); }, spec.threads);

  std::vector<TrialOutcome> mirp(spec.trials), marp(spec.trials);
  for (std::size_t i = 0; i < spec.trials; ++i) {
    mirp[i] = records[i].mirp;
    marp[i] = records[i].marp;
  }
  result.mirp = summarize(Scheme::MIRP, std::move(mirp), cfg.tier_count(), spec.ci_level);
  result.marp = summarize(Scheme::MARP, std::move(marp), cfg.tier_count(), spec.ci_level);
  return result;
}

CoverageEstimate estimate_coverage(const NetworkConfig& cfg, const SimSpec& spec, Scheme scheme) {
  SimResult r = simulate(cfg, spec);
  return scheme == Scheme::MIRP ? std::move(r.mirp) : std::move(r.marp);
}

PtEeEstimate pt_ee_from(const NetworkConfig& cfg, const CoverageEstimate& cov, double ci_level) {
  const std::size_t n = cov.trials.size();
  if (n == 0) throw std::invalid_argument("pt_ee_from: estimate carries no trials");
  std::vector<double> rate(cfg.tier_count());
  for (std::size_t k = 0; k < cfg.tier_count(); ++k)
    rate[k] = cfg.tiers[k].density * std::log2(1.0 + cfg.tiers[k].threshold());

  // PT is the mean of the per-trial value rate[tier] * success.
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& t : cov.trials) {
    const double v = t.success ? rate[static_cast<std::size_t>(t.tier)] : 0.0;
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / static_cast<double>(n);
  double se;
  if (n == 1) {
    se = 0.5 * *std::max_element(rate.begin(), rate.end());
  } else {
    const double var = std::max(0.0, (sum_sq - sum * mean) / static_cast<double>(n - 1));
    se = std::sqrt(var / static_cast<double>(n));
  }
  PtEeEstimate out;
  out.pt = from_moments(mean, se, n, ci_level);
  const double power = total_area_power(cfg);
  if (power > 0.0) out.ee = from_moments(mean / power, se / power, n, ci_level);
  else out.ee = from_moments(0.0, 0.0, n, ci_level);
  return out;
}

PtEeEstimate estimate_pt_ee(const NetworkConfig& cfg, const SimSpec& spec, Scheme scheme) {
  return pt_ee_from(cfg, estimate_coverage(cfg, spec, scheme), spec.ci_level);
}

void write_trial_dump(std::ostream& out, const CoverageEstimate& cov) {
  out << "trial,tier,link,sinr_db,success\n";
  for (std::size_t i = 0; i < cov.trials.size(); ++i) {
    const TrialOutcome& t = cov.trials[i];
    out << i << ',' << (t.tier < 0 ? std::string("none") : std::to_string(t.tier + 1)) << ','
        << (t.link < 0 ? "none" : (t.link == 1 ? "L" : "NL")) << ',';
    if (std::isfinite(t.sinr_db)) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6f", t.sinr_db);
      out << buf;
    } else {
      out << (t.sinr_db > 0 ? "inf" : "-inf");
    }
    out << ',' << (t.success ? 1 : 0) << '\n';
  }
}

}  // namespace hetnet
