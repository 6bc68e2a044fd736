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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "hetnet/analytic.hpp"

using namespace hetnet;
using hetnet::testing::reference_single_tier;
using hetnet::testing::rel_diff;

namespace {

constexpr double kPi = std::numbers::pi;

// Interference-limited, exponent 4, Rayleigh: strongest-instantaneous coverage
// is (2/pi) T^(-1/2) for T >= 1, nearest-average coverage 1/(1 + rho(T)).
double mirp_reference(double t) { return 2.0 / (kPi * std::sqrt(t)); }
double marp_reference(double t) {
  const double r = std::sqrt(t);
  return 1.0 / (1.0 + r * (kPi / 2.0 - std::atan(1.0 / r)));
}

}  // namespace

TEST_SUITE("analytic") {
  TEST_CASE("single-tier interference-limited coverage") {
    for (double t_db : {0.0, 3.0, 6.0206, 10.0, 15.0}) {
      const NetworkConfig cfg = reference_single_tier(t_db);
      const double t = db_to_linear(t_db);
      INFO("T = ", t_db, " dB");
      CHECK(std::abs(coverage_mirp(cfg).total - mirp_reference(t)) < 1e-5);
      CHECK(std::abs(coverage_marp(cfg).total - marp_reference(t)) < 1e-5);
    }
    CHECK(std::abs(coverage_mirp(reference_single_tier(0.0)).total - 0.63661977) < 1e-6);
    CHECK(std::abs(coverage_marp(reference_single_tier(0.0)).total - 0.56009915) < 1e-6);
    CHECK(std::abs(coverage_mirp(reference_single_tier(10.0 * std::log10(4.0))).total - 0.31830989) < 1e-6);
  }

  TEST_CASE("interference-limited coverage ignores density and shadowing") {
    const double base = coverage_marp(reference_single_tier(2.0)).total;
    for (double density : {1e-6, 1e-3}) {
      for (double sigma : {0.0, 4.0, 9.0}) {
        NetworkConfig cfg = reference_single_tier(2.0, density);
        cfg.tiers[0].shadow_sigma_nl_db = sigma;
        CHECK(std::abs(coverage_marp(cfg).total - base) < 1e-5);
      }
    }
  }

  TEST_CASE("transformed measure of a plain disk") {
    // Exponent 2 and B = 4 map radius d to d/2, so four times the disk area.
    NetworkConfig cfg = reference_single_tier(0.0, 1.0);
    cfg.tiers[0].alpha_nl = cfg.tiers[0].alpha_l = 2.0;
    cfg.tiers[0].tx_power_dbm = 30.0 + 10.0 * std::log10(4.0);
    const TransformedIntensity ch(cfg, 0, Link::NLoS);
    CHECK(ch.measure(1.0) == doctest::Approx(4.0 * kPi).epsilon(1e-12));
    CHECK(ch.density(1.0) == doctest::Approx(8.0 * kPi).epsilon(1e-12));
    CHECK(ch.measure(0.0) == 0.0);
    CHECK(TransformedIntensity(cfg, 0, Link::LoS).empty());
    CHECK(TransformedIntensity(cfg, 0, Link::LoS).measure(5.0) == 0.0);
    CHECK_THROWS_AS(ch.measure(-1.0), std::invalid_argument);
  }

  TEST_CASE("measure is the integral of the density") {
    const NetworkConfig cfg = paper_two_tier(los::Exponential{0.002}, 2.0, 25.0);
    QuadratureSpec tight;
    tight.rel_tol = 1e-10;
    tight.abs_tol = 1e-14;
    tight.max_subdivisions = 2000;
    for (std::size_t k = 0; k < 2; ++k) {
      for (Link link : kLinks) {
        const TransformedIntensity ch(cfg, k, link);
        for (double t : {1.0, 30.0, 400.0}) {
          const double integral = integrate([&](double y) { return ch.density(y); }, 0.0, t, tight);
          CHECK(std::abs(integral - ch.measure(t)) <= 1e-8 * ch.measure(t) + 1e-14);
        }
      }
    }
  }

  TEST_CASE("measure is non-decreasing in the transformed radius") {
    const NetworkConfig cfg = paper_two_tier(los::ThreeGppTwoPiece{156.0, 30.0}, 2.0, 25.0);
    for (std::size_t k = 0; k < 2; ++k) {
      for (Link link : kLinks) {
        const TransformedIntensity ch(cfg, k, link);
        double previous = 0.0;
        for (double t = 0.01; t < 1e5; t *= 1.3) {
          const double m = ch.measure(t);
          CHECK(m >= previous);
          CHECK(ch.density(t) >= 0.0);
          previous = m;
        }
      }
    }
  }

  TEST_CASE("Laplace exponent closed form") {
    // Without blockage the exponent is 2 pi lambda E[c^2] (sqrt(s)/2)(pi/2 - atan(l^2/sqrt(s))) at exponent 4.
    for (double sigma : {0.0, 6.0}) {
      NetworkConfig cfg = reference_single_tier(0.0, 1e-4);
      cfg.tiers[0].shadow_sigma_nl_db = sigma;
      cfg.tiers[0].tx_power_dbm = 20.0;  // B = 0.1
      const double b = 0.1;
      const double sg = sigma * std::log(10.0) / 10.0;
      const double mean_c2 = std::sqrt(b) * std::exp(0.5 * sg * sg / 4.0);
      const TransformedIntensity ch(cfg, 0, Link::NLoS);
      QuadratureSpec spec;
      spec.rel_tol = 1e-10;
      spec.abs_tol = 1e-14;
      spec.max_subdivisions = 2000;
      for (double s : {1e2, 1e6, 3e9}) {
        for (double lower : {0.0, 10.0, 250.0}) {
          const double expected =
              2.0 * kPi * 1e-4 * mean_c2 * 0.5 * std::sqrt(s) * (kPi / 2.0 - std::atan(lower * lower / std::sqrt(s)));
          INFO("sigma=", sigma, " s=", s, " lower=", lower);
          CHECK(rel_diff(ch.laplace_exponent(s, lower, spec), expected) < 1e-6);
        }
        CHECK(rel_diff(-std::log(laplace_mirp(cfg, 0, Link::NLoS, s, spec)),
                       2.0 * kPi * 1e-4 * mean_c2 * 0.5 * std::sqrt(s) * kPi / 2.0) < 1e-6);
      }
    }
  }

  TEST_CASE("Laplace transform is a probability that shrinks with the argument") {
    const NetworkConfig cfg = paper_two_tier(los::Exponential{0.002}, 1.0, 10.0);
    for (std::size_t j = 0; j < 2; ++j) {
      for (Link link : kLinks) {
        double previous = 1.0;
        for (double s = 1e3; s < 1e15; s *= 30.0) {
          const double v = laplace_marp(cfg, j, link, s, 5.0);
          CHECK(v > 0.0);
          CHECK(v <= previous);
          CHECK(laplace_mirp(cfg, j, link, s) <= v);
          previous = v;
        }
      }
    }
  }

  TEST_CASE("disabling both association terms recovers the instantaneous result") {
    MarpOptions plain;
    plain.truncate_interferers = false;
    plain.void_factor = false;
    for (const LosModel& m : {LosModel{los::Exponential{0.002}}, LosModel{los::ThreeGppTwoPiece{156.0, 30.0}}}) {
      const NetworkConfig cfg = paper_two_tier(m, 3.0, 40.0, 2.0);
      const CoverageBreakdown a = coverage_marp(cfg, {}, plain);
      const CoverageBreakdown b = coverage_mirp(cfg);
      CHECK(a.total == b.total);
      CHECK(a.per_tier == b.per_tier);
      CHECK(a.nl_part == b.nl_part);
    }
  }

  TEST_CASE("breakdowns add up and stay in the unit interval") {
    for (double l1 : {0.3, 3.0, 300.0}) {
      for (double l2 : {0.0, 10.0, 1000.0}) {
        const NetworkConfig cfg = paper_two_tier(los::Exponential{0.002}, l1, l2);
        for (Scheme s : {Scheme::MIRP, Scheme::MARP}) {
          const CoverageBreakdown b = coverage(cfg, s);
          CHECK(b.total >= 0.0);
          CHECK(b.total <= 1.0 + 1e-9);
          CHECK(std::abs(b.per_tier[0] + b.per_tier[1] - b.total) < 1e-9);
          CHECK(std::abs(b.nl_part + b.l_part - b.total) < 1e-9);
          if (l2 == 0.0) CHECK(b.per_tier[1] == 0.0);
        }
      }
    }
  }

  TEST_CASE("instantaneous association dominates average association") {
    for (double l1 : {0.5, 5.0, 50.0}) {
      for (double t_db : {0.0, 5.0}) {
        const NetworkConfig cfg = paper_two_tier(los::Exponential{0.002}, l1, 10.0 * l1, t_db);
        CHECK(coverage_mirp(cfg).total >= coverage_marp(cfg).total - 1e-6);
      }
    }
  }

  TEST_CASE("coverage falls with noise and threshold") {
    for (Scheme s : {Scheme::MIRP, Scheme::MARP}) {
      double previous = 1.0;
      for (double noise : {-200.0, -110.0, -95.0, -80.0, -60.0}) {
        NetworkConfig cfg = paper_two_tier(los::Exponential{0.002}, 1.0, 10.0);
        cfg.noise_dbm = noise;
        const double p = coverage(cfg, s).total;
        CHECK(p <= previous + 1e-7);
        previous = p;
      }
      previous = 1.0;
      for (double t_db : {0.0, 2.0, 5.0, 10.0, 20.0}) {
        const double p = coverage(paper_two_tier(los::Exponential{0.002}, 1.0, 10.0, t_db), s).total;
        CHECK(p <= previous + 1e-7);
        previous = p;
      }
    }
  }

  TEST_CASE("idle tier leaves coverage unchanged") {
    const NetworkConfig one = paper_two_tier(los::Exponential{0.002}, 5.0, 0.0);
    NetworkConfig solo = one;
    solo.tiers.pop_back();
    for (Scheme s : {Scheme::MIRP, Scheme::MARP})
      CHECK(std::abs(coverage(one, s).total - coverage(solo, s).total) < 1e-12);
  }

  TEST_CASE("negative threshold is rejected for instantaneous association") {
    const NetworkConfig cfg = paper_two_tier(los::Exponential{0.002}, 1.0, 10.0, -3.0);
    try {
      coverage_mirp(cfg);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.field() == "tiers[0].sinr_threshold_db");
    }
    CHECK(coverage_marp(cfg).total > coverage_marp(paper_two_tier(los::Exponential{0.002}, 1.0, 10.0)).total);
  }

  TEST_CASE("scheme names") {
    CHECK(parse_scheme("mirp") == Scheme::MIRP);
    CHECK(parse_scheme("MARP") == Scheme::MARP);
    CHECK(to_string(Scheme::MARP) == "marp");
    CHECK_THROWS_AS(parse_scheme("nearest"), ConfigError);
  }

  TEST_CASE("area power, throughput and efficiency") {
    // Values computed by hand from the tier coefficients.
    const NetworkConfig s1 = paper_two_tier(los::Exponential{0.002}, 1.0, 10.0, 1.0, EnergyScenario::S1);
    CHECK(rel_diff(total_area_power(s1), 0.0016477375808242067) < 1e-12);
    const NetworkConfig s2 = paper_two_tier(los::Exponential{0.002}, 1.0, 10.0, 1.0, EnergyScenario::S2);
    CHECK(rel_diff(total_area_power(s2), 4.2322603486859314e-05) < 1e-12);

    CoverageBreakdown b;
    b.per_tier = {0.25, 0.5};
    const double pt = potential_throughput(s1, b);
    const double rate = std::log2(1.0 + db_to_linear(1.0));
    CHECK(rel_diff(pt, (1e-6 * 0.25 + 1e-5 * 0.5) * rate) < 1e-12);
    CHECK(rel_diff(energy_efficiency(s1, pt), pt / 0.0016477375808242067) < 1e-12);

    const NetworkConfig idle = paper_two_tier(los::Exponential{0.002}, 0.0, 0.0);
    CHECK(total_area_power(idle) == 0.0);
    CHECK_THROWS_AS(energy_efficiency(idle, 0.0), ConfigError);
  }
}
