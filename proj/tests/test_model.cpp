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
#include <vector>

#include "fixtures.hpp"
#include "hetnet/model.hpp"
#include "hetnet/numerics.hpp"

using namespace hetnet;
using hetnet::testing::rel_diff;

namespace {

std::vector<LosModel> all_los_models() {
  return {los::Exponential{0.01}, los::Exponential{0.002}, los::ThreeGppLinear{50.0},
          los::ThreeGppTwoPiece{156.0, 30.0}, los::ThreeGppTwoPiece{50.0, 120.0}, los::AlwaysNlos{}};
}

}  // namespace

TEST_SUITE("model") {
  TEST_CASE("decibel conversions") {
    CHECK(db_to_linear(0.0) == 1.0);
    CHECK(db_to_linear(10.0) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(rel_diff(dbm_to_watts(-95.0), 3.1622776601683795e-13) < 1e-12);
    CHECK(dbm_to_watts(0.0) == doctest::Approx(1e-3).epsilon(1e-15));
    CHECK_THROWS_AS(db_to_linear(std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(db_to_linear(INFINITY), std::invalid_argument);
    CHECK(noise_dbm_to_watts(kNoiseless) == 0.0);
  }

  TEST_CASE("decibel addition is multiplication") {
    for (double a : {-130.0, -20.5, 0.0, 3.0, 17.25})
      for (double b : {-40.0, -1.0, 0.5, 33.0})
        CHECK(rel_diff(db_to_linear(a + b), db_to_linear(a) * db_to_linear(b)) < 1e-12);
  }

  TEST_CASE("exponential blockage values") {
    const LosModel m = los::Exponential{0.01};
    CHECK(los_probability(m, 0.0) == 1.0);
    CHECK(los_probability(m, 100.0) == doctest::Approx(0.36787944117144233).epsilon(1e-14));
    CHECK(los_probability(los::AlwaysNlos{}, 37.0) == 0.0);
    CHECK_THROWS_AS(los_probability(m, -1.0), std::invalid_argument);
  }

  TEST_CASE("two-piece blockage is continuous at the break point") {
    const los::ThreeGppTwoPiece m{156.0, 30.0};
    const double below = los_probability(m, 30.0);
    const double above = los_probability(m, 30.0 + 1e-9);
    CHECK(std::abs(below - above) < 1e-9);
    CHECK(below == doctest::Approx(1.0 - 5.0 * std::exp(-156.0 / 30.0)));
  }

  TEST_CASE("blockage probability is a non-increasing probability, links sum to one") {
    for (const LosModel& m : all_los_models()) {
      double previous = 1.0;
      for (double d = 0.0; d < 3000.0; d += 0.37) {
        const double p = los_probability(m, d);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        CHECK(p <= previous);
        previous = p;
        CHECK(std::abs(link_probability(m, Link::LoS, d) + link_probability(m, Link::NLoS, d) - 1.0) < 4e-16);
      }
    }
  }

  TEST_CASE("truncated link moments match direct quadrature") {
    QuadratureSpec spec;
    spec.rel_tol = 1e-12;
    spec.abs_tol = 1e-14;
    spec.max_subdivisions = 2000;
    for (const LosModel& m : all_los_models()) {
      for (Link link : kLinks) {
        for (double x : {1e-3, 0.5, 5.0, 29.0, 30.0, 31.0, 100.0, 800.0, 5000.0}) {
          const double expected =
              integrate([&](double z) { return z * link_probability(m, link, z); }, 0.0, x, spec);
          const double got = link_moment(m, link, x);
          INFO(describe(m), " link ", to_string(link), " x=", x);
          CHECK(std::abs(got - expected) <= 1e-9 * std::max(1.0, std::abs(expected)) + 1e-14 * x * x);
        }
      }
    }
  }

  TEST_CASE("rare links keep full relative accuracy") {
    const los::ThreeGppTwoPiece gpp{156.0, 30.0};
    // Blockage inside a few metres is around e^-50; 1 - p^L would round to zero.
    for (double d : {1.0, 3.0, 5.0, 12.0}) {
      CHECK(rel_diff(link_probability(gpp, Link::NLoS, d), 5.0 * std::exp(-156.0 / d)) < 1e-14);
    }
    CHECK(rel_diff(link_probability(los::Exponential{0.002}, Link::NLoS, 1e-6), 2e-9) < 1e-9);
    CHECK(link_probability(los::ThreeGppLinear{40.0}, Link::NLoS, 1e-3) == 1e-3 / 40.0);

    QuadratureSpec spec;
    spec.rel_tol = 1e-12;
    spec.max_subdivisions = 2000;
    for (double x : {2.0, 5.0, 10.0, 20.0}) {
      const double direct = integrate([&](double z) { return 5.0 * z * std::exp(-156.0 / z); }, 0.0, x,
                                      [&] {
                                        QuadratureSpec s = spec;
                                        s.abs_tol = 1e-300;
                                        return s;
                                      }());
      INFO("x=", x);
      CHECK(rel_diff(link_moment(gpp, Link::NLoS, x), direct) < 1e-9);
    }
    CHECK(rel_diff(link_moment(los::Exponential{0.002}, Link::NLoS, 1e-4),
                   0.002 * 1e-12 / 3.0 - 0.002 * 0.002 * 1e-16 / 8.0) < 1e-12);
  }

  TEST_CASE("link moments add up to the full disk moment") {
    for (const LosModel& m : all_los_models())
      for (double x : {0.01, 3.0, 70.0, 2500.0})
        CHECK(rel_diff(link_moment(m, Link::LoS, x) + link_moment(m, Link::NLoS, x), 0.5 * x * x) < 1e-12);
  }

  TEST_CASE("fixed transmit power") {
    TierParams t;
    t.tx_power_dbm = 46.0;
    CHECK(effective_tx_power(t, PowerModel::Fixed, 1e-13) == doctest::Approx(39.810717055349734).epsilon(1e-12));
    t.tx_power_dbm = 0.0;
    CHECK(effective_tx_power(t, PowerModel::Fixed, 1e-13) == doctest::Approx(1e-3).epsilon(1e-12));
  }

  TEST_CASE("density-dependent transmit power") {
    TierParams t;
    t.sinr_threshold_db = 0.0;
    t.pl_intercept_nl_db = 2.7;
    t.alpha_nl = 4.28;
    t.density = 1e-4;
    // Precomputed with an independent script: eta r^alpha / 10^(-A/10), r = sqrt(1/(pi lambda)).
    CHECK(rel_diff(effective_tx_power(t, PowerModel::DensityDependent, dbm_to_watts(-95.0)),
                   1.8454372069645767e-05) < 1e-12);
    t.density = 0.0;
    CHECK_THROWS_AS(effective_tx_power(t, PowerModel::DensityDependent, 1e-13), ConfigError);
  }

  TEST_CASE("power rule dependence on density") {
    TierParams t;
    t.tx_power_dbm = 30.0;
    t.pl_intercept_nl_db = 32.9;
    t.alpha_nl = 3.75;
    t.sinr_threshold_db = 1.0;
    double previous = INFINITY;
    for (double lambda : {1e-7, 1e-6, 1e-5, 1e-4, 1e-3}) {
      t.density = lambda;
      CHECK(effective_tx_power(t, PowerModel::Fixed, 1e-13) == 1.0);
      const double p = effective_tx_power(t, PowerModel::DensityDependent, 1e-13);
      CHECK(p > 0.0);
      CHECK(p < previous);
      previous = p;
    }
  }

  TEST_CASE("path gain constant") {
    TierParams t;
    t.tx_power_dbm = 0.0;
    t.pl_intercept_nl_db = 0.0;
    CHECK(b_constant(t, Link::NLoS, dbm_to_watts(t.tx_power_dbm)) == doctest::Approx(1e-3).epsilon(1e-14));
    t.tx_power_dbm = 46.0;
    t.pl_intercept_l_db = 30.8;
    CHECK(rel_diff(b_constant(t, Link::LoS, dbm_to_watts(46.0)), 0.03311311214825911) < 1e-12);
    t.tx_power_dbm = 24.0;
    t.pl_intercept_l_db = 41.1;
    CHECK(rel_diff(b_constant(t, Link::LoS, dbm_to_watts(24.0)), 1.9498445997580456e-05) < 1e-12);
  }

  TEST_CASE("validation names the offending field") {
    NetworkConfig cfg = paper_two_tier(los::Exponential{0.002}, 1.0, 10.0);
    CHECK_NOTHROW(validate(cfg));
    cfg.tiers[1].alpha_l = 2.0;
    try {
      validate(cfg);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.field() == "tiers[1].alpha_l");
    }
    cfg = paper_two_tier(los::Exponential{0.002}, 1.0, 10.0);
    cfg.tiers[0].alpha_nl = 2.3;  // below alpha_l = 2.42
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = paper_two_tier(los::Exponential{0.002}, 1.0, 10.0);
    cfg.tiers[0].density = -1.0;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg.tiers.clear();
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = paper_two_tier(los::ThreeGppLinear{0.0}, 1.0, 10.0);
    CHECK_THROWS_AS(validate(cfg), ConfigError);
  }

  TEST_CASE("two-tier preset and energy scenarios") {
    NetworkConfig cfg = paper_two_tier(los::AlwaysNlos{}, 2.0, 20.0, 1.0, EnergyScenario::S3);
    REQUIRE(cfg.tier_count() == 2);
    CHECK(cfg.tiers[0].density == doctest::Approx(2e-6));
    CHECK(cfg.tiers[1].density == doctest::Approx(2e-5));
    CHECK(cfg.tiers[0].tx_power_dbm == 46.0);
    CHECK(cfg.tiers[1].tx_power_dbm == 24.0);
    CHECK(cfg.tiers[0].energy_a == 10.3);
    CHECK(cfg.tiers[0].energy_b == 156.2);
    apply_energy_scenario(cfg, EnergyScenario::S2);
    CHECK(cfg.tiers[0].energy_a == 1.0);
    CHECK(cfg.tiers[1].energy_b == 0.0);
    CHECK(parse_energy_scenario("s1") == EnergyScenario::S1);
    CHECK_THROWS_AS(parse_energy_scenario("s9"), ConfigError);
  }
}
