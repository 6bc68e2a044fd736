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
#include <cstdint>
#include <random>
#include <vector>

#include "fixtures.hpp"
#include "hetnet/kernels.hpp"
#include "hetnet/numerics.hpp"

using namespace hetnet;
using hetnet::testing::rel_diff;

namespace {

std::vector<LosModel> shapes() {
  return {los::Exponential{0.002}, los::Exponential{0.05}, los::ThreeGppLinear{40.0},
          los::ThreeGppTwoPiece{156.0, 30.0}, los::AlwaysNlos{}};
}

struct Nodes {
  std::vector<double> scale;
  std::vector<double> coef;
};

// Mimics a shadowing table: scales spread over several decades, odd count to
// exercise the vector tail.
Nodes make_nodes(std::size_t n) {
  Nodes out;
  const LognormalNodes ln = lognormal_nodes(8.0, static_cast<int>(n));
  for (std::size_t i = 0; i < n; ++i) {
    out.scale.push_back(std::pow(1e-3 * ln.gains[i], 1.0 / 3.2));
    out.coef.push_back(ln.weights[i]);
  }
  return out;
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("backend names and availability") {
    CHECK(kernels::to_string(kernels::Backend::Scalar) == "scalar");
    CHECK(kernels::to_string(kernels::Backend::Avx2) == "avx2");
    const kernels::Backend before = kernels::active_backend();
    kernels::set_backend(kernels::Backend::Scalar);
    CHECK(kernels::active_backend() == kernels::Backend::Scalar);
    if (!kernels::avx2_available()) CHECK_THROWS_AS(kernels::set_backend(kernels::Backend::Avx2), std::invalid_argument);
    kernels::set_backend(before);
  }

  TEST_CASE("scalar sums agree with the model functions") {
    const Nodes nodes = make_nodes(7);
    for (const LosModel& m : shapes()) {
      const kernels::LosShape shape = kernels::los_shape(m);
      for (Link link : kLinks) {
        for (double t : {0.5, 20.0, 300.0}) {
          double density = 0.0, moment = 0.0;
          for (std::size_t i = 0; i < nodes.scale.size(); ++i) {
            density += nodes.coef[i] * link_probability(m, link, nodes.scale[i] * t);
            moment += nodes.coef[i] * link_moment(m, link, nodes.scale[i] * t);
          }
          CHECK(rel_diff(kernels::scalar::density_sum(shape, link, nodes.scale.data(), nodes.coef.data(), 7, t),
                         density) < 1e-14);
          CHECK(rel_diff(kernels::scalar::moment_sum(shape, link, nodes.scale.data(), nodes.coef.data(), 7, t),
                         moment) < 1e-14);
        }
      }
    }
  }

  TEST_CASE("vector sums match scalar sums") {
    if (!kernels::avx2_available()) {
      MESSAGE("AVX2 not available; skipping");
      return;
    }
    for (std::size_t n : {1u, 3u, 4u, 13u, 30u}) {
      const Nodes nodes = make_nodes(n);
      for (const LosModel& m : shapes()) {
        const kernels::LosShape shape = kernels::los_shape(m);
        for (Link link : kLinks) {
          for (double t = 1e-3; t < 1e6; t *= 1.7) {
            const double s_den = kernels::scalar::density_sum(shape, link, nodes.scale.data(), nodes.coef.data(), n, t);
            const double v_den = kernels::avx2::density_sum(shape, link, nodes.scale.data(), nodes.coef.data(), n, t);
            const double s_mom = kernels::scalar::moment_sum(shape, link, nodes.scale.data(), nodes.coef.data(), n, t);
            const double v_mom = kernels::avx2::moment_sum(shape, link, nodes.scale.data(), nodes.coef.data(), n, t);
            INFO(describe(m), " ", to_string(link), " n=", n, " t=", t);
            CHECK(std::abs(s_den - v_den) <= 1e-12 * std::abs(s_den) + 1e-300);
            CHECK(std::abs(s_mom - v_mom) <= 1e-12 * std::abs(s_mom) + 1e-300);
          }
        }
      }
    }
  }

  TEST_CASE("vector received powers match scalar ones") {
    if (!kernels::avx2_available()) {
      MESSAGE("AVX2 not available; skipping");
      return;
    }
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss;
    for (std::size_t n : {1u, 4u, 5u, 1001u}) {
      std::vector<double> ur(n), ul(n), z(n), uf(n);
      for (std::size_t i = 0; i < n; ++i) {
        ur[i] = 1.0 - unif(gen);
        ul[i] = 1.0 - unif(gen);
        z[i] = gauss(gen);
        uf[i] = 1.0 - unif(gen);
      }
      kernels::TierDraw draw;
      draw.radius = 3000.0;
      draw.log_b[0] = std::log(1e-3);
      draw.log_b[1] = std::log(3e-2);
      draw.log_sigma[0] = 8.0 * std::log(10.0) / 10.0;
      draw.log_sigma[1] = 4.0 * std::log(10.0) / 10.0;
      draw.alpha[0] = 4.28;
      draw.alpha[1] = 2.42;
      for (const LosModel& m : shapes()) {
        const kernels::LosShape shape = kernels::los_shape(m);
        std::vector<double> d1(n), d2(n), mp1(n), mp2(n), ip1(n), ip2(n);
        std::vector<std::uint8_t> l1(n), l2(n);
        kernels::scalar::received_powers(shape, draw, {ur.data(), ul.data(), z.data(), uf.data(), d1.data(), l1.data(), mp1.data(), ip1.data()}, n);
        kernels::avx2::received_powers(shape, draw, {ur.data(), ul.data(), z.data(), uf.data(), d2.data(), l2.data(), mp2.data(), ip2.data()}, n);
        for (std::size_t i = 0; i < n; ++i) {
          CHECK(rel_diff(d1[i], d2[i]) < 1e-13);
          CHECK(l1[i] == l2[i]);
          CHECK(rel_diff(mp1[i], mp2[i]) < 1e-12);
          CHECK(rel_diff(ip1[i], ip2[i]) < 1e-12);
        }
      }
    }
  }

  TEST_CASE("dispatcher follows the selected backend") {
    if (!kernels::avx2_available()) {
      MESSAGE("AVX2 not available; skipping");
      return;
    }
    const NetworkConfig cfg = paper_two_tier(los::Exponential{0.002}, 3.0, 30.0);
    const kernels::Backend before = kernels::active_backend();
    const kernels::LosShape shape = kernels::los_shape(cfg.los_model);
    const Nodes nodes = make_nodes(30);
    kernels::set_backend(kernels::Backend::Scalar);
    const double scalar = kernels::moment_sum(shape, Link::LoS, nodes.scale.data(), nodes.coef.data(), 30, 250.0);
    kernels::set_backend(kernels::Backend::Avx2);
    const double vector = kernels::moment_sum(shape, Link::LoS, nodes.scale.data(), nodes.coef.data(), 30, 250.0);
    kernels::set_backend(before);
    CHECK(rel_diff(scalar, vector) < 1e-12);
  }
}
