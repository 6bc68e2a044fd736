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

// Reference kernels. They defer to the model functions so that the vector
// variant is checked against the same definitions the rest of the code uses.

#include <cmath>

#include "hetnet/kernels.hpp"

namespace hetnet::kernels::scalar {

namespace {

LosModel to_model(const LosShape& s) {
  switch (s.kind) {
    case LosShape::Kind::Exponential: return los::Exponential{s.kappa};
    case LosShape::Kind::Linear: return los::ThreeGppLinear{s.d1};
    case LosShape::Kind::TwoPiece: return los::ThreeGppTwoPiece{s.d0, s.d1};
    case LosShape::Kind::AlwaysNlos: break;
  }
  return los::AlwaysNlos{};
}

}  // namespace

double density_sum(const LosShape& shape, Link link, const double* scale, const double* coef, std::size_t n,
                   double t) {
  const LosModel model = to_model(shape);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += coef[i] * link_probability(model, link, scale[i] * t);
  return sum;
}

double moment_sum(const LosShape& shape, Link link, const double* scale, const double* weight, std::size_t n,
                  double t) {
  const LosModel model = to_model(shape);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += weight[i] * link_moment(model, link, scale[i] * t);
  return sum;
}

void received_powers(const LosShape& shape, const TierDraw& tier, const PowerColumns& cols, std::size_t n) {
  const LosModel model = to_model(shape);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = tier.radius * std::sqrt(cols.u_radius[i]);
    const int u = cols.u_los[i] < los_probability(model, d) ? 1 : 0;
    const double mean = std::exp(tier.log_b[u] + tier.log_sigma[u] * cols.normal[i] - tier.alpha[u] * std::log(d));
    cols.distance[i] = d;
    cols.link[i] = static_cast<std::uint8_t>(u);
    cols.mean_power[i] = mean;
    cols.inst_power[i] = mean * -std::log(cols.u_fading[i]);
  }
}

}  // namespace hetnet::kernels::scalar
