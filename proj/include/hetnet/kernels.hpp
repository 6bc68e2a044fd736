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

/// \file kernels.hpp
/// Hot inner loops with a scalar reference and an AVX2 variant picked at
/// runtime. Both variants compute the same formulas; the vector one uses
/// its own exp/log, so results agree to a few ulps, not bit for bit.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "hetnet/model.hpp"

namespace hetnet::kernels {

enum class Backend { Scalar, Avx2 };

std::string_view to_string(Backend b);

/// True when the AVX2 variant was compiled in and the CPU supports AVX2+FMA.
bool avx2_available();

/// Backend in use. Starts as the best available one unless HETNET_SIMD says
/// otherwise ("scalar" or "avx2").
Backend active_backend();

/// Throws std::invalid_argument when asking for an unavailable backend.
void set_backend(Backend b);

/// Flattened blockage model that the kernels can branch on cheaply.
struct LosShape {
  enum class Kind { Exponential, Linear, TwoPiece, AlwaysNlos };
  Kind kind = Kind::AlwaysNlos;
  double kappa = 0.0;  // Exponential
  double d0 = 0.0;     // TwoPiece
  double d1 = 0.0;     // Linear, TwoPiece
  double p1 = 0.0;     // TwoPiece: p^L(d1)
};

LosShape los_shape(const LosModel& model);

/// sum_i coef[i] * p^link(scale[i] * t)
double density_sum(const LosShape& shape, Link link, const double* scale, const double* coef, std::size_t n,
                   double t);

/// sum_i weight[i] * M^link(scale[i] * t), M the truncated first moment of p^link.
double moment_sum(const LosShape& shape, Link link, const double* scale, const double* weight, std::size_t n,
                  double t);

/// Per-tier constants for turning uniforms and normals into received powers.
struct TierDraw {
  double radius = 0.0;  // sampling disk
  double log_b[2] = {0.0, 0.0};        // ln B, indexed by Link
  double log_sigma[2] = {0.0, 0.0};    // sigma_dB ln(10)/10, indexed by Link
  double alpha[2] = {4.0, 4.0};
};

/// Columns for one tier of one realization. Inputs are uniforms in (0, 1]
/// and standard normals; outputs are filled for indices [0, n).
struct PowerColumns {
  const double* u_radius = nullptr;
  const double* u_los = nullptr;
  const double* normal = nullptr;
  const double* u_fading = nullptr;
  double* distance = nullptr;
  std::uint8_t* link = nullptr;  // 0 NLoS, 1 LoS
  double* mean_power = nullptr;  // B g d^-alpha
  double* inst_power = nullptr;  // mean_power * h, h = -ln u_fading
};

void received_powers(const LosShape& shape, const TierDraw& tier, const PowerColumns& cols, std::size_t n);

// Direct entry points, used by the equivalence tests.
namespace scalar {
double density_sum(const LosShape&, Link, const double*, const double*, std::size_t, double);
double moment_sum(const LosShape&, Link, const double*, const double*, std::size_t, double);
void received_powers(const LosShape&, const TierDraw&, const PowerColumns&, std::size_t);
}  // namespace scalar

namespace avx2 {
double density_sum(const LosShape&, Link, const double*, const double*, std::size_t, double);
double moment_sum(const LosShape&, Link, const double*, const double*, std::size_t, double);
void received_powers(const LosShape&, const TierDraw&, const PowerColumns&, std::size_t);
}  // namespace avx2

}  // namespace hetnet::kernels
