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

/// \file analytic.hpp
/// Coverage, potential throughput and energy efficiency by numerical
/// integration over the propagation-normalized ("transformed") distance
///   t = d (B g)^(-1/alpha),
/// under which every BS of tier k on link U is received with power h t^-alpha.

#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "hetnet/kernels.hpp"
#include "hetnet/model.hpp"
#include "hetnet/numerics.hpp"

namespace hetnet {

/// Point process of one tier on one link type after the distance transform.
/// The shadowing expectation is folded into per-node tables at construction,
/// so measure() and density() are plain weighted sums.
class TransformedIntensity {
 public:
  TransformedIntensity(const NetworkConfig& cfg, std::size_t tier, Link link, const QuadratureSpec& spec = {});

  std::size_t tier() const { return tier_; }
  Link link() const { return link_; }
  double alpha() const { return alpha_; }

  /// True when the process has no points (tier off, or link impossible).
  bool empty() const { return empty_; }

  /// Expected number of points with transformed distance in [0, t].
  double measure(double t) const;

  /// d measure / dt, differentiated under the expectation.
  double density(double t) const;

  /// Exponent of the Laplace transform of the interference from points
  /// beyond `lower`: integral over [lower, inf) of density(y) / (1 + y^alpha / s).
  double laplace_exponent(double s, double lower, const QuadratureSpec& spec) const;

 private:
  std::size_t tier_;
  Link link_;
  double alpha_;
  double two_pi_lambda_;
  bool empty_;
  kernels::LosShape shape_;
  std::vector<double> scale_;         // (B g_i)^(1/alpha)
  std::vector<double> density_coef_;  // w_i scale_i^2
  std::vector<double> weight_;        // w_i
};

double transformed_measure(const NetworkConfig& cfg, std::size_t k, Link link, double t,
                           const QuadratureSpec& spec = {});
double transformed_density(const NetworkConfig& cfg, std::size_t k, Link link, double t,
                           const QuadratureSpec& spec = {});

/// Laplace transform of the aggregate interference of tier j on `link`, all points.
double laplace_mirp(const NetworkConfig& cfg, std::size_t j, Link link, double s, const QuadratureSpec& spec = {});

/// Same, restricted to points with transformed distance beyond `lower`.
double laplace_marp(const NetworkConfig& cfg, std::size_t j, Link link, double s, double lower,
                    const QuadratureSpec& spec = {});

enum class Scheme { MIRP, MARP };

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view name);

struct CoverageBreakdown {
  Scheme scheme = Scheme::MARP;
  double total = 0.0;
  std::vector<double> per_tier;
  double nl_part = 0.0;
  double l_part = 0.0;
};

/// Instantaneous-power association. Requires every deployed tier to have a
/// threshold of at least 0 dB; throws ConfigError otherwise.
CoverageBreakdown coverage_mirp(const NetworkConfig& cfg, const QuadratureSpec& spec = {});

/// Switches for checking the structure of the average-power result. With
/// both off the integrand collapses to the instantaneous-power one.
struct MarpOptions {
  bool truncate_interferers = true;  // interferers only beyond the serving distance
  bool void_factor = true;           // no stronger BS in any tier
};

CoverageBreakdown coverage_marp(const NetworkConfig& cfg, const QuadratureSpec& spec = {},
                                const MarpOptions& options = {});

CoverageBreakdown coverage(const NetworkConfig& cfg, Scheme scheme, const QuadratureSpec& spec = {});

/// sum_k lambda_k p_k log2(1 + T_k), bps/Hz/m^2.
double potential_throughput(const NetworkConfig& cfg, const CoverageBreakdown& breakdown);

/// sum_k lambda_k (a_k P_k + b_k), W/m^2, with P_k from effective_tx_power.
double total_area_power(const NetworkConfig& cfg);

/// pt / total_area_power. Throws ConfigError when no tier is deployed.
double energy_efficiency(const NetworkConfig& cfg, double pt);

}  // namespace hetnet
