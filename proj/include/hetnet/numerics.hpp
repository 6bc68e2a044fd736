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

/// \file numerics.hpp
/// Quadrature backbone: adaptive Gauss-Kronrod on finite ranges, a mapped
/// variant for [a, inf), and Gauss-Hermite expectations over dB-domain
/// log-normal shadowing.

#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hetnet {

struct QuadratureSpec {
  double rel_tol = 1e-6;
  double abs_tol = 1e-10;
  int max_subdivisions = 200;
  int hermite_order = 30;
  double tail_epsilon = 1e-9;
  /// Probe the tail of [a, inf) integrals for non-decay before integrating.
  bool divergence_check = true;

  void validate() const;
};

/// Numerical failure; carries the best available estimate and its error bound.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double estimate, double error_bound)
      : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}
  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

class DivergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

using ScalarFn = std::function<double(double)>;

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

/// Globally adaptive 21-point Gauss-Kronrod quadrature on [a, b].
/// Stops once error <= max(abs_tol, rel_tol |value|); throws NumericalError
/// when the subdivision budget runs out first.
QuadratureResult integrate_detailed(const ScalarFn& f, double a, double b, const QuadratureSpec& spec = {});

inline double integrate(const ScalarFn& f, double a, double b, const QuadratureSpec& spec = {}) {
  return integrate_detailed(f, a, b, spec).value;
}

/// Integral over [a, inf) through y = a + scale t/(1-t). `scale` should be the
/// length on which f varies; it only affects efficiency.
/// Throws DivergenceError when successive doubling panels far in the tail do not shrink.
QuadratureResult integrate_improper_detailed(const ScalarFn& f, double a, const QuadratureSpec& spec = {},
                                             double scale = 1.0);

inline double integrate_improper(const ScalarFn& f, double a, const QuadratureSpec& spec = {},
                                 double scale = 1.0) {
  return integrate_improper_detailed(f, a, spec, scale).value;
}

/// Physicists' Gauss-Hermite rule: \f$\int e^{-x^2} f(x) dx \approx \sum w_i f(x_i)\f$.
struct HermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes ascending; computed once per order and cached.
const HermiteRule& gauss_hermite(int order);

/// Quadrature nodes for E[f(g)] with g = 10^(X/10), X ~ N(0, sigma_db^2).
/// Weights sum to one. sigma_db == 0 collapses to the single node g = 1.
struct LognormalNodes {
  std::vector<double> gains;
  std::vector<double> weights;
};

LognormalNodes lognormal_nodes(double sigma_db, int order);

/// E[f(g)] for dB-domain log-normal g. Throws NumericalError naming the
/// node when f is not finite there.
double lognormal_expectation(const ScalarFn& f, double sigma_db, const QuadratureSpec& spec = {});

}  // namespace hetnet
