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

#include "hetnet/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>
#include <sstream>

namespace hetnet {

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0)) throw std::invalid_argument("QuadratureSpec: rel_tol must be > 0");
  if (!(abs_tol > 0.0)) throw std::invalid_argument("QuadratureSpec: abs_tol must be > 0");
  if (!(tail_epsilon > 0.0)) throw std::invalid_argument("QuadratureSpec: tail_epsilon must be > 0");
  if (max_subdivisions < 1) throw std::invalid_argument("QuadratureSpec: max_subdivisions must be >= 1");
  if (hermite_order < 5) throw std::invalid_argument("QuadratureSpec: hermite_order must be >= 5");
}

namespace {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525452398, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod21(const ScalarFn& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resk = fc * kWgk[10];
  double resg = 0.0;
  double resabs = std::abs(resk);
  std::array<double, 10> f1{}, f2{};
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    const double sum = f1[j] + f2[j];
    resk += kWgk[j] * sum;
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * sum;
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fc - mean);
  for (int j = 0; j < 10; ++j) resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

  const double value = resk * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double kEps = 2.220446049250313e-16;
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
  return {a, b, value, err};
}

}  // namespace

QuadratureResult integrate_detailed(const ScalarFn& f, double a, double b, const QuadratureSpec& spec) {
  spec.validate();
  if (!(a <= b)) throw std::invalid_argument("integrate: requires a <= b");
  if (a == b) return {0.0, 0.0, 0};

  std::priority_queue<Panel> panels;
  Panel first = gauss_kronrod21(f, a, b);
  double total = first.value;
  double total_err = first.error;
  panels.push(first);
  int count = 1;

  auto tolerance = [&] { return std::max(spec.abs_tol, spec.rel_tol * std::abs(total)); };
  while (total_err > tolerance()) {
    if (!std::isfinite(total)) {
      throw NumericalError("integrate: non-finite integrand on [" + std::to_string(a) + ", " +
                               std::to_string(b) + "]",
                           total, total_err);
    }
    if (count >= spec.max_subdivisions) {
      std::ostringstream os;
      os << "integrate: subdivision budget (" << spec.max_subdivisions << ") exhausted; estimate " << total
         << " +/- " << total_err;
      throw NumericalError(os.str(), total, total_err);
    }
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Panel can no longer be split at double precision.
      std::ostringstream os;
      os << "integrate: interval collapsed near " << worst.a << "; estimate " << total << " +/- " << total_err;
      throw NumericalError(os.str(), total, total_err);
    }
    const Panel left = gauss_kronrod21(f, worst.a, mid);
    const Panel right = gauss_kronrod21(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++count;
    // Running sums drift; refresh them from the panels now and then.
    if (count % 32 == 0) {
      auto copy = panels;
      total = 0.0;
      total_err = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        total_err += copy.top().error;
        copy.pop();
      }
    }
  }
  if (!std::isfinite(total)) throw NumericalError("integrate: non-finite result", total, total_err);
  return {total, total_err, count};
}

QuadratureResult integrate_improper_detailed(const ScalarFn& f, double a, const QuadratureSpec& spec,
                                             double scale) {
  spec.validate();
  if (!std::isfinite(a)) throw std::invalid_argument("integrate_improper: lower limit must be finite");
  if (!(scale > 0.0) || !std::isfinite(scale)) scale = 1.0;

  if (spec.divergence_check) {
    // Doubling panels [Y, 2Y] far in the tail must shrink for an integrable,
    // eventually monotone integrand.
    double previous = -1.0;
    bool growing = true;
    for (int m = 24; m <= 28; m += 2) {
      const double lo = a + scale * std::ldexp(1.0, m);
      const double panel = std::abs(gauss_kronrod21(f, lo, 2.0 * lo - a).value);
      if (!std::isfinite(panel)) throw DivergenceError("integrate_improper: non-finite tail panel", panel, panel);
      if (previous >= 0.0 && !(panel >= previous * 0.999)) growing = false;
      if (panel == 0.0) growing = false;
      previous = panel;
    }
    if (growing) {
      throw DivergenceError("integrate_improper: integrand does not decay (tail panels not shrinking)", previous,
                            std::numeric_limits<double>::infinity());
    }
  }

  auto mapped = [&](double t) {
    if (t >= 1.0) return 0.0;
    const double one_minus = 1.0 - t;
    const double y = a + scale * t / one_minus;
    const double jac = scale / (one_minus * one_minus);
    const double v = f(y);
    if (v == 0.0) return 0.0;
    return v * jac;
  };
  return integrate_detailed(mapped, 0.0, 1.0, spec);
}

namespace {

HermiteRule compute_hermite(int n) {
  // Newton iteration on the orthonormal Hermite recurrence.
  HermiteRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const double pim4 = 0.7511255444649425;  // pi^(-1/4)
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
    else if (i == 1)
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * rule.nodes[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * rule.nodes[1];
    else
      z = 2.0 * z - rule.nodes[i - 2];
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    rule.nodes[i] = z;
    rule.nodes[n - 1 - i] = -z;
    rule.weights[i] = 2.0 / (pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  // Stored ascending; the odd-order middle node is exactly zero.
  std::reverse(rule.nodes.begin(), rule.nodes.end());
  std::reverse(rule.weights.begin(), rule.weights.end());
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const HermiteRule& gauss_hermite(int order) {
  if (order < 1) throw std::invalid_argument("gauss_hermite: order must be >= 1");
  static std::mutex mutex;
  static std::map<int, HermiteRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_hermite(order)).first;
  return it->second;
}

LognormalNodes lognormal_nodes(double sigma_db, int order) {
  if (!(sigma_db >= 0.0) || !std::isfinite(sigma_db))
    throw std::invalid_argument("lognormal_nodes: sigma_db must be finite and >= 0");
  LognormalNodes out;
  if (sigma_db == 0.0) {
    out.gains = {1.0};
    out.weights = {1.0};
    return out;
  }
  const HermiteRule& rule = gauss_hermite(order);
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  // X = sqrt(2) sigma x, and ln g = X ln(10)/10.
  const double ln_scale = std::numbers::sqrt2 * sigma_db * std::numbers::ln10 / 10.0;
  out.gains.reserve(rule.nodes.size());
  out.weights.reserve(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    out.gains.push_back(std::exp(ln_scale * rule.nodes[i]));
    out.weights.push_back(rule.weights[i] * inv_sqrt_pi);
  }
  return out;
}

double lognormal_expectation(const ScalarFn& f, double sigma_db, const QuadratureSpec& spec) {
  spec.validate();
  const LognormalNodes nodes = lognormal_nodes(sigma_db, spec.hermite_order);
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.gains.size(); ++i) {
    const double v = f(nodes.gains[i]);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "lognormal_expectation: integrand is " << v << " at node " << i << " (g = " << nodes.gains[i] << ")";
      throw NumericalError(os.str(), sum, std::numeric_limits<double>::infinity());
    }
    sum += nodes.weights[i] * v;
  }
  return sum;
}

}  // namespace hetnet
