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

#include "hetnet/optimize.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "hetnet/parallel.hpp"

namespace hetnet {

std::string_view to_string(ProblemKind k) { return k == ProblemKind::OP1 ? "op1" : "op2"; }

ProblemKind parse_problem_kind(std::string_view name) {
  if (name == "op1" || name == "OP1") return ProblemKind::OP1;
  if (name == "op2" || name == "OP2") return ProblemKind::OP2;
  throw ConfigError("kind", "unknown problem '" + std::string(name) + "' (expected op1 or op2)");
}

std::vector<double> DensityAxis::values_per_km2() const {
  std::vector<double> v(points);
  const double lo = std::log10(min_per_km2), hi = std::log10(max_per_km2);
  for (std::size_t i = 0; i < points; ++i)
    v[i] = std::pow(10.0, points == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (points - 1));
  return v;
}

void OptProblem::validate() const {
  if (base.tier_count() != 2) throw ConfigError("tiers", "deployment optimization is defined for two tiers");
  if (kind == ProblemKind::OP1 && !(power_budget > 0.0))
    throw ConfigError("power_budget", "must be > 0 for OP1");
  if (kind == ProblemKind::OP2 && !(coverage_floor > 0.0 && coverage_floor < 1.0))
    throw ConfigError("coverage_floor", "must lie in (0, 1) for OP2");
  for (std::size_t k = 0; k < 2; ++k) {
    const DensityAxis& a = grid[k];
    const std::string f = "grid[" + std::to_string(k) + "]";
    if (!(a.min_per_km2 > 0.0) || !std::isfinite(a.max_per_km2)) throw ConfigError(f, "min must be > 0");
    if (!(a.max_per_km2 >= a.min_per_km2)) throw ConfigError(f, "max must be >= min");
    if (a.points < 2) throw ConfigError(f, "needs at least 2 points");
  }
  quadrature.validate();
}

namespace {

NetworkConfig with_densities(const NetworkConfig& base, std::array<double, 2> densities) {
  NetworkConfig cfg = base;
  cfg.tiers[0].density = densities[0];
  cfg.tiers[1].density = densities[1];
  return cfg;
}

std::string signature(const NetworkConfig& base, std::array<double, 2> densities, const QuadratureSpec& spec) {
  std::ostringstream os;
  os.precision(17);
  os << describe(base.los_model) << '|' << base.noise_dbm << '|' << static_cast<int>(base.power_model);
  for (const TierParams& t : base.tiers) {
    os << '|' << t.tx_power_dbm << ',' << t.pl_intercept_nl_db << ',' << t.pl_intercept_l_db << ',' << t.alpha_nl
       << ',' << t.alpha_l << ',' << t.shadow_sigma_nl_db << ',' << t.shadow_sigma_l_db << ','
       << t.sinr_threshold_db << ',' << t.energy_a << ',' << t.energy_b;
  }
  os << '|' << spec.rel_tol << ',' << spec.abs_tol << ',' << spec.max_subdivisions << ',' << spec.hermite_order;
  for (double d : densities) {
    const auto rounded = d > 0.0 ? static_cast<long long>(std::llround(std::log10(d) * 1e10)) : INT64_MIN;
    os << '|' << rounded;
  }
  return os.str();
}

}  // namespace

DeploymentMetrics evaluate_deployment(const NetworkConfig& base, std::array<double, 2> densities,
                                      const QuadratureSpec& spec) {
  const NetworkConfig cfg = with_densities(base, densities);
  const CoverageBreakdown cov = coverage_marp(cfg, spec);
  DeploymentMetrics m;
  m.coverage = cov.total;
  m.pt = potential_throughput(cfg, cov);
  m.area_power = total_area_power(cfg);
  m.ee = m.area_power > 0.0 ? m.pt / m.area_power : 0.0;
  return m;
}

DeploymentMetrics MetricsCache::get(const NetworkConfig& base, std::array<double, 2> densities,
                                    const QuadratureSpec& spec) {
  const std::string key = signature(base, densities, spec);
  {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(key);
    if (it != entries_.end()) {
      ++hits_;
      return it->second;
    }
  }
  const DeploymentMetrics m = evaluate_deployment(base, densities, spec);
  std::lock_guard lock(mutex_);
  entries_.emplace(key, m);
  return m;
}

std::size_t MetricsCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

std::size_t MetricsCache::hits() const {
  std::lock_guard lock(mutex_);
  return hits_;
}

namespace {

constexpr double kPenalty = 1e3;

struct Evaluator {
  const OptProblem& problem;
  MetricsCache& cache;

  TracePoint operator()(std::array<double, 2> densities) const {
    TracePoint tp;
    tp.densities = densities;
    try {
      const DeploymentMetrics m = cache.get(problem.base, densities, problem.quadrature);
      if (problem.kind == ProblemKind::OP1) {
        tp.objective = m.coverage;
        tp.constraint = m.area_power;
      } else {
        tp.objective = m.ee;
        tp.constraint = m.coverage;
      }
    } catch (const std::exception& e) {
      tp.evaluated = false;
      tp.error = e.what();
    }
    return tp;
  }

  // Relative overshoot of the budget (OP1) or coverage shortfall (OP2).
  double violation(const TracePoint& tp) const {
    if (!tp.evaluated) return std::numeric_limits<double>::infinity();
    if (problem.kind == ProblemKind::OP1)
      return std::max(0.0, (tp.constraint - problem.power_budget) / problem.power_budget);
    return std::max(0.0, problem.coverage_floor - tp.constraint);
  }

  bool feasible(const TracePoint& tp) const { return tp.evaluated && violation(tp) == 0.0; }

  double score(const TracePoint& tp) const {
    if (!tp.evaluated) return -std::numeric_limits<double>::infinity();
    return tp.objective - kPenalty * violation(tp);
  }
};

struct Incumbent {
  std::optional<TracePoint> best_feasible;
  std::optional<TracePoint> least_violating;

  void offer(const Evaluator& ev, const TracePoint& tp) {
    if (!tp.evaluated) return;
    if (ev.feasible(tp)) {
      if (!best_feasible || tp.objective > best_feasible->objective) best_feasible = tp;
    }
    if (!least_violating) {
      least_violating = tp;
      return;
    }
    const double v = ev.violation(tp), w = ev.violation(*least_violating);
    if (v < w || (v == w && tp.objective > least_violating->objective)) least_violating = tp;
  }
};

std::array<double, 2> to_log(std::array<double, 2> d) { return {std::log10(d[0]), std::log10(d[1])}; }
std::array<double, 2> from_log(std::array<double, 2> x) { return {std::pow(10.0, x[0]), std::pow(10.0, x[1])}; }

struct LogBounds {
  std::array<double, 2> lo, hi, step;
};

LogBounds bounds_of(const OptProblem& p) {
  LogBounds b;
  for (std::size_t k = 0; k < 2; ++k) {
    b.lo[k] = std::log10(per_km2_to_per_m2(p.grid[k].min_per_km2));
    b.hi[k] = std::log10(per_km2_to_per_m2(p.grid[k].max_per_km2));
    b.step[k] = (b.hi[k] - b.lo[k]) / static_cast<double>(p.grid[k].points - 1);
  }
  return b;
}

// Downhill simplex maximizing the penalized score over log10 densities.
void nelder_mead(const Evaluator& ev, const LogBounds& bounds, std::array<double, 2> start, OptResult& result,
                 Incumbent& incumbent) {
  using Point = std::array<double, 2>;
  auto clamp = [&](Point x) {
    for (std::size_t k = 0; k < 2; ++k) x[k] = std::clamp(x[k], bounds.lo[k], bounds.hi[k]);
    return x;
  };
  auto value = [&](Point x) {
    const TracePoint tp = ev(from_log(x));
    result.trace.push_back(tp);
    incumbent.offer(ev, tp);
    return -ev.score(tp);  // minimize
  };

  std::array<Point, 3> simplex = {clamp(start), clamp({start[0] + bounds.step[0], start[1]}),
                                  clamp({start[0], start[1] + bounds.step[1]})};
  // A vertex clamped onto the start would collapse the simplex; step inward instead.
  for (std::size_t k = 0; k < 2; ++k)
    if (simplex[k + 1] == simplex[0]) simplex[k + 1][k] = simplex[0][k] - bounds.step[k];
  std::array<double, 3> f{};
  for (std::size_t i = 0; i < 3; ++i) f[i] = value(simplex[i]);

  constexpr int kMaxIter = 40;
  for (int iter = 0; iter < kMaxIter; ++iter) {
    std::array<std::size_t, 3> order = {0, 1, 2};
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
    const std::size_t best = order[0], mid = order[1], worst = order[2];

    double size = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t k = 0; k < 2; ++k) size = std::max(size, std::abs(simplex[i][k] - simplex[best][k]));
    if (size < 1e-3 || std::abs(f[worst] - f[best]) <= 1e-10 * (std::abs(f[best]) + 1e-12)) break;

    Point centroid{};
    for (std::size_t k = 0; k < 2; ++k) centroid[k] = 0.5 * (simplex[best][k] + simplex[mid][k]);
    auto along = [&](double t) {
      Point x;
      for (std::size_t k = 0; k < 2; ++k) x[k] = centroid[k] + t * (simplex[worst][k] - centroid[k]);
      return clamp(x);
    };

    const Point xr = along(-1.0);
    const double fr = value(xr);
    if (fr < f[best]) {
      const Point xe = along(-2.0);
      const double fe = value(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        f[worst] = fe;
      } else {
        simplex[worst] = xr;
        f[worst] = fr;
      }
      continue;
    }
    if (fr < f[mid]) {
      simplex[worst] = xr;
      f[worst] = fr;
      continue;
    }
    const Point xc = fr < f[worst] ? along(-0.5) : along(0.5);
    const double fc = value(xc);
    if (fc < std::min(fr, f[worst])) {
      simplex[worst] = xc;
      f[worst] = fc;
      continue;
    }
    for (std::size_t i : {mid, worst}) {
      for (std::size_t k = 0; k < 2; ++k) simplex[i][k] = 0.5 * (simplex[i][k] + simplex[best][k]);
      f[i] = value(simplex[i]);
    }
  }
}

}  // namespace

OptResult solve(const OptProblem& problem, MetricsCache* cache, const std::optional<std::array<double, 2>>& start) {
  problem.validate();
  validate(problem.base);
  MetricsCache local;
  Evaluator ev{problem, cache ? *cache : local};

  const std::vector<double> axis1 = problem.grid[0].values_per_km2();
  const std::vector<double> axis2 = problem.grid[1].values_per_km2();
  std::vector<std::array<double, 2>> lattice;
  for (double l1 : axis1)
    for (double l2 : axis2) lattice.push_back({per_km2_to_per_m2(l1), per_km2_to_per_m2(l2)});

  OptResult result;
  result.trace.resize(lattice.size());
  parallel_for(
      lattice.size(), [&](std::size_t i) { result.trace[i] = ev(lattice[i]); }, problem.threads);

  Incumbent incumbent;
  for (const TracePoint& tp : result.trace) incumbent.offer(ev, tp);

  if (problem.refine && incumbent.least_violating) {
    const LogBounds bounds = bounds_of(problem);
    const TracePoint& seed = incumbent.best_feasible ? *incumbent.best_feasible : *incumbent.least_violating;
    std::array<double, 2> x0 = to_log(seed.densities);
    if (start) {
      const TracePoint tp = ev(*start);
      result.trace.push_back(tp);
      incumbent.offer(ev, tp);
      if (ev.score(tp) > ev.score(seed)) x0 = to_log(*start);
    }
    nelder_mead(ev, bounds, x0, result, incumbent);
  }

  const std::optional<TracePoint>& pick =
      incumbent.best_feasible ? incumbent.best_feasible : incumbent.least_violating;
  if (pick) {
    result.densities = pick->densities;
    result.objective = pick->objective;
    result.constraint_value = pick->constraint;
  }
  result.feasible = incumbent.best_feasible.has_value();
  return result;
}

std::vector<OptResult> sweep(const OptProblem& problem, const std::vector<double>& constraint_values,
                             MetricsCache* cache) {
  if (!std::is_sorted(constraint_values.begin(), constraint_values.end()))
    throw ConfigError("constraint", "sweep values must be sorted ascending");
  MetricsCache local;
  MetricsCache& shared = cache ? *cache : local;

  std::vector<OptResult> out;
  std::optional<std::array<double, 2>> previous;
  for (double value : constraint_values) {
    OptProblem p = problem;
    (p.kind == ProblemKind::OP1 ? p.power_budget : p.coverage_floor) = value;

    std::optional<std::array<double, 2>> start;
    if (p.refine && previous) {
      // Slice through the previous optimum: best macro density for its small-cell density.
      const Evaluator ev{p, shared};
      const LogBounds b = bounds_of(p);
      const double small = (*previous)[1];
      auto neg_score = [&](double x) { return -ev.score(ev({std::pow(10.0, x), small})); };
      std::uintmax_t iters = 30;
      const auto [x, f] = boost::math::tools::brent_find_minima(neg_score, b.lo[0], b.hi[0], 20, iters);
      (void)f;
      start = std::array<double, 2>{std::pow(10.0, x), small};
    }
    try {
      OptResult r = solve(p, &shared, start);
      if (r.feasible) previous = r.densities;
      out.push_back(std::move(r));
    } catch (const NumericalError& e) {
      OptResult r;
      r.trace.push_back({{0.0, 0.0}, 0.0, 0.0, false, e.what()});
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace hetnet
