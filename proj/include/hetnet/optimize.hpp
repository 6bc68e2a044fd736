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

/// \file optimize.hpp
/// Two-tier deployment search: maximize coverage under an area power budget
/// (OP1) or energy efficiency under a coverage floor (OP2). A log-spaced grid
/// is searched exhaustively, then optionally refined by Nelder-Mead on
/// log-densities with a penalty for constraint violation.

#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hetnet/analytic.hpp"
#include "hetnet/model.hpp"
#include "hetnet/numerics.hpp"

namespace hetnet {

enum class ProblemKind { OP1, OP2 };

std::string_view to_string(ProblemKind k);
ProblemKind parse_problem_kind(std::string_view name);

/// Log-spaced density axis, BS/km^2.
struct DensityAxis {
  double min_per_km2 = 0.1;
  double max_per_km2 = 1e4;
  std::size_t points = 20;

  std::vector<double> values_per_km2() const;
};

struct OptProblem {
  ProblemKind kind = ProblemKind::OP1;
  NetworkConfig base;          // two tiers; densities are overwritten
  double power_budget = 0.0;   // W/m^2, OP1
  double coverage_floor = 0.0; // OP2
  std::array<DensityAxis, 2> grid;
  bool refine = true;
  QuadratureSpec quadrature;
  unsigned threads = 0;

  void validate() const;
};

/// Metrics of one deployment, always under average-power association.
struct DeploymentMetrics {
  double coverage = 0.0;
  double pt = 0.0;
  double ee = 0.0;
  double area_power = 0.0;
};

struct TracePoint {
  std::array<double, 2> densities{};  // BS/m^2
  double objective = 0.0;
  double constraint = 0.0;  // area power (OP1) or coverage (OP2)
  bool evaluated = true;    // false when the evaluation threw
  std::string error;
};

struct OptResult {
  std::array<double, 2> densities{};  // BS/m^2
  double objective = 0.0;
  double constraint_value = 0.0;
  bool feasible = false;
  std::vector<TracePoint> trace;
};

/// Memo of deployment metrics, shared between grid, refine and sweep steps.
/// Keyed by the radio configuration and the log-densities rounded to 1e-10.
/// Thread-safe.
class MetricsCache {
 public:
  DeploymentMetrics get(const NetworkConfig& base, std::array<double, 2> densities, const QuadratureSpec& spec);
  std::size_t size() const;
  std::size_t hits() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, DeploymentMetrics> entries_;
  std::size_t hits_ = 0;
};

DeploymentMetrics evaluate_deployment(const NetworkConfig& base, std::array<double, 2> densities,
                                      const QuadratureSpec& spec = {});

/// Grid search plus optional refinement. `start` seeds the refine step when
/// it beats the grid optimum.
OptResult solve(const OptProblem& problem, MetricsCache* cache = nullptr,
                const std::optional<std::array<double, 2>>& start = std::nullopt);

/// One solve per constraint value (ascending), each refine warm-started from
/// the previous optimum through a 1-D Brent search over the macro density.
std::vector<OptResult> sweep(const OptProblem& problem, const std::vector<double>& constraint_values,
                             MetricsCache* cache = nullptr);

}  // namespace hetnet
