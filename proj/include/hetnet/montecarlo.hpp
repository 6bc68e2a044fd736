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

/// \file montecarlo.hpp
/// Brute-force simulator: finite Poisson drops around a user at the origin,
/// per-BS blockage, shadowing and Rayleigh fading, then association and SINR.
///
/// Every trial owns a counter-based random stream keyed by (seed, trial), so
/// estimates do not depend on how trials are spread over threads.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

#include "hetnet/analytic.hpp"
#include "hetnet/model.hpp"

namespace hetnet {

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Sequential view of the Philox stream for one trial.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t trial);

  std::uint64_t next_u64();
  /// Uniform on (0, 1], 53 random bits.
  double uniform();
  /// Standard normal (Box-Muller, both outputs used).
  double normal();

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t trial_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// Poisson variate: inversion for small means, PTRS (Hoermann 1993) above 10.
std::uint64_t poisson(TrialRng& rng, double mean);

struct SimSpec {
  std::size_t trials = 10000;
  double region_radius = 0.0;  // m; 0 picks one from the densities
  std::uint64_t seed = 1;
  double ci_level = 0.95;
  unsigned threads = 0;                  // 0 = default_thread_count()
  std::size_t max_points = 20'000'000;   // expected BS count per drop above this is rejected

  void validate() const;
};

/// Sampling disk radius: the configured one, or max(2000 m, 15 / sqrt(pi lambda_min)).
double resolve_radius(const NetworkConfig& cfg, const SimSpec& spec);

/// One drop. Stations are stored tier by tier in draw order, which is also
/// the tie-breaking order.
struct Realization {
  std::vector<std::uint32_t> tier;
  std::vector<std::uint8_t> link;  // 0 NLoS, 1 LoS
  std::vector<double> distance;
  std::vector<double> mean_power;  // B g d^-alpha, fading averaged out
  std::vector<double> inst_power;  // with the fading draw

  std::size_t size() const { return tier.size(); }
  bool empty() const { return tier.empty(); }
};

Realization sample_realization(const NetworkConfig& cfg, double radius, TrialRng& rng,
                               std::size_t max_points = SimSpec{}.max_points);

/// Strongest station by instantaneous (MIRP) or average (MARP) power.
/// Ties go to the earlier station. Empty drops have no serving station.
std::optional<std::size_t> associate(const Realization& drop, Scheme scheme);

/// Linear SINR of station `serving` against all others plus noise.
double sinr(const Realization& drop, std::size_t serving, double noise_watts);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t trials = 0;
};

/// Outcome of one trial for one scheme.
struct TrialOutcome {
  bool success = false;
  int tier = -1;  // -1 when nothing was deployed in the drop
  int link = -1;
  double sinr_db = -std::numeric_limits<double>::infinity();
};

struct CoverageEstimate {
  Scheme scheme = Scheme::MARP;
  McEstimate total;
  std::vector<McEstimate> per_tier;
  McEstimate nl_part;
  McEstimate l_part;
  std::vector<TrialOutcome> trials;  // index = trial
};

/// Both schemes evaluated on the same drops.
struct SimResult {
  CoverageEstimate mirp;
  CoverageEstimate marp;
  double radius = 0.0;

  const CoverageEstimate& get(Scheme s) const { return s == Scheme::MIRP ? mirp : marp; }
};

/// MIRP success is the union event "some BS clears its tier's threshold";
/// MARP success is the associated BS clearing it.
SimResult simulate(const NetworkConfig& cfg, const SimSpec& spec);

CoverageEstimate estimate_coverage(const NetworkConfig& cfg, const SimSpec& spec, Scheme scheme);

/// Wald estimate of a proportion. One trial gives SE = 0.5.
McEstimate proportion_estimate(std::size_t successes, std::size_t trials, double ci_level);

struct PtEeEstimate {
  McEstimate pt;
  McEstimate ee;
};

/// PT and EE from a coverage estimate; errors are propagated linearly
/// through the per-trial values.
PtEeEstimate pt_ee_from(const NetworkConfig& cfg, const CoverageEstimate& cov, double ci_level);

PtEeEstimate estimate_pt_ee(const NetworkConfig& cfg, const SimSpec& spec, Scheme scheme);

/// CSV: trial,tier,link,sinr_db,success
void write_trial_dump(std::ostream& out, const CoverageEstimate& cov);

}  // namespace hetnet
