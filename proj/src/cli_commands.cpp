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

#include "hetnet/cli_commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "hetnet/analytic.hpp"
#include "hetnet/kernels.hpp"
#include "hetnet/montecarlo.hpp"
#include "hetnet/optimize.hpp"
#include "hetnet/parallel.hpp"
#include "hetnet/scenario.hpp"

namespace hetnet::cli {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

struct CommonOptions {
  std::string config;
  std::string preset;
  std::string los;
  std::string energy;
  std::string power;
  std::string noise;
  std::optional<double> threshold_db;
  std::optional<double> tier1_density;
  std::optional<double> tier2_density;
  unsigned threads = 0;
  std::string out;
  std::string manifest;
  int hermite_order = 30;
  double rel_tol = 1e-6;
};

void add_common(CLI::App* app, CommonOptions& o) {
  app->add_option("--config", o.config, "Scenario YAML file");
  app->add_option("--preset", o.preset, "Built-in scenario: paper-2tier (needs --los)");
  app->add_option("--los", o.los,
                  "Blockage model: exponential:KAPPA | 3gpp-linear:D1 | 3gpp-two-piece:D0:D1 | always-nlos");
  app->add_option("--energy", o.energy, "Energy coefficients for two tiers: s1 | s2 | s3");
  app->add_option("--power", o.power, "Transmit power rule: fixed | density");
  app->add_option("--noise-dbm", o.noise, "Noise power in dBm, or 'none' for an interference-limited network");
  app->add_option("--threshold-db", o.threshold_db, "SINR threshold applied to every tier, dB");
  app->add_option("--tier1.density", o.tier1_density, "Tier 1 density, BS/km^2");
  app->add_option("--tier2.density", o.tier2_density, "Tier 2 density, BS/km^2");
  app->add_option("--threads", o.threads, "Worker threads (0: HETNET_THREADS or all cores)");
  app->add_option("--out", o.out, "Write the CSV here instead of stdout (a .manifest.json sidecar is added)");
  app->add_option("--manifest", o.manifest, "Manifest path (default: <out>.manifest.json)");
  app->add_option("--hermite-order", o.hermite_order, "Gauss-Hermite nodes for the shadowing expectation");
  app->add_option("--rel-tol", o.rel_tol, "Relative quadrature tolerance");
}

NetworkConfig build_config(const CommonOptions& o) {
  NetworkConfig cfg;
  if (!o.config.empty() && !o.preset.empty()) throw ConfigError("config", "pass either --config or --preset, not both");
  if (!o.preset.empty()) {
    if (o.preset != "paper-2tier") throw ConfigError("preset", "unknown preset '" + o.preset + "'");
    if (o.los.empty())
      throw ConfigError("los", "the paper-2tier preset needs an explicit --los model (the published setup omits it)");
    cfg = paper_two_tier(parse_los_spec(o.los), 1.0, 10.0);
  } else if (!o.config.empty()) {
    cfg = load_scenario(o.config);
    if (!o.los.empty()) cfg.los_model = parse_los_spec(o.los);
  } else {
    throw ConfigError("config", "pass --config FILE or --preset paper-2tier");
  }
  if (!o.energy.empty()) apply_energy_scenario(cfg, parse_energy_scenario(o.energy));
  if (!o.power.empty()) cfg.power_model = parse_power_model(o.power);
  if (!o.noise.empty()) {
    if (o.noise == "none") {
      cfg.noise_dbm = kNoiseless;
    } else {
      try {
        std::size_t used = 0;
        cfg.noise_dbm = std::stod(o.noise, &used);
        if (used != o.noise.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ConfigError("noise_dbm", "expected a number or 'none', got '" + o.noise + "'");
      }
    }
  }
  if (o.threshold_db)
    for (auto& t : cfg.tiers) t.sinr_threshold_db = *o.threshold_db;
  auto set_density = [&](std::size_t k, const std::optional<double>& v) {
    if (!v) return;
    if (k >= cfg.tier_count()) throw ConfigError("tier" + std::to_string(k + 1) + ".density", "no such tier");
    cfg.tiers[k].density = per_km2_to_per_m2(*v);
  };
  set_density(0, o.tier1_density);
  set_density(1, o.tier2_density);
  validate(cfg);
  return cfg;
}

QuadratureSpec quad_spec(const CommonOptions& o) {
  QuadratureSpec spec;
  spec.hermite_order = o.hermite_order;
  spec.rel_tol = o.rel_tol;
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("quadrature", e.what());
  }
  return spec;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// "min:max:points", BS/km^2, log-spaced.
DensityAxis parse_axis(const std::string& text, const std::string& field) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw ConfigError(field, "expected MIN:MAX:POINTS, got '" + text + "'");
  DensityAxis a;
  try {
    a.min_per_km2 = std::stod(parts[0]);
    a.max_per_km2 = std::stod(parts[1]);
    const long n = std::stol(parts[2]);
    if (n < 1) throw std::invalid_argument("points");
    a.points = static_cast<std::size_t>(n);
  } catch (const std::exception&) {
    throw ConfigError(field, "expected MIN:MAX:POINTS, got '" + text + "'");
  }
  if (!(a.min_per_km2 > 0.0) || !(a.max_per_km2 >= a.min_per_km2))
    throw ConfigError(field, "needs 0 < MIN <= MAX");
  return a;
}

std::vector<double> axis_values(const std::string& text, const std::string& field, double fallback_per_km2) {
  if (text.empty()) return {fallback_per_km2};
  return parse_axis(text, field).values_per_km2();
}

std::string density_header(std::size_t tiers) {
  std::string h;
  for (std::size_t k = 0; k < tiers; ++k) h += "lambda" + std::to_string(k + 1) + "_per_km2,";
  return h;
}

std::string coverage_header(std::size_t tiers) {
  std::string h = "p_cov_total,";
  for (std::size_t k = 0; k < tiers; ++k) h += "p_cov_t" + std::to_string(k + 1) + ",";
  return h + "p_nl,p_l,pt,ee";
}

std::string coverage_cells(const NetworkConfig& cfg, const CoverageBreakdown& cov) {
  std::string row = fmt(cov.total);
  for (double p : cov.per_tier) row += "," + fmt(p);
  const double pt = potential_throughput(cfg, cov);
  const double power = total_area_power(cfg);
  row += "," + fmt(cov.nl_part) + "," + fmt(cov.l_part) + "," + fmt(pt) + "," +
         fmt(power > 0.0 ? pt / power : std::nan(""));
  return row;
}

struct Emitter {
  const CommonOptions& options;
  std::ostream& out;
  std::string command;
  std::vector<std::string> args;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void emit(const std::string& csv, const NetworkConfig& cfg, const QuadratureSpec& spec,
            const nlohmann::json& extra = nlohmann::json::object()) const {
    if (options.out.empty()) {
      out << csv;
      if (!options.manifest.empty()) write_manifest(options.manifest, csv, cfg, spec, extra);
      return;
    }
    std::ofstream f(options.out, std::ios::binary);
    if (!f) throw ConfigError("out", "cannot write '" + options.out + "'");
    f << csv;
    write_manifest(options.manifest.empty() ? options.out + ".manifest.json" : options.manifest, csv, cfg, spec,
                   extra);
  }

  void write_manifest(const std::string& path, const std::string& csv, const NetworkConfig& cfg,
                      const QuadratureSpec& spec, const nlohmann::json& extra) const {
    char digest[20];
    std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(fnv1a64(csv)));
    nlohmann::json m;
    m["tool"] = "hetnet";
    m["version"] = std::string(kVersion);
    m["command"] = command;
    m["arguments"] = args;
    m["config_yaml"] = dump_scenario(cfg);
    m["quadrature"] = {{"rel_tol", spec.rel_tol},
                       {"abs_tol", spec.abs_tol},
                       {"max_subdivisions", spec.max_subdivisions},
                       {"hermite_order", spec.hermite_order}};
    m["kernel_backend"] = std::string(kernels::to_string(kernels::active_backend()));
    m["wall_clock_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    m["output"] = {{"path", options.out.empty() ? "-" : options.out},
                   {"bytes", csv.size()},
                   {"fnv1a64", digest}};
    for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = it.value();
    std::ofstream f(path);
    if (!f) throw ConfigError("manifest", "cannot write '" + path + "'");
    f << m.dump(2) << "\n";
  }
};

// Commands ------------------------------------------------------------------

struct CoverageArgs {
  std::string scheme = "marp";
};

int cmd_coverage(const CommonOptions& o, const CoverageArgs& a, const Emitter& emitter) {
  const NetworkConfig cfg = build_config(o);
  const QuadratureSpec spec = quad_spec(o);
  const CoverageBreakdown cov = coverage(cfg, parse_scheme(a.scheme), spec);
  std::string csv = coverage_header(cfg.tier_count()) + "\n" + coverage_cells(cfg, cov) + "\n";
  emitter.emit(csv, cfg, spec, {{"scheme", a.scheme}});
  return kOk;
}

struct SweepArgs {
  std::string scheme = "marp";
  std::string lambda1;
  std::string lambda2;
  std::string gnuplot;
};

void write_gnuplot(const std::string& path, const std::string& data_path, bool surface) {
  std::ofstream f(path);
  if (!f) throw ConfigError("gnuplot", "cannot write '" + path + "'");
  f << "# gnuplot script for " << data_path << "\n"
    << "set datafile separator ','\n"
    << "set key autotitle columnhead\n"
    << "set logscale x\n"
    << "set xlabel 'lambda_1 (BS/km^2)'\n";
  if (surface) {
    f << "set logscale y\nset ylabel 'lambda_2 (BS/km^2)'\nset zlabel 'coverage'\nset dgrid3d\n"
      << "splot '" << data_path << "' using 1:2:3 with lines\n";
  } else {
    f << "set ylabel 'coverage probability'\n"
      << "plot '" << data_path << "' using 1:3 with linespoints, '' using 1:4 with lines, '' using 1:5 with lines\n";
  }
}

int cmd_sweep(const CommonOptions& o, const SweepArgs& a, const Emitter& emitter) {
  const NetworkConfig base = build_config(o);
  if (base.tier_count() != 2) throw ConfigError("tiers", "sweeps are defined over two tiers");
  const QuadratureSpec spec = quad_spec(o);
  const Scheme scheme = parse_scheme(a.scheme);
  const std::vector<double> l1 = axis_values(a.lambda1, "lambda1", per_m2_to_per_km2(base.tiers[0].density));
  const std::vector<double> l2 = axis_values(a.lambda2, "lambda2", per_m2_to_per_km2(base.tiers[1].density));

  std::vector<std::array<double, 2>> points;
  for (double x : l1)
    for (double y : l2) points.push_back({x, y});
  std::vector<std::string> rows(points.size());
  parallel_for(
      points.size(),
      [&](std::size_t i) {
        NetworkConfig cfg = base;
        cfg.tiers[0].density = per_km2_to_per_m2(points[i][0]);
        cfg.tiers[1].density = per_km2_to_per_m2(points[i][1]);
        rows[i] = fmt(points[i][0]) + "," + fmt(points[i][1]) + "," + coverage_cells(cfg, coverage(cfg, scheme, spec));
      },
      o.threads);

  std::string csv = density_header(2) + coverage_header(2) + "\n";
  for (const auto& r : rows) csv += r + "\n";
  emitter.emit(csv, base, spec, {{"scheme", a.scheme}});
  if (!a.gnuplot.empty()) write_gnuplot(a.gnuplot, o.out.empty() ? "sweep.csv" : o.out, l1.size() > 1 && l2.size() > 1);
  return kOk;
}

struct SimulateArgs {
  std::string scheme = "marp";
  std::string lambda1;
  std::string lambda2;
  std::size_t trials = 10000;
  std::uint64_t seed = 1;
  double radius = 0.0;
  double ci = 0.95;
  std::string dump;
};

int cmd_simulate(const CommonOptions& o, const SimulateArgs& a, const Emitter& emitter) {
  const NetworkConfig base = build_config(o);
  const QuadratureSpec spec = quad_spec(o);
  const Scheme scheme = parse_scheme(a.scheme);
  SimSpec sim;
  sim.trials = a.trials;
  sim.seed = a.seed;
  sim.region_radius = a.radius;
  sim.ci_level = a.ci;
  sim.threads = o.threads;
  sim.validate();

  std::vector<std::vector<double>> points;
  if (a.lambda1.empty() && a.lambda2.empty()) {
    std::vector<double> p;
    for (const auto& t : base.tiers) p.push_back(per_m2_to_per_km2(t.density));
    points.push_back(p);
  } else {
    if (base.tier_count() != 2) throw ConfigError("tiers", "density axes need two tiers");
    for (double x : axis_values(a.lambda1, "lambda1", per_m2_to_per_km2(base.tiers[0].density)))
      for (double y : axis_values(a.lambda2, "lambda2", per_m2_to_per_km2(base.tiers[1].density)))
        points.push_back({x, y});
  }
  if (!a.dump.empty() && points.size() != 1) throw ConfigError("dump", "per-trial dumps need a single point");

  std::string csv = density_header(base.tier_count()) + "mc_mean,mc_se,ci_low,ci_high,analytic,agree\n";
  for (const auto& p : points) {
    NetworkConfig cfg = base;
    for (std::size_t k = 0; k < p.size(); ++k) cfg.tiers[k].density = per_km2_to_per_m2(p[k]);
    const SimResult r = simulate(cfg, sim);
    const CoverageEstimate& est = r.get(scheme);
    const double analytic = coverage(cfg, scheme, spec).total;
    std::string row;
    for (double v : p) row += fmt(v) + ",";
    row += fmt(est.total.mean) + "," + fmt(est.total.std_error) + "," + fmt(est.total.ci_low) + "," +
           fmt(est.total.ci_high) + "," + fmt(analytic) + ",";
    if (sim.trials == 1)
      row += "na";
    else
      row += std::abs(analytic - est.total.mean) <= 3.0 * est.total.std_error ? "true" : "false";
    csv += row + "\n";
    if (!a.dump.empty()) {
      std::ofstream f(a.dump);
      if (!f) throw ConfigError("dump", "cannot write '" + a.dump + "'");
      write_trial_dump(f, est);
    }
  }
  emitter.emit(csv, base, spec,
               {{"scheme", a.scheme},
                {"simulation", {{"trials", sim.trials}, {"seed", sim.seed}, {"region_radius_m", sim.region_radius},
                                {"ci_level", sim.ci_level}}}});
  return kOk;
}

struct OptimizeArgs {
  std::string kind = "op1";
  std::vector<double> constraint;
  std::string constraint_range;
  double grid_min = 0.1;
  double grid_max = 1e4;
  std::size_t grid_points = 20;
  bool no_refine = false;
};

std::vector<double> constraint_values(const OptimizeArgs& a, ProblemKind kind) {
  if (!a.constraint.empty() && !a.constraint_range.empty())
    throw ConfigError("constraint", "pass either --constraint or --constraint-range");
  std::vector<double> v = a.constraint;
  if (!a.constraint_range.empty()) {
    std::vector<std::string> parts;
    std::stringstream ss(a.constraint_range);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    double lo = 0, hi = 0;
    long n = 0;
    try {
      if (parts.size() != 3) throw std::invalid_argument("shape");
      lo = std::stod(parts[0]);
      hi = std::stod(parts[1]);
      n = std::stol(parts[2]);
    } catch (const std::exception&) {
      throw ConfigError("constraint-range", "expected LO:HI:N, got '" + a.constraint_range + "'");
    }
    if (n < 1 || !(hi >= lo)) throw ConfigError("constraint-range", "needs N >= 1 and HI >= LO");
    const bool log_spaced = kind == ProblemKind::OP1;
    if (log_spaced && !(lo > 0.0)) throw ConfigError("constraint-range", "OP1 budgets must be > 0");
    for (long i = 0; i < n; ++i) {
      const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
      v.push_back(log_spaced ? std::pow(10.0, std::log10(lo) + t * (std::log10(hi) - std::log10(lo)))
                             : lo + t * (hi - lo));
    }
  }
  if (v.empty()) throw ConfigError("constraint", "pass --constraint or --constraint-range");
  std::sort(v.begin(), v.end());
  return v;
}

int cmd_optimize(const CommonOptions& o, const OptimizeArgs& a, const Emitter& emitter) {
  OptProblem problem;
  problem.kind = parse_problem_kind(a.kind);
  problem.base = build_config(o);
  problem.quadrature = quad_spec(o);
  problem.refine = !a.no_refine;
  problem.threads = o.threads;
  for (auto& axis : problem.grid) axis = {a.grid_min, a.grid_max, a.grid_points};
  const std::vector<double> values = constraint_values(a, problem.kind);
  // Placeholder constraint so validate() passes; sweep overwrites it per value.
  (problem.kind == ProblemKind::OP1 ? problem.power_budget : problem.coverage_floor) = values.front();
  problem.validate();

  const std::vector<OptResult> results = sweep(problem, values);
  std::string csv = "constraint,objective,lambda1_per_km2,lambda2_per_km2,feasible\n";
  bool any_feasible = false;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const OptResult& r = results[i];
    any_feasible = any_feasible || r.feasible;
    csv += fmt(values[i]) + "," + fmt(r.objective) + "," + fmt(per_m2_to_per_km2(r.densities[0])) + "," +
           fmt(per_m2_to_per_km2(r.densities[1])) + "," + (r.feasible ? "true" : "false") + "\n";
  }
  emitter.emit(csv, problem.base, problem.quadrature,
               {{"problem", a.kind},
                {"grid", {{"min_per_km2", a.grid_min}, {"max_per_km2", a.grid_max}, {"points", a.grid_points}}},
                {"refine", problem.refine}});
  return any_feasible ? kOk : kAllInfeasible;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coverage, throughput and energy efficiency of multi-tier cellular networks", "hetnet"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CommonOptions common;
  CoverageArgs cov;
  SweepArgs swp;
  SimulateArgs sim;
  OptimizeArgs opt;

  CLI::App* c_cov = app.add_subcommand("coverage", "Analytic coverage, PT and EE at one deployment");
  add_common(c_cov, common);
  c_cov->add_option("--scheme", cov.scheme, "Association: mirp | marp");

  CLI::App* c_swp = app.add_subcommand("sweep", "Analytic metrics over a density grid");
  add_common(c_swp, common);
  c_swp->add_option("--scheme", swp.scheme, "Association: mirp | marp");
  c_swp->add_option("--lambda1", swp.lambda1, "Tier 1 axis MIN:MAX:POINTS, BS/km^2, log-spaced");
  c_swp->add_option("--lambda2", swp.lambda2, "Tier 2 axis MIN:MAX:POINTS, BS/km^2, log-spaced");
  c_swp->add_option("--gnuplot", swp.gnuplot, "Also write a gnuplot script");

  CLI::App* c_sim = app.add_subcommand("simulate", "Monte Carlo estimate next to the analytic value");
  add_common(c_sim, common);
  c_sim->add_option("--scheme", sim.scheme, "Association: mirp | marp");
  c_sim->add_option("--lambda1", sim.lambda1, "Tier 1 axis MIN:MAX:POINTS, BS/km^2, log-spaced");
  c_sim->add_option("--lambda2", sim.lambda2, "Tier 2 axis MIN:MAX:POINTS, BS/km^2, log-spaced");
  c_sim->add_option("--trials", sim.trials, "Drops per point");
  c_sim->add_option("--seed", sim.seed, "Master seed");
  c_sim->add_option("--radius", sim.radius, "Sampling disk radius in m (0: automatic)");
  c_sim->add_option("--ci", sim.ci, "Confidence level of the reported interval");
  c_sim->add_option("--dump", sim.dump, "Per-trial CSV (single point only)");

  CLI::App* c_opt = app.add_subcommand("optimize", "Deployment optimization sweeps (op1 | op2)");
  add_common(c_opt, common);
  c_opt->add_option("--kind", opt.kind, "op1: max coverage s.t. area power <= budget; op2: max EE s.t. coverage >= floor");
  c_opt->add_option("--constraint", opt.constraint, "Budget(s) in W/m^2 (op1) or coverage floor(s) (op2)")
      ->delimiter(',');
  c_opt->add_option("--constraint-range", opt.constraint_range, "LO:HI:N (log-spaced for op1, linear for op2)");
  c_opt->add_option("--grid-min", opt.grid_min, "Smallest density on both axes, BS/km^2");
  c_opt->add_option("--grid-max", opt.grid_max, "Largest density on both axes, BS/km^2");
  c_opt->add_option("--grid-points", opt.grid_points, "Grid points per axis");
  c_opt->add_flag("--no-refine", opt.no_refine, "Skip the simplex refinement");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, er;
    const int code = app.exit(e, o, er);
    out << o.str();
    err << er.str();
    return code == 0 ? kOk : kConfigError;
  }

  Emitter emitter{common, out, "", args};
  try {
    if (c_cov->parsed()) {
      emitter.command = "coverage";
      return cmd_coverage(common, cov, emitter);
    }
    if (c_swp->parsed()) {
      emitter.command = "sweep";
      return cmd_sweep(common, swp, emitter);
    }
    if (c_sim->parsed()) {
      emitter.command = "simulate";
      return cmd_simulate(common, sim, emitter);
    }
    emitter.command = "optimize";
    return cmd_optimize(common, opt, emitter);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kNumericalError;
  } catch (const std::invalid_argument& e) {
    err << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUnexpected;
  }
}

}  // namespace hetnet::cli
