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

#include "hetnet/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace hetnet {

namespace {

void reject_unknown(const YAML::Node& node, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ConfigError(where + key, "unknown key");
  }
}

double number(const YAML::Node& node, const std::string& key, const std::string& where, bool required,
              double fallback) {
  const YAML::Node v = node[key];
  if (!v) {
    if (required) throw ConfigError(where + key, "missing");
    return fallback;
  }
  try {
    return v.as<double>();
  } catch (const YAML::Exception&) {
    throw ConfigError(where + key, "expected a number, got '" + v.as<std::string>("?") + "'");
  }
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(const std::string& text, const std::string& field) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw ConfigError(field, "expected a number, got '" + text + "'");
  return v;
}

LosModel parse_los_node(const YAML::Node& node) {
  if (!node.IsMap()) throw ConfigError("los", "expected a mapping with a 'model' key");
  reject_unknown(node, {"model", "kappa_per_m", "d0_m", "d1_m"}, "los.");
  if (!node["model"]) throw ConfigError("los.model", "missing");
  const std::string model = node["model"].as<std::string>();
  if (model == "exponential") return los::Exponential{number(node, "kappa_per_m", "los.", true, 0.0)};
  if (model == "3gpp-linear") return los::ThreeGppLinear{number(node, "d1_m", "los.", true, 0.0)};
  if (model == "3gpp-two-piece")
    return los::ThreeGppTwoPiece{number(node, "d0_m", "los.", false, 156.0), number(node, "d1_m", "los.", false, 30.0)};
  if (model == "always-nlos") return los::AlwaysNlos{};
  throw ConfigError("los.model", "unknown model '" + model + "'");
}

}  // namespace

PowerModel parse_power_model(std::string_view name) {
  if (name == "fixed") return PowerModel::Fixed;
  if (name == "density" || name == "density-dependent") return PowerModel::DensityDependent;
  throw ConfigError("power_model", "unknown power model '" + std::string(name) + "' (expected fixed or density)");
}

std::string_view to_string(PowerModel m) { return m == PowerModel::Fixed ? "fixed" : "density"; }

LosModel parse_los_spec(std::string_view spec) {
  const std::vector<std::string> parts = split(spec, ':');
  const std::string& name = parts[0];
  auto want = [&](std::size_t n) {
    if (parts.size() != n + 1)
      throw ConfigError("los", "'" + name + "' takes " + std::to_string(n) + " parameter(s), got '" +
                                   std::string(spec) + "'");
  };
  if (name == "exponential") {
    want(1);
    return los::Exponential{parse_double(parts[1], "los.kappa_per_m")};
  }
  if (name == "3gpp-linear") {
    want(1);
    return los::ThreeGppLinear{parse_double(parts[1], "los.d1_m")};
  }
  if (name == "3gpp-two-piece") {
    want(2);
    return los::ThreeGppTwoPiece{parse_double(parts[1], "los.d0_m"), parse_double(parts[2], "los.d1_m")};
  }
  if (name == "always-nlos") {
    want(0);
    return los::AlwaysNlos{};
  }
  throw ConfigError("los", "unknown blockage model '" + name +
                               "' (expected exponential:K, 3gpp-linear:D1, 3gpp-two-piece:D0:D1 or always-nlos)");
}

NetworkConfig parse_scenario(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("scenario", std::string("YAML syntax error: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("scenario", "top level must be a mapping");
  reject_unknown(root, {"noise_dbm", "power_model", "los", "tiers"}, "");

  NetworkConfig cfg;
  if (const YAML::Node n = root["noise_dbm"]) {
    const std::string text = n.as<std::string>();
    cfg.noise_dbm = text == "none" ? kNoiseless : number(root, "noise_dbm", "", true, 0.0);
  }
  if (const YAML::Node p = root["power_model"]) cfg.power_model = parse_power_model(p.as<std::string>());
  if (!root["los"]) throw ConfigError("los", "missing; the blockage model must be stated explicitly");
  cfg.los_model = parse_los_node(root["los"]);

  const YAML::Node tiers = root["tiers"];
  if (!tiers || !tiers.IsSequence() || tiers.size() == 0) throw ConfigError("tiers", "expected a non-empty list");
  for (std::size_t k = 0; k < tiers.size(); ++k) {
    const YAML::Node t = tiers[k];
    const std::string w = "tiers[" + std::to_string(k) + "].";
    if (!t.IsMap()) throw ConfigError(w.substr(0, w.size() - 1), "expected a mapping");
    reject_unknown(t,
                   {"name", "density_per_km2", "tx_power_dbm", "pl_intercept_nl_db", "pl_intercept_l_db", "alpha_nl",
                    "alpha_l", "shadow_sigma_nl_db", "shadow_sigma_l_db", "sinr_threshold_db", "energy_a",
                    "energy_b"},
                   w);
    TierParams tp;
    tp.name = t["name"] ? t["name"].as<std::string>() : "tier" + std::to_string(k + 1);
    tp.density = per_km2_to_per_m2(number(t, "density_per_km2", w, true, 0.0));
    tp.tx_power_dbm = number(t, "tx_power_dbm", w, true, 0.0);
    tp.pl_intercept_nl_db = number(t, "pl_intercept_nl_db", w, true, 0.0);
    tp.pl_intercept_l_db = number(t, "pl_intercept_l_db", w, true, 0.0);
    tp.alpha_nl = number(t, "alpha_nl", w, true, 0.0);
    tp.alpha_l = number(t, "alpha_l", w, true, 0.0);
    tp.shadow_sigma_nl_db = number(t, "shadow_sigma_nl_db", w, false, 0.0);
    tp.shadow_sigma_l_db = number(t, "shadow_sigma_l_db", w, false, 0.0);
    tp.sinr_threshold_db = number(t, "sinr_threshold_db", w, false, 0.0);
    tp.energy_a = number(t, "energy_a", w, false, 1.0);
    tp.energy_b = number(t, "energy_b", w, false, 0.0);
    cfg.tiers.push_back(tp);
  }
  validate(cfg);
  return cfg;
}

NetworkConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string dump_scenario(const NetworkConfig& cfg) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  if (cfg.noise_dbm == kNoiseless)
    out << YAML::Key << "noise_dbm" << YAML::Value << "none";
  else
    out << YAML::Key << "noise_dbm" << YAML::Value << cfg.noise_dbm;
  out << YAML::Key << "power_model" << YAML::Value << std::string(to_string(cfg.power_model));
  out << YAML::Key << "los" << YAML::Value << YAML::BeginMap;
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, los::Exponential>) {
          out << YAML::Key << "model" << YAML::Value << "exponential";
          out << YAML::Key << "kappa_per_m" << YAML::Value << m.kappa;
        } else if constexpr (std::is_same_v<M, los::ThreeGppLinear>) {
          out << YAML::Key << "model" << YAML::Value << "3gpp-linear";
          out << YAML::Key << "d1_m" << YAML::Value << m.d1;
        } else if constexpr (std::is_same_v<M, los::ThreeGppTwoPiece>) {
          out << YAML::Key << "model" << YAML::Value << "3gpp-two-piece";
          out << YAML::Key << "d0_m" << YAML::Value << m.d0;
          out << YAML::Key << "d1_m" << YAML::Value << m.d1;
        } else {
          out << YAML::Key << "model" << YAML::Value << "always-nlos";
        }
      },
      cfg.los_model);
  out << YAML::EndMap;
  out << YAML::Key << "tiers" << YAML::Value << YAML::BeginSeq;
  for (const TierParams& t : cfg.tiers) {
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << t.name;
    out << YAML::Key << "density_per_km2" << YAML::Value << per_m2_to_per_km2(t.density);
    out << YAML::Key << "tx_power_dbm" << YAML::Value << t.tx_power_dbm;
    out << YAML::Key << "pl_intercept_nl_db" << YAML::Value << t.pl_intercept_nl_db;
    out << YAML::Key << "pl_intercept_l_db" << YAML::Value << t.pl_intercept_l_db;
    out << YAML::Key << "alpha_nl" << YAML::Value << t.alpha_nl;
    out << YAML::Key << "alpha_l" << YAML::Value << t.alpha_l;
    out << YAML::Key << "shadow_sigma_nl_db" << YAML::Value << t.shadow_sigma_nl_db;
    out << YAML::Key << "shadow_sigma_l_db" << YAML::Value << t.shadow_sigma_l_db;
    out << YAML::Key << "sinr_threshold_db" << YAML::Value << t.sinr_threshold_db;
    out << YAML::Key << "energy_a" << YAML::Value << t.energy_a;
    out << YAML::Key << "energy_b" << YAML::Value << t.energy_b;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace hetnet
