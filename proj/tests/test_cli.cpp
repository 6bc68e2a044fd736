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

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hetnet/analytic.hpp"
#include "hetnet/cli_commands.hpp"

using namespace hetnet;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::vector<std::string> cells(const std::string& line) {
  std::vector<std::string> v;
  std::stringstream in(line);
  for (std::string c; std::getline(in, c, ',');) v.push_back(c);
  return v;
}

const std::string kSingle = std::string(HETNET_SCENARIO_DIR) + "/single-tier-nlos.yaml";

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "hetnet-cli-tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("coverage prints a header and one row") {
    const Run r = run({"coverage", "--preset", "paper-2tier", "--los", "exponential:0.002"});
    REQUIRE(r.code == cli::kOk);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 2);
    CHECK(ls[0] == "p_cov_total,p_cov_t1,p_cov_t2,p_nl,p_l,pt,ee");
    CHECK(cells(ls[1]).size() == 7);
    const double expected = coverage_marp(paper_two_tier(los::Exponential{0.002}, 1.0, 10.0)).total;
    CHECK(std::stod(cells(ls[1])[0]) == doctest::Approx(expected).epsilon(1e-9));
  }

  TEST_CASE("exit codes") {
    CHECK(run({"coverage", "--preset", "paper-2tier"}).code == cli::kConfigError);
    CHECK(run({"coverage", "--preset", "paper-2tier", "--los", "exponential:0.002", "--tier1.density", "-1"}).code ==
          cli::kConfigError);
    CHECK(run({"coverage", "--bogus"}).code == cli::kConfigError);
    CHECK(run({"coverage", "--config", "/nonexistent.yaml"}).code == cli::kConfigError);
    CHECK(run({"coverage", "--config", kSingle, "--scheme", "mirp", "--threshold-db", "-1"}).code ==
          cli::kConfigError);
    const Run infeasible = run({"optimize", "--preset", "paper-2tier", "--los", "exponential:0.002", "--kind", "op1",
                                "--constraint", "1e-12", "--grid-points", "2", "--no-refine"});
    CHECK(infeasible.code == cli::kAllInfeasible);
    CHECK(lines(infeasible.out).at(1).ends_with(",false"));
    const Run version = run({"--version"});
    CHECK(version.code == cli::kOk);
    CHECK(version.out.find("0.1.0") != std::string::npos);
  }

  TEST_CASE("idle second tier matches the single-tier result") {
    const Run r = run({"coverage", "--config", kSingle, "--scheme", "mirp"});
    REQUIRE(r.code == cli::kOk);
    CHECK(std::stod(cells(lines(r.out)[1])[0]) == doctest::Approx(0.6366197724).epsilon(1e-8));

    const Run two = run({"coverage", "--preset", "paper-2tier", "--los", "exponential:0.002", "--tier2.density", "0"});
    NetworkConfig solo = paper_two_tier(los::Exponential{0.002}, 1.0, 0.0);
    solo.tiers.pop_back();
    CHECK(std::stod(cells(lines(two.out)[1])[0]) == doctest::Approx(coverage_marp(solo).total).epsilon(1e-9));
  }

  TEST_CASE("a one-point sweep reproduces the coverage row") {
    const std::vector<std::string> common = {"--preset", "paper-2tier", "--los", "3gpp-two-piece:156:30"};
    std::vector<std::string> a = {"coverage"}, b = {"sweep", "--lambda1", "3:3:1", "--lambda2", "20:20:1"};
    a.insert(a.end(), common.begin(), common.end());
    a.insert(a.end(), {"--tier1.density", "3", "--tier2.density", "20"});
    b.insert(b.end(), common.begin(), common.end());
    const Run ra = run(a), rb = run(b);
    REQUIRE(ra.code == 0);
    REQUIRE(rb.code == 0);
    CHECK(lines(rb.out)[0] == "lambda1_per_km2,lambda2_per_km2," + lines(ra.out)[0]);
    CHECK(lines(rb.out)[1] == "3,20," + lines(ra.out)[1]);
  }

  TEST_CASE("a density flag moves every sweep row") {
    const std::vector<std::string> base = {"sweep", "--preset", "paper-2tier", "--los", "exponential:0.002",
                                           "--lambda1", "1:100:3"};
    std::vector<std::string> moved = base;
    moved.insert(moved.end(), {"--tier2.density", "300"});
    const auto a = lines(run(base).out), b = lines(run(moved).out);
    REQUIRE(a.size() == 4);
    REQUIRE(b.size() == 4);
    for (std::size_t i = 1; i < 4; ++i) {
      CHECK(cells(a[i])[1] == "10");
      CHECK(cells(b[i])[1] == "300");
      CHECK(cells(a[i])[2] != cells(b[i])[2]);
    }
  }

  TEST_CASE("simulate is reproducible and flags agreement") {
    const std::vector<std::string> args = {"simulate", "--config", kSingle, "--scheme", "marp",
                                           "--trials", "4000", "--seed", "9"};
    const Run a = run(args), b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const auto ls = lines(a.out);
    CHECK(ls[0] == "lambda1_per_km2,mc_mean,mc_se,ci_low,ci_high,analytic,agree");
    CHECK(cells(ls[1]).back() == "true");

    const Run once = run({"simulate", "--config", kSingle, "--trials", "1"});
    CHECK(cells(lines(once.out)[1]).back() == "na");
  }

  TEST_CASE("output file, manifest and trial dump") {
    const auto csv = scratch("cov.csv"), dump = scratch("trials.csv");
    const Run r = run({"simulate", "--config", kSingle, "--trials", "50", "--out", csv.string(), "--dump",
                       dump.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream data(csv);
    const std::string body((std::istreambuf_iterator<char>(data)), std::istreambuf_iterator<char>());
    std::ifstream mf(csv.string() + ".manifest.json");
    const nlohmann::json m = nlohmann::json::parse(mf);
    CHECK(m["tool"] == "hetnet");
    CHECK(m["command"] == "simulate");
    CHECK(m["output"]["bytes"] == body.size());
    char digest[20];
    std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(cli::fnv1a64(body)));
    CHECK(m["output"]["fnv1a64"] == digest);
    CHECK(m["simulation"]["trials"] == 50);
    std::ifstream tf(dump);
    std::string header;
    std::getline(tf, header);
    CHECK(header == "trial,tier,link,sinr_db,success");
    std::size_t rows = 0;
    for (std::string l; std::getline(tf, l);) ++rows;
    CHECK(rows == 50);
  }

  TEST_CASE("hash of known strings") {
    CHECK(cli::fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(cli::fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  }
}
