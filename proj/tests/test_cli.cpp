// Copyright 2026 The spinorcqed Authors
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


#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "spinor/tools/commands.hpp"
#include "spinor/tools/config.hpp"

using namespace spinor::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

json spin_mixing_doc() {
  return json::parse(R"({
    "model": "spin_mixing",
    "atoms": 20,
    "effective": {"Lambda": {"value": 10, "unit": "kHz/2π"}, "Gamma": {"value": 0, "unit": "kHz/2π"}},
    "time": {"unit": "1/|Lambda|", "start": 0, "stop": 2, "step": 0.25}
  })");
}

json microscopic_doc() {
  return json::parse(R"({
    "model": "dispersive",
    "atoms": 10000,
    "microscopic": {
      "g": {"value": 10, "unit": "MHz/2pi"},
      "kappa": {"value": 0.2, "unit": "MHz/2pi"},
      "gamma": {"value": 6, "unit": "MHz/2pi"},
      "detuning": {"value": 100, "unit": "GHz/2pi"},
      "rabi_minus": {"value": 240, "unit": "MHz/2pi"},
      "cavity_frequency": {"value": 0.6666666667, "unit": "MHz/2pi"}
    }
  })");
}

std::vector<Diagnostic> diagnostics_of(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.diagnostics();
  }
  return {};
}

bool mentions(const std::vector<Diagnostic>& d, const std::string& path) {
  for (const auto& x : d)
    if (x.path == path) return true;
  return false;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("spinorsim_test_" + name);
  fs::remove_all(p);
  return p;
}

std::size_t data_rows(const std::string& tsv) {
  std::istringstream in(tsv);
  std::size_t n = 0;
  bool header = false;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    ++n;
  }
  return n;
}

}  // namespace

TEST(ConfigSchema, AcceptsUnitsAndConverts) {
  const auto cfg = parse_config(spin_mixing_doc());
  ASSERT_TRUE(cfg.effective);
  EXPECT_NEAR(cfg.effective->Lambda, kTwoPi * 1e4, 1e-9);
  EXPECT_EQ(cfg.time.values.size(), 9u);
  EXPECT_TRUE(cfg.time.lambda_units);
  EXPECT_NEAR(*frequency_unit("MHz/2π"), kTwoPi * 1e6, 1e-6);
  EXPECT_NEAR(*frequency_unit("Hz/2pi"), kTwoPi, 1e-12);
  EXPECT_DOUBLE_EQ(*frequency_unit("rad/s"), 1.0);
  EXPECT_FALSE(frequency_unit("furlongs"));
}

TEST(ConfigSchema, MissingRabiMinusNamesTheField) {
  auto doc = microscopic_doc();
  doc["microscopic"].erase("rabi_minus");
  EXPECT_TRUE(mentions(diagnostics_of(doc), "/microscopic/rabi_minus"));
}

TEST(ConfigSchema, BareNumberRejected) {
  auto doc = spin_mixing_doc();
  doc["effective"]["Lambda"] = 10;
  const auto d = diagnostics_of(doc);
  ASSERT_TRUE(mentions(d, "/effective/Lambda"));
  EXPECT_NE(d.front().message.find("bare number"), std::string::npos);
}

TEST(ConfigSchema, StructuralErrors) {
  auto doc = spin_mixing_doc();
  doc["colour"] = "blue";
  EXPECT_TRUE(mentions(diagnostics_of(doc), "/colour"));

  doc = spin_mixing_doc();
  doc["microscopic"] = microscopic_doc()["microscopic"];
  EXPECT_FALSE(diagnostics_of(doc).empty());

  doc = spin_mixing_doc();
  doc["effective"]["Gamma_over_Lambda"] = {{"value", 0.05}, {"unit", "dimensionless"}};
  EXPECT_FALSE(diagnostics_of(doc).empty());

  doc = spin_mixing_doc();
  doc["effective"]["Lambda"]["unit"] = "MHz";
  EXPECT_TRUE(mentions(diagnostics_of(doc), "/effective/Lambda/unit"));

  doc = spin_mixing_doc();
  doc["initial_state"] = {{"n_minus", 1}, {"n_zero", 10}, {"n_plus", 1}};
  EXPECT_FALSE(diagnostics_of(doc).empty());

  doc = spin_mixing_doc();
  doc["time"] = {{"unit", "ms"}, {"values", {0.0, 0.5}}};
  const auto cfg = parse_config(doc);
  EXPECT_FALSE(cfg.time.lambda_units);
  EXPECT_DOUBLE_EQ(cfg.time.values[1], 5e-4);
}

TEST(ConfigSchema, AllDiagnosticsReportedTogether) {
  auto doc = microscopic_doc();
  doc["microscopic"].erase("g");
  doc["microscopic"]["kappa"] = 0.2;
  doc["atoms"] = 0;
  const auto d = diagnostics_of(doc);
  EXPECT_TRUE(mentions(d, "/microscopic/g"));
  EXPECT_TRUE(mentions(d, "/microscopic/kappa"));
  EXPECT_TRUE(mentions(d, "/atoms"));
  const json j = ConfigError(d).to_json();
  EXPECT_EQ(j["error"], "config");
  EXPECT_EQ(j["diagnostics"].size(), d.size());
}

TEST(ConfigSchema, ResolvedConfigRoundTrips) {
  const auto cfg = parse_config(spin_mixing_doc());
  const auto again = parse_config(resolved_json(cfg));
  EXPECT_EQ(resolved_json(again), resolved_json(cfg));
}

TEST(ThreadOverride, FlagThenEnvironment) {
  EXPECT_EQ(resolve_thread_count(3u), 3u);
  ::setenv("SPINOR_THREADS", "2", 1);
  EXPECT_EQ(resolve_thread_count(std::nullopt), 2u);
  ::setenv("SPINOR_THREADS", "two", 1);
  EXPECT_THROW(resolve_thread_count(std::nullopt), ConfigError);
  ::unsetenv("SPINOR_THREADS");
  EXPECT_EQ(resolve_thread_count(std::nullopt), 0u);
}

TEST(CmdParams, RefusesEffectiveOnlyConfig) {
  const auto cfg = parse_config(spin_mixing_doc());
  EXPECT_THROW(cmd_params(cfg, {}), ConfigError);
}

TEST(CmdParams, FeasibleSetRecord) {
  auto cfg = parse_config(microscopic_doc());
  const auto dir = scratch("params");
  cfg.output_dir = dir.string();
  ASSERT_EQ(cmd_params(cfg, {}), kSuccess);
  const json rec = json::parse(slurp(dir / "params.json"));
  const double lam = rec["dispersive_rad_s"]["Lambda"];
  EXPECT_NEAR(std::abs(lam) / (kTwoPi * 1e3), 10.0, 0.1);
  EXPECT_NEAR(rec["dispersive_rad_s"]["gamma_over_lambda"].get<double>(), 0.05, 1e-6);
  EXPECT_NEAR(rec["feasibility"]["gamma_sp_ratio"].get<double>(), 6e-4, 6e-5);
  EXPECT_TRUE(rec["provenance"].contains("config"));
  EXPECT_TRUE(rec["provenance"].contains("version"));
  EXPECT_NE(slurp(dir / "params.tsv").find("# provenance: "), std::string::npos);
}

TEST(CmdSimulate, PairCreationKeepsPopulationsEqual) {
  auto doc = spin_mixing_doc();
  doc["atoms"] = 40;
  auto cfg = parse_config(doc);
  const auto dir = scratch("pairs");
  cfg.output_dir = dir.string();
  cfg.formats = {"record"};
  ASSERT_EQ(cmd_simulate(cfg, {}), kSuccess);
  const json rec = json::parse(slurp(dir / "simulate.json"));
  const auto& s = rec["series"];
  for (std::size_t k = 0; k < s["t"].size(); ++k) {
    const double nm = s["n_minus"][k], np = s["n_plus"][k], n0 = s["n_zero"][k];
    EXPECT_NEAR(nm, np, 1e-9);
    EXPECT_NEAR(nm + np + n0, 40.0, 1e-8);
  }
  EXPECT_EQ(rec["method"], "pure");
}

TEST(CmdSimulate, ByteIdenticalRerun) {
  auto doc = spin_mixing_doc();
  doc["effective"].erase("Gamma");
  doc["effective"]["Gamma_over_Lambda"] = {{"value", 0.05}, {"unit", "dimensionless"}};
  doc["evolution"] = {{"method", "trajectories"}, {"n_traj", 64}};
  doc["seed"] = 99;
  auto cfg = parse_config(doc);
  const auto dir = scratch("rerun");
  cfg.output_dir = dir.string();
  std::string first[2];
  for (int run = 0; run < 2; ++run) {
    ASSERT_EQ(cmd_simulate(cfg, {2u, nullptr}), kSuccess);
    first[run] = slurp(dir / "simulate.tsv") + slurp(dir / "simulate.json");
  }
  EXPECT_FALSE(first[0].empty());
  EXPECT_EQ(first[0], first[1]);
  ASSERT_EQ(cmd_simulate(cfg, {1u, nullptr}), kSuccess);
  EXPECT_EQ(slurp(dir / "simulate.tsv") + slurp(dir / "simulate.json"), first[0]);
}

TEST(CmdSimulate, PureOnDissipativeModelIsConfigError) {
  auto doc = spin_mixing_doc();
  doc["effective"]["Gamma"]["value"] = 1;
  doc["evolution"] = {{"method", "pure"}};
  const auto cfg = parse_config(doc);
  EXPECT_THROW(cmd_simulate(cfg, {}), ConfigError);
}

TEST(CmdSweep, AggregationIndependentOfScheduling) {
  auto doc = spin_mixing_doc();
  doc["sweep"] = {{"axis", "atoms"}, {"values", {6, 10, 14}}};
  auto cfg = parse_config(doc);
  const auto dir = scratch("sweep");
  cfg.output_dir = dir.string();
  std::string out[2];
  for (int i = 0; i < 2; ++i) {
    ASSERT_EQ(cmd_sweep(cfg, {i == 0 ? 1u : 3u, nullptr}), kSuccess);
    out[i] = slurp(dir / "sweep.tsv") + slurp(dir / "sweep.json");
  }
  EXPECT_EQ(out[0], out[1]);
  EXPECT_EQ(data_rows(slurp(dir / "sweep.tsv")), 3u);
}

TEST(CmdQfunction, GridLayoutAndPoleSymmetry) {
  auto doc = spin_mixing_doc();
  doc["qfunction"] = {{"times", {{"unit", "1/|Lambda|"}, {"values", {0.0, 1.0}}}}, {"n_theta", 9}, {"n_phi", 12}};
  auto cfg = parse_config(doc);
  const auto dir = scratch("qfun");
  cfg.output_dir = dir.string();
  cfg.formats = {"table", "record", "image"};
  ASSERT_EQ(cmd_qfunction(cfg, {}), kSuccess);
  EXPECT_EQ(data_rows(slurp(dir / "qfunction_00.tsv")), 9u * 12u);
  EXPECT_TRUE(fs::exists(dir / "qfunction_01.svg"));
  const json rec = json::parse(slurp(dir / "qfunction.json"));
  const auto& q = rec["snapshots"][0]["q"];
  for (std::size_t i = 0; i < 9; ++i)
    for (std::size_t j = 1; j < 12; ++j) EXPECT_NEAR(q[i * 12 + j].get<double>(), q[i * 12].get<double>(), 1e-12);
}
