// Copyright 2026 The optoforce Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <unistd.h>

#include "fixtures.hpp"
#include "optoforce/constants.hpp"
#include "optoforce_cli/cli.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using optoforce::testing::config_path;
using namespace optoforce::cli;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::vector<double>> parse_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("optoforce_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write_config(const std::string& name, const json& j) const {
    std::ofstream(path(name)) << j.dump(2);
    return path(name);
  }

  json base() const {
    std::ifstream in(config_path("base.json"));
    return json::parse(in);
  }

  std::size_t files_in_dir() const {
    return static_cast<std::size_t>(std::distance(fs::directory_iterator(dir_), {}));
  }

  fs::path dir_;
};

TEST_F(Cli, OptimizeReportsReferenceDevicePower) {
  const auto r = invoke({"optimize", "--config", config_path("paper_example.json")});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j.at("P_opt_W").get<double>(), 8.16e-4, 8.16e-6);
  EXPECT_FALSE(r.err.empty());  // one-line summary goes to stderr when stdout carries data
}

TEST_F(Cli, SpectrumAtThetaOffsetMatchesDcOptimum) {
  const auto r = invoke(
      {"spectrum", "--config", config_path("base.json"), "--theta-offset", "0.01", "--points",
       "4"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0][0], 0.0);
  const auto s = optoforce::testing::base_system();
  // Delta = 2 kappa, so xi = dtheta.
  EXPECT_NEAR(rows[0][1] / (optoforce::testing::sql_dc(s) * 1e-4), 1.0, 0.01);
}

TEST_F(Cli, SetOverridesAParameter) {
  const auto a = invoke({"spectrum", "--config", config_path("base.json"), "--points", "2"});
  const auto b = invoke({"spectrum", "--config", config_path("base.json"), "--points", "2",
                         "--set", "xi=0.02"});
  ASSERT_EQ(a.code, kOk);
  ASSERT_EQ(b.code, kOk);
  // Imprecision-limited DC noise scales as xi^2.
  EXPECT_NEAR(parse_csv(b.out)[0][1] / parse_csv(a.out)[0][1], 4.0, 0.05);
}

TEST_F(Cli, MalformedSetIsAConfigError) {
  const auto r = invoke({"stability", "--config", config_path("base.json"), "--set", "xi"});
  EXPECT_EQ(r.code, kConfigError);
  EXPECT_NE(r.err.find("--set"), std::string::npos);
}

TEST_F(Cli, MissingKeyExitsTwoNamingItAndWritesNothing) {
  auto j = base();
  j.erase("mass_kg");
  const auto cfg = write_config("c.json", j);
  const auto r = invoke({"spectrum", "--config", cfg, "--out", path("s.csv"), "--svg",
                         path("s.svg")});
  EXPECT_EQ(r.code, kConfigError);
  EXPECT_NE(r.err.find("mass_kg"), std::string::npos) << r.err;
  EXPECT_EQ(files_in_dir(), 1u);  // only the config itself
}

TEST_F(Cli, UnknownKeyAndMissingFileAreConfigErrors) {
  auto j = base();
  j["bogus"] = 1.0;
  EXPECT_EQ(invoke({"stability", "--config", write_config("c.json", j)}).code, kConfigError);
  EXPECT_EQ(invoke({"stability", "--config", path("absent.json")}).code, kConfigError);
  EXPECT_EQ(invoke({"stability"}).code, kConfigError);
  EXPECT_EQ(invoke({"frobnicate"}).code, kConfigError);
  EXPECT_EQ(invoke({}).code, kConfigError);
}

TEST_F(Cli, NegativeDetuningExitsThree) {
  const auto r = invoke({"spectrum", "--config", config_path("base.json"), "--set",
                         "Delta_over_kappa=-1", "--out", path("s.csv")});
  EXPECT_EQ(r.code, kPhysicsError);
  EXPECT_EQ(files_in_dir(), 0u);
}

TEST_F(Cli, UnstablePointIsReportedByStabilityAndRejectedElsewhere) {
  auto j = base();
  j.erase("pump");
  j["alpha"] = 2e5;  // far above threshold
  const auto cfg = write_config("c.json", j);

  const auto rep = invoke({"stability", "--config", cfg});
  ASSERT_EQ(rep.code, kOk) << rep.err;
  EXPECT_FALSE(json::parse(rep.out).at("stable").get<bool>());

  for (const char* sub : {"spectrum", "squeezing", "montecarlo"}) {
    const auto r = invoke({sub, "--config", cfg, "--out", path("o.csv")});
    EXPECT_EQ(r.code, kPhysicsError) << sub << ": " << r.err;
  }
  EXPECT_EQ(files_in_dir(), 1u);
}

TEST_F(Cli, TooShortSimulationExitsFourWithoutOutput) {
  const auto r = invoke({"montecarlo", "--config", config_path("base.json"), "--ntraj", "1",
                         "--segment", "1024", "--duration", "1e-4", "--out", path("mc.csv")});
  EXPECT_EQ(r.code, kNumericalError);
  EXPECT_NE(r.err.find("segments"), std::string::npos) << r.err;
  EXPECT_EQ(files_in_dir(), 0u);
}

TEST_F(Cli, ValidateExitCodeFollowsTolerance) {
  const std::vector<std::string> common = {"validate", "--config", config_path("base.json"),
                                           "--ntraj", "2", "--segment", "1024"};
  auto strict = common;
  strict.insert(strict.end(), {"--tolerance", "0.001", "--out", path("v.json"), "--rows",
                               path("rows.csv")});
  const auto fail = invoke(strict);
  EXPECT_EQ(fail.code, kValidationFailed) << fail.err;
  // A failed comparison is still a complete result, so its report is written.
  const auto report = json::parse(slurp(path("v.json")));
  EXPECT_FALSE(report.at("pass").get<bool>());
  EXPECT_TRUE(fs::exists(path("rows.csv")));
  EXPECT_TRUE(fs::exists(path("v.json.manifest.json")));

  auto loose = common;
  loose.insert(loose.end(), {"--tolerance", "10"});
  EXPECT_EQ(invoke(loose).code, kOk);
}

TEST_F(Cli, ManifestRecordsTheRun) {
  const auto r = invoke({"squeezing", "--config", config_path("base.json"), "--points", "7",
                         "--set", "xi=0.02", "--out", path("s.csv"), "--svg", path("s.svg")});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto m = json::parse(slurp(path("s.csv.manifest.json")));
  EXPECT_EQ(m.at("subcommand"), "squeezing");
  EXPECT_EQ(m.at("config").at("xi").get<double>(), 0.02);
  EXPECT_EQ(m.at("options").at("points").get<int>(), 7);
  EXPECT_TRUE(m.contains("version"));
  EXPECT_TRUE(m.contains("timestamp"));
  EXPECT_TRUE(m.at("derived_inputs").contains("alpha0_sq"));
  const auto outputs = m.at("outputs").get<std::vector<std::string>>();
  EXPECT_EQ(outputs.size(), 3u);
  for (const auto& o : outputs) EXPECT_TRUE(fs::exists(o)) << o;
  EXPECT_NE(slurp(path("s.svg")).find("<svg"), std::string::npos);
  // Summary goes to stdout when the data went to a file.
  EXPECT_NE(r.out.find("squeezing"), std::string::npos);
}

TEST_F(Cli, ManifestReplayReproducesSpectrumBitExactly) {
  ASSERT_EQ(invoke({"spectrum", "--config", config_path("base.json"), "--points", "9",
                    "--linear", "--set", "temperature_K=4", "--out", path("a.csv")})
                .code,
            kOk);
  ASSERT_EQ(
      invoke({"spectrum", "--config", path("a.csv.manifest.json"), "--out", path("b.csv")}).code,
      kOk);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  EXPECT_EQ(parse_csv(slurp(path("b.csv"))).size(), 10u);
}

TEST_F(Cli, ManifestReplayReproducesMonteCarloBitExactly) {
  ASSERT_EQ(invoke({"montecarlo", "--config", config_path("base.json"), "--ntraj", "2",
                    "--segment", "512", "--seed", "42", "--out", path("a.csv")})
                .code,
            kOk);
  ASSERT_EQ(
      invoke({"montecarlo", "--config", path("a.csv.manifest.json"), "--out", path("b.csv")})
          .code,
      kOk);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  // A different seed changes the estimate.
  ASSERT_EQ(invoke({"montecarlo", "--config", path("a.csv.manifest.json"), "--seed", "43",
                    "--out", path("c.csv")})
                .code,
            kOk);
  EXPECT_NE(slurp(path("a.csv")), slurp(path("c.csv")));
}

TEST_F(Cli, SweepHasOneRowPerPoint) {
  const auto r = invoke({"sweep", "--config", config_path("base.json"), "--param", "kappa",
                         "--range", "0.05:0.3:6"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 6u);
  const double wm = optoforce::constants::two_pi * 1e6;
  EXPECT_NEAR(rows.front()[1] / wm, 0.05, 1e-12);
  EXPECT_NEAR(rows.back()[1] / wm, 0.3, 1e-12);
  EXPECT_EQ(invoke({"sweep", "--config", config_path("base.json"), "--param", "kappa",
                    "--range", "0.05:0.3"})
                .code,
            kConfigError);
}

TEST_F(Cli, CavitySweepIsSymmetric) {
  const auto r = invoke({"cavity-sweep", "--config", config_path("base.json"), "--points", "5"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_DOUBLE_EQ(rows[0][0], -rows[4][0]);
  EXPECT_NEAR(rows[0][1], rows[4][1], 1e-6 * rows[0][1]);
  EXPECT_LT(rows[2][1], rows[0][1]);
}

TEST_F(Cli, OptimizeCheckRunsGlobalSearch) {
  const auto r = invoke({"optimize", "--config", config_path("base.json"), "--check",
                         "--spectrum-out", path("eta.csv"), "--points", "5", "--out",
                         path("o.json")});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(parse_csv(slurp(path("eta.csv"))).size(), 6u);
  const auto j = json::parse(slurp(path("o.json")));
  EXPECT_FALSE(j.empty());
}

}  // namespace
