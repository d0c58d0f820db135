// Copyright 2026 The ndf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ndf/cli.hpp"

using namespace ndf;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "ndf");
  std::vector<const char*> argv;
  for (const std::string& s : args) argv.push_back(s.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string sample(const std::string& name) { return std::string(NDF_SAMPLES_DIR) + "/" + name; }

std::string scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "ndf_cli_tests";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST(CliVerify, ExitCodes) {
  const CliRun ok = run({"verify", sample("octahedron.txt")});
  EXPECT_EQ(ok.code, kExitOk) << ok.err;
  const Json j = Json::parse(ok.out);
  EXPECT_TRUE(j["certificate"]["is_design"].get<bool>());
  EXPECT_EQ(run({"verify", sample("octahedron.txt"), "--degree", "4"}).code, kExitNegative);
  const CliRun bad = run({"verify", sample("truncated.txt")});
  EXPECT_EQ(bad.code, kExitUsage);
  EXPECT_NE(bad.err.find("truncated.txt"), std::string::npos);
  EXPECT_EQ(run({"verify"}).code, kExitUsage);
  EXPECT_EQ(run({"verify", sample("octahedron.txt"), "--format", "xml"}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
}

TEST(CliVerify, TableIsOneAlignedColumn) {
  const CliRun r = run({"verify", sample("icosahedron.txt"), "--format", "table"});
  ASSERT_EQ(r.code, kExitOk);
  std::istringstream in(r.out);
  std::string line;
  std::size_t column = 0, lines = 0;
  bool saw_flag = false;
  while (std::getline(in, line)) {
    const std::size_t gap = line.find("  ");
    ASSERT_NE(gap, std::string::npos) << line;
    const std::size_t start = line.find_first_not_of(' ', gap);
    if (lines++ == 0) column = start;
    EXPECT_EQ(start, column) << line;
    saw_flag = saw_flag || line.rfind("certificate.is_design ", 0) == 0;
  }
  EXPECT_TRUE(saw_flag);
}

TEST(CliExtend, AutoCountUnionReverifies) {
  const std::string prefix = scratch("auto");
  const CliRun r = run({"extend", sample("tetrahedron.txt"), "--degree", "3", "--auto-n", "--out", prefix});
  ASSERT_EQ(r.code, kExitOk) << r.err << r.out;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["n"].get<std::size_t>(), 64u);
  EXPECT_EQ(j["auto_n"]["t1"].get<int>(), 2);
  EXPECT_EQ(run({"verify", prefix + ".union.txt"}).code, kExitOk);
  EXPECT_EQ(read_point_set_file(prefix + ".union.txt").points.size(), 68u);
  EXPECT_EQ(Json::parse(slurp(prefix + ".json")), j);
}

TEST(CliExtend, SameSeedGivesIdenticalBytes) {
  const std::string a = scratch("seed_a"), b = scratch("seed_b");
  ASSERT_EQ(run({"extend", sample("tetrahedron.txt"), "--degree", "3", "--n", "8", "--seed", "3", "--out", a,
                 "--trace"}).code,
            kExitOk);
  ASSERT_EQ(run({"extend", sample("tetrahedron.txt"), "--degree", "3", "--n", "8", "--seed", "3", "--out", b,
                 "--trace"}).code,
            kExitOk);
  for (const char* ext : {".free.txt", ".union.txt", ".trace.csv"}) {
    EXPECT_FALSE(slurp(a + ext).empty()) << ext;
    EXPECT_EQ(slurp(a + ext), slurp(b + ext)) << ext;
  }
}

TEST(CliExtend, UsageErrors) {
  EXPECT_EQ(run({"extend", "--degree", "3", "--n", "4"}).code, kExitUsage);
  EXPECT_EQ(run({"extend", "--degree", "3", "--out", scratch("x")}).code, kExitUsage);
  EXPECT_EQ(run({"extend", "--degree", "3", "--n", "4", "--auto-n", "--out", scratch("x")}).code, kExitUsage);
  EXPECT_EQ(run({"extend", sample("tetrahedron.txt"), "--dim", "3", "--degree", "3", "--n", "4", "--out",
                 scratch("x")}).code,
            kExitUsage);
}

TEST(CliBounds, JsonReport) {
  const CliRun r = run({"bounds", "--degree", "4", "--t1", "2", "--m", "12", "--config", sample("config.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["dgs_lower"].get<int>(), 9);
  EXPECT_EQ(j["t1"].get<int>(), 2);
  EXPECT_LE(j["theorem4_N_nested"].get<double>(), j["theorem4_N_general"].get<double>());
  EXPECT_EQ(j["config"]["source"].get<std::string>(), sample("config.json"));
  EXPECT_EQ(Json::parse(run({"bounds", "--degree", "4", "--m", "12"}).out)["t1"].get<int>(), 3);
  EXPECT_EQ(run({"bounds", "--degree", "4"}).code, kExitUsage);
}

TEST(CliPartition, CsvRowsSumToUnitArea) {
  const CliRun r = run({"partition", "--n", "100"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 101u);
  ASSERT_EQ(rows[0][6], "area");
  double total = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) total += std::stod(rows[i][6]);
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_EQ(Json::parse(run({"partition", "--n", "10", "--format", "json"}).out)["cells"].get<std::size_t>(), 10u);
  EXPECT_EQ(run({"partition", "--n", "10", "--dim", "3"}).code, kExitUsage);
}

TEST(CliFlowDemo, MeanColumnNonDecreasing) {
  const std::string prefix = scratch("flow.csv");
  const CliRun r = run({"flow-demo", "--degree", "3", "--seed", "42", "--out", prefix});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = csv_rows(slurp(prefix));
  ASSERT_GT(rows.size(), 10u);
  EXPECT_EQ(rows[0][2], "mean_value");
  for (std::size_t i = 2; i < rows.size(); ++i) EXPECT_GE(std::stod(rows[i][2]), std::stod(rows[i - 1][2]) - 1e-9);
  EXPECT_EQ(read_point_set_file(prefix + ".endpoints.txt").points.size(), 32u);
}

TEST(CliMzCheck, SingleAndCsvSweep) {
  const CliRun one = run({"mz-check", "--degree", "3", "--n", "4000"});
  ASSERT_EQ(one.code, kExitOk) << one.err;
  EXPECT_TRUE(Json::parse(one.out)["pass"].get<bool>());
  const CliRun sweep = run({"mz-check", "--degree", "2", "--n", "1000", "--cases", "3", "--format", "csv"});
  EXPECT_EQ(sweep.code, kExitOk);
  EXPECT_EQ(csv_rows(sweep.out).size(), 4u);
  EXPECT_EQ(run({"mz-check", "--dim", "3"}).code, kExitUsage);
}

TEST(CliConfig, BadConfigIsUsageError) {
  const std::string path = scratch("bad.json");
  std::ofstream(path) << R"({"b_d": 7, "typo": 1})";
  const CliRun r = run({"bounds", "--degree", "4", "--m", "3", "--config", path});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("typo"), std::string::npos);
  EXPECT_EQ(run({"bounds", "--degree", "4", "--m", "3", "--config", scratch("absent.json")}).code, kExitUsage);
}

TEST(CliConfig, OverrideBelowFloorIsUsageError) {
  const std::string path = scratch("low_c1.json");
  std::ofstream(path) << R"({"c1_override": 10})";
  const CliRun r = run({"bounds", "--degree", "4", "--m", "3", "--config", path});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("C1 override"), std::string::npos) << r.err;
}
