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

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "ndf/config.hpp"
#include "ndf/report.hpp"

using namespace ndf;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("ndf_cfg_" + name + ".json");
  std::ofstream(path) << text;
  return path.string();
}

// Restores NDF_CONFIG on scope exit.
class EnvGuard {
 public:
  EnvGuard() {
    if (const char* v = std::getenv("NDF_CONFIG")) saved_ = v;
  }
  ~EnvGuard() {
    if (saved_)
      setenv("NDF_CONFIG", saved_->c_str(), 1);
    else
      unsetenv("NDF_CONFIG");
  }

 private:
  std::optional<std::string> saved_;
};

}  // namespace

TEST(RunConfig, Defaults) {
  const RunConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.constants.b, 7.0);
  EXPECT_EQ(c.constants.r, 1.0);
  EXPECT_EQ(c.tol, 1e-10);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.auto_n_cap, 64u);
  EXPECT_FALSE(c.init.has_value());
  EXPECT_EQ(c.source, "defaults");
  const ExtendOptions o = c.extend_options();
  EXPECT_EQ(o.residual_tol, c.tol);
  EXPECT_EQ(o.restarts, c.restarts);
}

TEST(RunConfig, OverlayKeepsUnspecifiedDefaults) {
  RunConfig c;
  apply_config_json(c, Json::parse(R"({"b_d": 3.5, "seed": 9, "init": "spiral", "line_search": "fixed",
                                      "quad_order": 12, "c_d": 5.0})"));
  EXPECT_EQ(c.constants.b, 3.5);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.init, std::optional<InitStrategy>(InitStrategy::spiral));
  EXPECT_EQ(c.line_search, LineSearch::fixed);
  EXPECT_EQ(c.quadrature.order, 12);
  EXPECT_EQ(c.constants.design_constant(SphereDim(2)), 5.0);
  EXPECT_EQ(c.tol, 1e-10);
  EXPECT_EQ(c.restarts, 8);
}

TEST(RunConfig, UnknownKeysAndWrongTypesAreErrors) {
  RunConfig c;
  EXPECT_THROW(apply_config_json(c, Json::parse(R"({"bd": 3})")), std::invalid_argument);
  EXPECT_THROW(apply_config_json(c, Json::parse(R"({"seed": "nine"})")), std::invalid_argument);
  EXPECT_THROW(apply_config_json(c, Json::parse(R"({"init": "grid"})")), std::invalid_argument);
  EXPECT_THROW(apply_config_json(c, Json::parse(R"([1, 2])")), std::invalid_argument);
  const std::string broken = write_temp("broken", "{ \"tol\": ");
  EXPECT_THROW(load_config_file(broken), FormatError);
  EXPECT_THROW(load_config_file(write_temp("neg", R"({"tol": -1})")), std::invalid_argument);
  // The C1 floor depends on the dimension, so a too-small override only fails once a bound is asked for.
  const RunConfig low = load_config_file(write_temp("c1", R"({"c1_override": 10})"));
  EXPECT_THROW(low.constants.c1(SphereDim(2)), std::invalid_argument);
}

TEST(RunConfig, ValidateRejectsOutOfRange) {
  RunConfig c;
  c.max_iters = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.flow_steps = 5;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.constants.b = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.quadrature.rel_tol = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(RunConfig, ExplicitPathBeatsEnvironment) {
  EnvGuard guard;
  const std::string env_file = write_temp("env", R"({"seed": 5})");
  const std::string flag_file = write_temp("flag", R"({"seed": 6})");
  unsetenv("NDF_CONFIG");
  EXPECT_EQ(resolve_config(std::nullopt).seed, 42u);
  setenv("NDF_CONFIG", env_file.c_str(), 1);
  EXPECT_EQ(resolve_config(std::nullopt).seed, 5u);
  EXPECT_EQ(resolve_config(std::nullopt).source, env_file);
  EXPECT_EQ(resolve_config(flag_file).seed, 6u);
  setenv("NDF_CONFIG", "", 1);
  EXPECT_EQ(resolve_config(std::nullopt).source, "defaults");
}

TEST(RunConfig, JsonRoundTripThroughFile) {
  RunConfig c;
  c.constants.c1_override = 1e6;
  c.restarts = 3;
  Json j = to_json(c);
  j.erase("source");
  j.erase("c_d");
  j.erase("init");
  const RunConfig back = load_config_file(write_temp("round", j.dump()));
  EXPECT_EQ(to_json(back).dump(), [&] {
    Json k = to_json(c);
    k["source"] = back.source;
    return k.dump();
  }());
}

TEST(RunConfig, ShippedSampleLoads) {
  const RunConfig c = load_config_file(std::string(NDF_SAMPLES_DIR) + "/config.json");
  EXPECT_EQ(c.constants.b, 7.0);
  EXPECT_EQ(c.restarts, 8);
}
