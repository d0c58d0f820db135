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

#pragma once

// Run configuration: every constant and tolerance the tool needs, loaded from
// a JSON file (--config, else $NDF_CONFIG) over built-in defaults.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "ndf/bounds.hpp"
#include "ndf/io.hpp"
#include "ndf/optimizer.hpp"
#include "ndf/polynomial.hpp"

namespace ndf {

struct RunConfig {
  BoundConstants constants{};
  /// Design tolerance on the normalized residual and the moment deviations.
  double tol = 1e-10;
  /// Gradient-norm stopping threshold of the optimizer.
  double step_tol = 1e-14;
  int max_iters = 20000;
  int restarts = 8;
  std::optional<InitStrategy> init;
  LineSearch line_search = LineSearch::backtracking;
  PolyQuadrature quadrature{};
  std::uint64_t seed = 42;
  std::size_t auto_n_cap = 64;
  int flow_steps = 200;
  /// Where the non-default values came from.
  std::string source = "defaults";

  void validate() const {
    constants.validate();
    if (!(tol > 0.0) || !(step_tol > 0.0)) throw std::invalid_argument("tolerances must be positive");
    if (max_iters < 1 || restarts < 1) throw std::invalid_argument("max_iters and restarts must be >= 1");
    if (quadrature.order < 0 || !(quadrature.rel_tol > 0.0))
      throw std::invalid_argument("quadrature order must be >= 0 and rel_tol positive");
    if (auto_n_cap < 1) throw std::invalid_argument("auto_n_cap must be >= 1");
    if (flow_steps < 10) throw std::invalid_argument("flow_steps must be >= 10");
  }

  ExtendOptions extend_options() const {
    ExtendOptions o;
    o.init_strategy = init;
    o.seed = seed;
    o.max_iters = max_iters;
    o.step_tol = step_tol;
    o.residual_tol = tol;
    o.restarts = restarts;
    o.line_search = line_search;
    return o;
  }
};

inline InitStrategy parse_init_strategy(const std::string& s) {
  if (s == "equal_area_centers") return InitStrategy::equal_area_centers;
  if (s == "spiral") return InitStrategy::spiral;
  if (s == "random") return InitStrategy::random;
  throw std::invalid_argument("unknown init strategy '" + s + "'");
}

/// Overlays the keys of `j` onto `cfg`. Unknown keys are errors, so typos do
/// not silently fall back to defaults.
inline void apply_config_json(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const nlohmann::json& v = it.value();
    try {
      if (k == "b_d") cfg.constants.b = v.get<double>();
      else if (k == "r_d") cfg.constants.r = v.get<double>();
      else if (k == "c1_margin") cfg.constants.c1_margin = v.get<double>();
      else if (k == "c1_override") cfg.constants.c1_override = v.get<double>();
      else if (k == "c_d") cfg.constants.c_d = v.get<double>();
      else if (k == "tol") cfg.tol = v.get<double>();
      else if (k == "step_tol") cfg.step_tol = v.get<double>();
      else if (k == "max_iters") cfg.max_iters = v.get<int>();
      else if (k == "restarts") cfg.restarts = v.get<int>();
      else if (k == "init") cfg.init = parse_init_strategy(v.get<std::string>());
      else if (k == "line_search") {
        const std::string s = v.get<std::string>();
        if (s == "backtracking") cfg.line_search = LineSearch::backtracking;
        else if (s == "fixed") cfg.line_search = LineSearch::fixed;
        else throw std::invalid_argument("unknown line search '" + s + "'");
      }
      else if (k == "quad_order") cfg.quadrature.order = v.get<int>();
      else if (k == "quad_rel_tol") cfg.quadrature.rel_tol = v.get<double>();
      else if (k == "seed") cfg.seed = v.get<std::uint64_t>();
      else if (k == "auto_n_cap") cfg.auto_n_cap = v.get<std::size_t>();
      else if (k == "flow_steps") cfg.flow_steps = v.get<int>();
      else throw std::invalid_argument("unknown config key '" + k + "'");
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("config key '" + k + "' has the wrong type");
    }
  }
}

inline RunConfig load_config_file(const std::string& path, RunConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw FormatError(path, 0, "cannot open config file");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path, 0, std::string("invalid JSON: ") + e.what());
  }
  apply_config_json(base, j);
  base.source = path;
  base.validate();
  return base;
}

/// Defaults overlaid by the explicit path, else by $NDF_CONFIG when set.
inline RunConfig resolve_config(const std::optional<std::string>& path) {
  if (path) return load_config_file(*path);
  if (const char* env = std::getenv("NDF_CONFIG"); env && *env) return load_config_file(env);
  return RunConfig{};
}

inline nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["b_d"] = c.constants.b;
  j["r_d"] = c.constants.r;
  j["c1_margin"] = c.constants.c1_margin;
  j["c1_override"] = c.constants.c1_override ? nlohmann::json(*c.constants.c1_override) : nlohmann::json();
  j["c_d"] = c.constants.c_d ? nlohmann::json(*c.constants.c_d) : nlohmann::json();
  j["tol"] = c.tol;
  j["step_tol"] = c.step_tol;
  j["max_iters"] = c.max_iters;
  j["restarts"] = c.restarts;
  j["init"] = c.init ? nlohmann::json(to_string(*c.init)) : nlohmann::json("default");
  j["line_search"] = c.line_search == LineSearch::backtracking ? "backtracking" : "fixed";
  j["quad_order"] = c.quadrature.order;
  j["quad_rel_tol"] = c.quadrature.rel_tol;
  j["seed"] = c.seed;
  j["auto_n_cap"] = c.auto_n_cap;
  j["flow_steps"] = c.flow_steps;
  j["source"] = c.source;
  return j;
}

}  // namespace ndf
