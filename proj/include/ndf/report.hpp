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

// JSON and plain-table renderings of the result types. Key order is sorted
// and numbers round-trip, so equal inputs give byte-identical reports.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ndf/bounds.hpp"
#include "ndf/flow.hpp"
#include "ndf/mz.hpp"
#include "ndf/optimizer.hpp"
#include "ndf/partition.hpp"
#include "ndf/residual.hpp"

namespace ndf {

using Json = nlohmann::json;

namespace detail {
template <typename T>
Json opt_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json();
}
}  // namespace detail

inline Json to_json(const DesignCertificate& c) {
  Json j;
  j["t"] = c.t;
  j["dim"] = c.dim;
  j["point_count"] = c.point_count;
  j["total_residual"] = c.total_residual;
  j["per_degree"] = c.per_degree;
  j["degrees"] = [&] {
    std::vector<int> l(c.per_degree.size());
    for (std::size_t i = 0; i < l.size(); ++i) l[i] = static_cast<int>(i) + 1;
    return l;
  }();
  j["normalized_residual"] = c.normalized_residual;
  j["oracle_max_deviation"] = detail::opt_json(c.oracle_max_deviation);
  j["is_design"] = detail::opt_json(c.is_design);
  j["tolerance"] = detail::opt_json(c.tolerance);
  return j;
}

inline Json to_json(const ExtendResult& r) {
  Json j;
  j["free_count"] = r.free_points.size();
  j["certificate"] = to_json(r.certificate);
  j["iterations_used"] = r.iterations_used;
  j["restarts_used"] = r.restarts_used;
  j["converged"] = r.converged;
  j["warnings"] = r.warnings;
  return j;
}

inline Json to_json(const BoundsReport& b) {
  Json j;
  j["d"] = b.d;
  j["t"] = b.t;
  j["t1"] = b.t1;
  j["M"] = b.m;
  j["dgs_lower"] = b.dgs_lower;
  j["lemma1"] = b.lemmas.norm_bound;
  j["lemma2_general"] = b.lemmas.representer_general;
  j["lemma2_nested"] = b.lemmas.representer_nested;
  j["lemma3_general"] = b.lemmas.pairing_general;
  j["lemma3_nested"] = b.lemmas.pairing_nested;
  j["theorem4_N_general"] = b.points.general;
  j["theorem4_N_nested"] = detail::opt_json(b.points.nested);
  j["corollary3_total_order"] = b.corollary3_total_order;
  j["constants"] = {{"C1_d", b.c1}, {"C2_d", b.c2},       {"C3_d", b.c3},
                    {"C_d", b.c_d},  {"B_d", b.b},          {"r_d", b.r},
                    {"c1_margin", b.c1_margin}};
  return j;
}

inline Json to_json(const MZReport& r) {
  Json j;
  j["m"] = r.m;
  j["partition_norm"] = r.partition_norm;
  j["cells"] = r.cells;
  j["lower_ratio"] = detail::opt_json(r.lower_ratio);
  j["upper_ratio"] = detail::opt_json(r.upper_ratio);
  j["gradient_lower_ratio"] = detail::opt_json(r.gradient_lower_ratio);
  j["gradient_upper_ratio"] = detail::opt_json(r.gradient_upper_ratio);
  j["integral"] = detail::opt_json(r.integral);
  j["discrete_mean"] = detail::opt_json(r.discrete_mean);
  j["integral_error"] = detail::opt_json(r.integral_error);
  j["gradient_integral"] = detail::opt_json(r.gradient_integral);
  j["gradient_discrete_mean"] = detail::opt_json(r.gradient_discrete_mean);
  j["gradient_integral_error"] = detail::opt_json(r.gradient_integral_error);
  j["value_hypothesis"] = detail::opt_json(r.value_hypothesis);
  j["gradient_hypothesis"] = detail::opt_json(r.gradient_hypothesis);
  j["pass"] = r.pass;
  return j;
}

inline Json to_json(const Partition& p) {
  double total = 0.0;
  for (const Cell& c : p.cells) total += c.area();
  return Json{{"cells", p.size()}, {"zones", p.zones.size()}, {"norm", p.norm}, {"area_sum", total}};
}

inline void write_partition_csv(std::ostream& os, const Partition& p) {
  os << "index,kind,theta0,theta1,phi0,phi1,area,diameter,center_x,center_y,center_z\n";
  char buf[400];
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Cell& c = p.cells[i];
    const Point ctr = c.center();
    std::snprintf(buf, sizeof buf, "%zu,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", i,
                  to_string(c.kind), c.theta0, c.theta1, c.phi0, c.phi1, c.area(), c.diameter(), ctr[0], ctr[1],
                  ctr[2]);
    os << buf;
  }
}

inline void write_flow_csv(std::ostream& os, const FlowTrace& tr) {
  os << "step,time,mean_value\n";
  char buf[96];
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, tr.times[i], tr.mean_values[i]);
    os << buf;
  }
}

inline void write_mz_csv(std::ostream& os, const std::vector<MZReport>& rows) {
  os << "case,m,cells,partition_norm,value_ratio,gradient_ratio,integral,gradient_integral,value_hypothesis,"
        "gradient_hypothesis,pass\n";
  char buf[320];
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const MZReport& r = rows[i];
    std::snprintf(buf, sizeof buf, "%zu,%d,%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d,%d\n", i, r.m, r.cells,
                  r.partition_norm, r.lower_ratio.value_or(NAN), r.gradient_lower_ratio.value_or(NAN),
                  r.integral.value_or(NAN), r.gradient_integral.value_or(NAN), r.value_hypothesis.value_or(false),
                  r.gradient_hypothesis.value_or(false), r.pass);
    os << buf;
  }
}

namespace detail {

inline void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows) {
  if (!j.is_object()) {
    rows.emplace_back(prefix, j.dump());
    return;
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.value().is_object())
      flatten(it.value(), prefix + it.key() + ".", rows);
    else
      rows.emplace_back(prefix + it.key(), it.value().dump());
  }
}

}  // namespace detail

/// Flattens nested objects to dotted keys, one "key  value" line each.
inline void write_table(std::ostream& os, const Json& j) {
  std::vector<std::pair<std::string, std::string>> rows;
  detail::flatten(j, "", rows);
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.first.size());
  for (const auto& [key, value] : rows) os << key << std::string(width + 2 - key.size(), ' ') << value << '\n';
}

}  // namespace ndf
