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

// The ndf command line. Exit codes:
//   0  success
//   1  negative result (not a design, no convergence, failed check)
//   2  usage or input error

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ndf/bounds.hpp"
#include "ndf/config.hpp"
#include "ndf/flow.hpp"
#include "ndf/io.hpp"
#include "ndf/mz.hpp"
#include "ndf/optimizer.hpp"
#include "ndf/partition.hpp"
#include "ndf/report.hpp"
#include "ndf/residual.hpp"

namespace ndf {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitUsage = 2;

/// Thrown for bad flag combinations detected after parsing.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

struct CliArgs {
  int dim = 2;
  int degree = 0;
  int t1 = 0;
  std::size_t n = 0;
  bool auto_n = false;
  std::uint64_t m = 0;
  double tol = 0.0;
  std::uint64_t seed = 0;
  std::string config;
  std::string out;
  std::string format;
  std::string file;
  std::size_t cases = 1;
  bool trace = false;

  CLI::Option* dim_opt = nullptr;
  CLI::Option* degree_opt = nullptr;
  CLI::Option* t1_opt = nullptr;
  CLI::Option* n_opt = nullptr;
  CLI::Option* m_opt = nullptr;
  CLI::Option* tol_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* config_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* format_opt = nullptr;

  static bool given(const CLI::Option* o) { return o != nullptr && o->count() > 0; }

  /// Config file (or $NDF_CONFIG) under the explicit flags.
  RunConfig config_with_flags() const {
    RunConfig c = resolve_config(given(config_opt) ? std::optional<std::string>(config) : std::nullopt);
    if (given(tol_opt)) c.tol = tol;
    if (given(seed_opt)) c.seed = seed;
    c.validate();
    return c;
  }

  std::string format_or(const std::string& fallback) const { return given(format_opt) ? format : fallback; }
};

/// Prints to --out (atomically) when given, else to stdout.
inline void emit(const CliArgs& a, std::ostream& out, const std::string& text) {
  if (CliArgs::given(a.out_opt))
    write_file_atomic(a.out, text);
  else
    out << text;
}

inline std::string render(const Json& j, const std::string& format) {
  std::ostringstream os;
  if (format == "table")
    write_table(os, j);
  else if (format == "json")
    os << j.dump(2) << '\n';
  else
    throw UsageError("format '" + format + "' is not available for this command");
  return os.str();
}

inline int cmd_verify(const CliArgs& a, std::ostream& out) {
  const RunConfig cfg = a.config_with_flags();
  const PointSetFile f = read_point_set_file(a.file);
  if (f.points.empty()) throw FormatError(a.file, 0, "point set is empty");
  int t = 0;
  if (CliArgs::given(a.degree_opt))
    t = a.degree;
  else if (f.degree)
    t = *f.degree;
  else
    throw UsageError("verify needs --degree (the file header has none)");
  const DesignCertificate cert = certify_design(t, Configuration{SphereDim(f.dim), {}, f.points}, cfg.tol);
  Json j;
  j["command"] = "verify";
  j["file"] = a.file;
  j["max_row_correction"] = f.max_correction;
  j["certificate"] = to_json(cert);
  j["config"] = to_json(cfg);
  emit(a, out, render(j, a.format_or("json")));
  return *cert.is_design ? kExitOk : kExitNegative;
}

inline int cmd_extend(const CliArgs& a, std::ostream& out) {
  const RunConfig cfg = a.config_with_flags();
  if (!CliArgs::given(a.degree_opt)) throw UsageError("extend needs --degree");
  if (CliArgs::given(a.n_opt) == a.auto_n) throw UsageError("extend needs exactly one of --n and --auto-n");
  if (!CliArgs::given(a.out_opt)) throw UsageError("extend needs --out <prefix> for its point files");
  const int t = a.degree;

  PointSetFile fixed;
  fixed.dim = a.dim;
  if (!a.file.empty()) {
    fixed = read_point_set_file(a.file);
    if (CliArgs::given(a.dim_opt) && fixed.dim != a.dim)
      throw UsageError("--dim " + std::to_string(a.dim) + " disagrees with the fixed file (dim " +
                       std::to_string(fixed.dim) + ")");
  }
  const SphereDim d(fixed.dim);

  std::optional<int> t1;
  if (CliArgs::given(a.t1_opt))
    t1 = a.t1;
  else if (fixed.degree && *fixed.degree < t && !fixed.points.empty())
    t1 = *fixed.degree;

  std::vector<std::string> notes;
  std::size_t n = a.n;
  Json auto_json;
  if (a.auto_n) {
    const AutoCount ac = auto_free_count(t, t1, fixed.points.size(), d, cfg.constants, cfg.auto_n_cap);
    n = ac.n;
    auto_json = {{"bound", ac.bound}, {"cap", cfg.auto_n_cap}, {"t1", t1 ? Json(*t1) : Json()}};
    if (ac.warning) notes.push_back(*ac.warning);
  }
  if (n < 1) throw UsageError("--n must be >= 1");

  ExtendOptions opt = cfg.extend_options();
  opt.record_trace = a.trace;
  ExtendResult r = extend_design(t, fixed.points, n, d, opt);
  notes.insert(notes.end(), r.warnings.begin(), r.warnings.end());
  r.warnings = notes;

  std::vector<Point> all = fixed.points;
  all.insert(all.end(), r.free_points.begin(), r.free_points.end());
  const std::string free_path = a.out + ".free.txt";
  const std::string union_path = a.out + ".union.txt";
  write_point_set_file(free_path, d.value(), r.free_points);
  write_point_set_file(union_path, d.value(), all, r.converged ? std::optional<int>(t) : std::nullopt);
  Json files = {{"free", free_path}, {"union", union_path}, {"report", a.out + ".json"}};
  if (a.trace) {
    std::ostringstream os;
    write_trace_csv(os, r.trace);
    write_file_atomic(a.out + ".trace.csv", os.str());
    files["trace"] = a.out + ".trace.csv";
  }

  Json j;
  j["command"] = "extend";
  j["t"] = t;
  j["dim"] = d.value();
  j["fixed_count"] = fixed.points.size();
  j["n"] = n;
  j["auto_n"] = a.auto_n ? auto_json : Json();
  j["result"] = to_json(r);
  j["files"] = files;
  j["config"] = to_json(cfg);
  write_file_atomic(a.out + ".json", j.dump(2) + "\n");
  out << render(j, a.format_or("json"));
  return r.converged ? kExitOk : kExitNegative;
}

inline int cmd_bounds(const CliArgs& a, std::ostream& out) {
  const RunConfig cfg = a.config_with_flags();
  if (!CliArgs::given(a.degree_opt) || !CliArgs::given(a.m_opt)) throw UsageError("bounds needs --degree and --m");
  const int t1 = CliArgs::given(a.t1_opt) ? a.t1 : a.degree - 1;
  const BoundsReport rep = bounds_report(a.degree, t1, a.m, SphereDim(a.dim), cfg.constants);
  Json j = to_json(rep);
  j["config"] = to_json(cfg);
  emit(a, out, render(j, a.format_or("json")));
  return kExitOk;
}

inline int cmd_partition(const CliArgs& a, std::ostream& out) {
  if (!CliArgs::given(a.n_opt)) throw UsageError("partition needs --n");
  const Partition p = equal_area_partition(a.n, SphereDim(a.dim));
  const std::string fmt = a.format_or("csv");
  if (fmt == "csv") {
    std::ostringstream os;
    write_partition_csv(os, p);
    emit(a, out, os.str());
  } else {
    emit(a, out, render(to_json(p), fmt));
  }
  return kExitOk;
}

inline int cmd_flow_demo(const CliArgs& a, std::ostream& out) {
  const RunConfig cfg = a.config_with_flags();
  const int t = CliArgs::given(a.degree_opt) ? a.degree : 3;
  const std::size_t starts_count = CliArgs::given(a.n_opt) ? a.n : 32;
  const SphereDim d(a.dim);
  Rng rng(cfg.seed);
  const PolynomialHandle p = random_boundary_polynomial(t, d, rng, cfg.quadrature);
  std::vector<Point> starts;
  if (d.value() == 2) {
    for (const Cell& c : equal_area_partition(starts_count).cells) starts.push_back(c.sample(rng));
  } else {
    for (std::size_t i = 0; i < starts_count; ++i) starts.push_back(rng.point_on_sphere(d));
  }
  const FlowTrace tr = integrate_flow(p, starts, cfg.constants.r, cfg.flow_steps);
  bool monotone = true;
  for (std::size_t i = 1; i < tr.mean_values.size(); ++i)
    monotone = monotone && tr.mean_values[i] >= tr.mean_values[i - 1] - 1e-9;
  const bool bounded = flow_displacement_bound_check(tr, starts);

  if (CliArgs::given(a.out_opt)) write_point_set_file(a.out + ".endpoints.txt", d.value(), tr.endpoints);
  const std::string fmt = a.format_or("csv");
  if (fmt == "csv") {
    std::ostringstream os;
    write_flow_csv(os, tr);
    emit(a, out, os.str());
  } else {
    Json j;
    j["command"] = "flow-demo";
    j["t"] = t;
    j["dim"] = d.value();
    j["starts"] = starts.size();
    j["epsilon"] = tr.epsilon;
    j["terminal_time"] = tr.terminal_time;
    j["initial_mean"] = tr.mean_values.front();
    j["final_mean"] = tr.mean_values.back();
    j["mean_non_decreasing"] = monotone;
    j["displacement_within_time"] = bounded;
    j["normalization_error"] = p.normalization_error;
    j["config"] = to_json(cfg);
    emit(a, out, render(j, fmt));
  }
  return monotone && bounded ? kExitOk : kExitNegative;
}

inline int cmd_mz_check(const CliArgs& a, std::ostream& out) {
  const RunConfig cfg = a.config_with_flags();
  if (a.dim != 2) throw UsageError("mz-check works on S^2 only (--dim 2)");
  const int m = CliArgs::given(a.degree_opt) ? a.degree : 3;
  const std::size_t cells = CliArgs::given(a.n_opt) ? a.n : 4000;
  if (m < 1 || a.cases < 1 || cells < 1) throw UsageError("mz-check needs --degree, --n and --cases >= 1");
  MZOptions opt;
  opt.r = cfg.constants.r;
  opt.quadrature = cfg.quadrature;
  Json j;
  bool pass = true;
  std::vector<MZReport> rows;
  if (a.cases == 1) {
    Rng rng(cfg.seed);
    const auto count = static_cast<std::size_t>(dim_space(m, SphereDim(2)));
    std::vector<double> coeffs(count);
    for (double& c : coeffs) c = rng.normal();
    const PolynomialHandle p(KernelSpec(m, SphereDim(2)), spiral_points(count), std::move(coeffs));
    const Partition r = equal_area_partition(cells);
    std::vector<Point> pts;
    for (const Cell& c : r.cells) pts.push_back(c.sample(rng));
    const MZReport rep = mz_check(p, r, pts, opt);
    j = to_json(rep);
    pass = rep.pass;
    rows.push_back(rep);
  } else {
    const MZSweep sw = mz_sweep(a.cases, m, cells, cfg.seed, opt);
    j = to_json(sw.summary);
    j["cases"] = a.cases;
    j["unexplained_failures"] = sw.unexplained_failures;
    pass = sw.summary.pass;
    rows = sw.cases;
  }
  if (a.format_or("json") == "csv") {
    std::ostringstream os;
    write_mz_csv(os, rows);
    emit(a, out, os.str());
    return pass ? kExitOk : kExitNegative;
  }
  j["command"] = "mz-check";
  j["bounds"] = {{"value", {kValueLower, kValueUpper}},
                 {"gradient", {gradient_lower_bound(SphereDim(2)), gradient_upper_bound(SphereDim(2))}}};
  j["config"] = to_json(cfg);
  emit(a, out, render(j, a.format_or("json")));
  return pass ? kExitOk : kExitNegative;
}

}  // namespace detail

/// Parses and runs one command; never throws.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Nested spherical designs: construct, extend and certify point sets on S^d", "ndf"};
  app.require_subcommand(1);
  detail::CliArgs a;

  const std::vector<std::string> formats = {"json", "table", "csv"};
  auto common = [&](CLI::App* sub) {
    a.dim_opt = sub->add_option("--dim", a.dim, "sphere dimension d of S^d")->check(CLI::PositiveNumber);
    a.degree_opt = sub->add_option("--degree,-t", a.degree, "degree t")->check(CLI::PositiveNumber);
    a.t1_opt = sub->add_option("--t1", a.t1, "degree of the fixed design")->check(CLI::PositiveNumber);
    a.n_opt = sub->add_option("--n", a.n, "number of points, cells or start points");
    a.m_opt = sub->add_option("--m", a.m, "number of fixed points M");
    a.tol_opt = sub->add_option("--tol", a.tol, "design tolerance")->check(CLI::PositiveNumber);
    a.seed_opt = sub->add_option("--seed", a.seed, "random seed");
    a.config_opt = sub->add_option("--config", a.config, "JSON config file (default $NDF_CONFIG)");
    a.out_opt = sub->add_option("--out", a.out, "output path (extend: prefix)");
    a.format_opt = sub->add_option("--format", a.format, "json, table or csv")->check(CLI::IsMember(formats));
  };

  CLI::App* verify = app.add_subcommand("verify", "certify a point-set file as a t-design");
  verify->add_option("file", a.file, "point-set file")->required();
  CLI::App* extend = app.add_subcommand("extend", "add free points until fixed + free is a t-design");
  extend->add_option("fixed", a.file, "fixed point-set file (omit for none)");
  extend->add_flag("--auto-n", a.auto_n, "take N from the extension bound (capped)");
  extend->add_flag("--trace", a.trace, "also write <prefix>.trace.csv");
  CLI::App* bounds = app.add_subcommand("bounds", "closed-form bounds for (d, t, t1, M)");
  CLI::App* partition = app.add_subcommand("partition", "equal-area partition of S^2");
  CLI::App* flow = app.add_subcommand("flow-demo", "gradient flow of a random boundary polynomial");
  CLI::App* mz = app.add_subcommand("mz-check", "sampling inequalities on an equal-area partition");
  mz->add_option("--cases", a.cases, "number of random polynomials (1 = single report)");

  std::vector<CLI::App*> subs = {verify, extend, bounds, partition, flow, mz};
  // Each subcommand gets its own option objects; the pointers that matter are
  // those of the subcommand that ran, so they are rebound after parsing.
  std::vector<detail::CliArgs> bound(subs.size());
  for (std::size_t i = 0; i < subs.size(); ++i) {
    common(subs[i]);
    bound[i] = a;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      detail::CliArgs run = a;
      run.dim_opt = bound[i].dim_opt;
      run.degree_opt = bound[i].degree_opt;
      run.t1_opt = bound[i].t1_opt;
      run.n_opt = bound[i].n_opt;
      run.m_opt = bound[i].m_opt;
      run.tol_opt = bound[i].tol_opt;
      run.seed_opt = bound[i].seed_opt;
      run.config_opt = bound[i].config_opt;
      run.out_opt = bound[i].out_opt;
      run.format_opt = bound[i].format_opt;
      switch (i) {
        case 0: return detail::cmd_verify(run, out);
        case 1: return detail::cmd_extend(run, out);
        case 2: return detail::cmd_bounds(run, out);
        case 3: return detail::cmd_partition(run, out);
        case 4: return detail::cmd_flow_demo(run, out);
        default: return detail::cmd_mz_check(run, out);
      }
    }
  } catch (const std::exception& e) {
    err << "ndf: error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace ndf
