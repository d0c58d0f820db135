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

// Acceptance run: one PASS/FAIL line per criterion, each with its wall time
// and the figure it was judged on. Exit status is the number of failures.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

#include "ndf/ndf.hpp"
#include "oracles.hpp"

using namespace ndf;

namespace {

const SphereDim kS2(2);

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= budget_s) {
    o.pass = false;
    o.detail += fmt("; over the %.0f s budget", budget_s);
  }
  if (!o.pass) ++failures;
  std::printf("%s %2d %-28s %8.2f s  %s\n", o.pass ? "PASS" : "FAIL", id, name, secs, o.detail.c_str());
  std::fflush(stdout);
}

std::vector<Point> random_points(std::size_t n, Rng& rng) {
  std::vector<Point> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back(rng.point_on_sphere(kS2));
  return pts;
}

std::vector<Point> cell_samples(const Partition& r, Rng& rng) {
  std::vector<Point> pts;
  for (const Cell& c : r.cells) pts.push_back(c.sample(rng));
  return pts;
}

PolynomialHandle random_polynomial(int m, Rng& rng) {
  const auto n = static_cast<std::size_t>(dim_space(m, kS2));
  std::vector<double> c(n);
  for (double& v : c) v = rng.normal();
  return PolynomialHandle(KernelSpec(m, kS2), spiral_points(n), std::move(c));
}

// Relative error of an analytic directional derivative against a central
// difference; directions where the derivative nearly cancels are measured
// against a thousandth of the gradient norm instead.
double fd_relative_error(double analytic, double fd, double grad_norm) {
  return std::abs(analytic - fd) / std::max(std::abs(fd), 1e-3 * grad_norm + 1e-9);
}

Outcome dimensions() {
  int bad = 0, checked = 0;
  for (int d = 1; d <= 6; ++d) {
    const SphereDim sd(d);
    for (int t = 0; t <= 30; ++t) {
      std::uint64_t sum = 0;
      for (int l = 0; l <= t; ++l) sum += dim_harmonic(l, sd);
      const std::uint64_t up = dim_harmonic(t, SphereDim(d + 1));
      bad += sum != up;
      if (t >= 1) bad += dim_space(t, sd) != up - 1;
      // D(t,d) = C(t+d,d) - C(t+d-2,d) as an independent count of harmonics
      const double direct = oracle::binom(t + d, d) - oracle::binom(t + d - 2, d);
      bad += static_cast<double>(dim_harmonic(t, sd)) != direct;
      ++checked;
    }
  }
  return {bad == 0, fmt("%d (d,t) pairs, %d mismatches", checked, bad)};
}

Outcome classical() {
  double worst_a = 0.0, worst_m = 0.0;
  bool all = true;
  for (const ClassicalDesign& c : classical_designs_s2()) {
    const DesignCertificate cert = certify_design(c.strength, Configuration::of(c.points), 1e-10);
    all = all && *cert.is_design;
    worst_a = std::max(worst_a, cert.normalized_residual);
    worst_m = std::max(worst_m, *cert.oracle_max_deviation);
  }
  const DesignCertificate oct4 = certify_design(4, Configuration::of(octahedron()), 1e-10);
  const bool ok = all && worst_a <= 1e-10 && worst_m <= 1e-10 && !*oct4.is_design;
  return {ok, fmt("max A = %.2e, max moment dev = %.2e, octahedron t=4 A = %.3e rejected=%d", worst_a, worst_m,
                  oct4.normalized_residual, static_cast<int>(!*oct4.is_design))};
}

Outcome dgs() {
  const bool tet = *certify_design(2, Configuration::of(tetrahedron()), 1e-10).is_design;
  const bool oct = *certify_design(3, Configuration::of(octahedron()), 1e-10).is_design;
  const auto a = dgs_lower_bound(2, kS2), b = dgs_lower_bound(3, kS2);
  const bool ok = tet && oct && a == 4 && b == 6 && a == tetrahedron().size() && b == octahedron().size();
  return {ok, fmt("bound(2)=%llu bound(3)=%llu", static_cast<unsigned long long>(a), static_cast<unsigned long long>(b))};
}

Outcome nested_extension() {
  const std::vector<Point> tet = tetrahedron();
  int ok = 0;
  double slowest = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ExtendOptions o;
    o.init_strategy = InitStrategy::random;
    o.seed = seed;
    const auto t0 = std::chrono::steady_clock::now();
    const ExtendResult r = extend_design(3, tet, 8, kS2, o);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    slowest = std::max(slowest, secs);
    std::vector<Point> all = tet;
    all.insert(all.end(), r.free_points.begin(), r.free_points.end());
    const bool kept = std::equal(tet.begin(), tet.end(), all.begin());
    const bool certified = *certify_design(3, Configuration::of(all), 1e-10).is_design;
    ok += r.converged && kept && certified && secs < 60.0;
  }
  return {ok >= 9, fmt("%d/10 seeds certified (N=8, random start), slowest run %.2f s", ok, slowest)};
}

Outcome representer_bounds() {
  Rng rng(2001);
  int viol = 0;
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const int t = 1 + k % 8;
    const std::size_t m = 1 + static_cast<std::size_t>(rng.uniform() * 30.0);
    const double r = weyl_residual(t, Configuration::of(random_points(m, rng))).total_residual;
    const double bound = static_cast<double>(m) * std::sqrt(surface_area(kS2) * static_cast<double>(dim_space(t, kS2)));
    worst = std::max(worst, std::sqrt(r) / bound);
    viol += std::sqrt(r) > bound;
  }
  int nviol = 0;
  double nworst = 0.0;
  const std::vector<ClassicalDesign> designs = classical_designs_s2();
  for (int k = 0; k < 50; ++k) {
    const ClassicalDesign& c = designs[static_cast<std::size_t>(k) % designs.size()];
    const std::vector<Point> pts = Rotation::random(3, rng).apply(std::span<const Point>(c.points));
    if (!*certify_design(c.strength, Configuration::of(pts), 1e-10).is_design) ++nviol;
    const int t = c.strength + 1 + k % 4;
    const double r = std::max(weyl_residual(t, Configuration::of(pts)).total_residual, 0.0);
    const double gap = static_cast<double>(dim_space(t, kS2) - dim_space(c.strength, kS2));
    const double bound = static_cast<double>(pts.size()) * std::sqrt(surface_area(kS2) * gap);
    nworst = std::max(nworst, std::sqrt(r) / bound);
    nviol += std::sqrt(r) > bound;
  }
  return {viol == 0 && nviol == 0,
          fmt("general: %d violations (max ratio %.3f); nested: %d violations (max ratio %.3f)", viol, worst, nviol,
              nworst)};
}

Outcome boundary_norm() {
  Rng rng(2002);
  int viol = 0;
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const Lemma1Result r = lemma1_check(random_boundary_polynomial(1 + k % 6, kS2, rng));
    viol += !r.holds;
    worst = std::max(worst, r.ratio);
  }
  return {viol == 0, fmt("%d violations, max lhs/rhs %.4f", viol, worst)};
}

Outcome flow() {
  Rng rng(2003);
  int mono_bad = 0, disp_bad = 0, order_bad = 0;
  double rlo = 1e300, rhi = 0.0;
  for (int k = 0; k < 50; ++k) {
    const int t = 1 + k % 4;
    const PolynomialHandle p = random_boundary_polynomial(t, kS2, rng);
    const std::vector<Point> starts = cell_samples(equal_area_partition(16), rng);
    const FlowTrace tr = integrate_flow(p, starts, 1.0, 200);
    bool mono = true;
    for (std::size_t i = 1; i < tr.mean_values.size(); ++i) mono = mono && tr.mean_values[i] >= tr.mean_values[i - 1] - 1e-9;
    mono_bad += !mono;
    disp_bad += !flow_displacement_bound_check(tr, starts);
    const OrderEstimate e = flow_order_ratio(p, starts, FlowOptions{});
    rlo = std::min(rlo, e.ratio);
    rhi = std::max(rhi, e.ratio);
    order_bad += !(e.ratio >= 8.0 && e.ratio <= 32.0);
  }
  return {mono_bad == 0 && disp_bad == 0 && order_bad == 0,
          fmt("monotone fails %d, displacement fails %d, order ratio in [%.2f, %.2f] (%d outside [8,32])", mono_bad,
              disp_bad, rlo, rhi, order_bad)};
}

Outcome mz() {
  const MZSweep s = mz_sweep(100, 4, 4000, 2004);
  const double glo = gradient_lower_bound(kS2), ghi = gradient_upper_bound(kS2);
  const bool inside = *s.summary.lower_ratio >= kValueLower && *s.summary.upper_ratio <= kValueUpper &&
                      *s.summary.gradient_lower_ratio >= glo && *s.summary.gradient_upper_ratio <= ghi;
  // Scaling invariance: bitwise for powers of two, to rounding otherwise.
  Rng rng(2005);
  const Partition r = equal_area_partition(4000);
  int scale_bad = 0;
  double odd_dev = 0.0;
  for (int m = 1; m <= 4; ++m) {
    const PolynomialHandle p = random_polynomial(m, rng);
    const std::vector<Point> pts = cell_samples(r, rng);
    const MZReport base = mz_check(p, r, pts);
    for (double lambda : {0.25, 8.0, 1024.0}) {
      const MZReport x = mz_check(p.scaled(lambda), r, pts);
      scale_bad += *x.lower_ratio != *base.lower_ratio || *x.upper_ratio != *base.upper_ratio ||
                   *x.gradient_lower_ratio != *base.gradient_lower_ratio ||
                   *x.gradient_upper_ratio != *base.gradient_upper_ratio;
    }
    const MZReport x = mz_check(p.scaled(3.7), r, pts);
    odd_dev = std::max({odd_dev, std::abs(*x.lower_ratio / *base.lower_ratio - 1.0),
                        std::abs(*x.gradient_lower_ratio / *base.gradient_lower_ratio - 1.0)});
  }
  const bool ok = s.summary.pass && inside && s.unexplained_failures == 0 && scale_bad == 0 && odd_dev <= 1e-12;
  return {ok, fmt("value [%.3f, %.3f], gradient [%.3f, %.3f], scaling mismatches %d, odd-scale dev %.1e",
                  *s.summary.lower_ratio, *s.summary.upper_ratio, *s.summary.gradient_lower_ratio,
                  *s.summary.gradient_upper_ratio, scale_bad, odd_dev)};
}

Outcome partition() {
  double worst_area = 0.0, lo = 1e300, hi = 0.0;
  for (std::size_t n : {10u, 100u, 1000u, 4096u}) {
    const Partition r = equal_area_partition(n);
    if (r.size() != n) return {false, fmt("N=%zu produced %zu cells", n, r.size())};
    for (const Cell& c : r.cells) worst_area = std::max(worst_area, std::abs(c.area() - 1.0 / static_cast<double>(n)));
    const double s = r.norm * std::sqrt(static_cast<double>(n));
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  // One constant for the whole set: norm * sqrt(N) <= 7.
  return {worst_area <= 1e-12 && hi <= 7.0, fmt("max area error %.1e, norm*sqrt(N) in [%.3f, %.3f]", worst_area, lo, hi)};
}

Outcome total_order() {
  double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
  for (int t = 8; t <= 256; ++t) {
    const double x = std::log(t), y = std::log(corollary3_order(t, kS2));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    n += 1;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {slope >= 4.9 && slope <= 5.1, fmt("slope %.4f", slope)};
}

Outcome replication() {
  const ReplicationPlan plan = proposition1_plan(2, 3, kS2);
  ExtendOptions o;
  o.seed = 2006;
  const ReplicationBuild b = proposition1_build(2, 3, kS2, optimizer_design_source(o, kS2), 8);
  DesignSource src = optimizer_design_source(o, kS2);
  int union_bad = 0;
  for (int k = 0; k < 20; ++k) {
    const int t = 2 + k % 2;
    // no 2-design on S^2 has 5 points
    const std::size_t na = t == 2 ? std::array<std::size_t, 3>{4, 6, 7}[static_cast<std::size_t>(k) % 3] : 8;
    const std::vector<Point> a = src(t, na);
    const std::vector<Point> c = src(t, t == 2 ? 6 : 10);
    std::vector<Point> u = a;
    u.insert(u.end(), c.begin(), c.end());
    union_bad += !*certify_design(t, Configuration::of(u), 1e-10).is_design;
  }
  const bool ok = plan.copies == 5 && *b.union_certificate.is_design && *b.base_certificate.is_design &&
                  b.contains_base && union_bad == 0;
  return {ok, fmt("copies %llu, union of %zu points A = %.1e, contains base %d, union pairs failing %d",
                  static_cast<unsigned long long>(plan.copies), b.points.size(), b.union_certificate.normalized_residual,
                  static_cast<int>(b.contains_base), union_bad)};
}

Outcome gradients() {
  Rng rng(2007);
  double worst_res = 0.0, worst_poly = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int t = 1 + k % 6;
    Configuration cfg{kS2, random_points(static_cast<std::size_t>(k) % 4, rng),
                      random_points(1 + static_cast<std::size_t>(k) % 6, rng)};
    const std::vector<Vec> g = residual_gradient(t, cfg);
    const std::size_t i = static_cast<std::size_t>(k) % cfg.free.size();
    const std::vector<double> v = oracle::random_tangent(cfg.free[i], rng);
    const double fd = oracle::tangent_derivative(
        [&](const Point& p) {
          Configuration c = cfg;
          c.free[i] = p;
          return weyl_residual(t, c).total_residual;
        },
        cfg.free[i], v);
    worst_res = std::max(worst_res, fd_relative_error(dot(g[i], v), fd, norm(g[i])));
  }
  for (int k = 0; k < 100; ++k) {
    const PolynomialHandle p = random_polynomial(1 + k % 6, rng);
    const Point x = rng.point_on_sphere(kS2);
    const Vec g = eval_poly_grad(p, x);
    const std::vector<double> v = oracle::random_tangent(x, rng);
    const double fd = oracle::tangent_derivative([&](const Point& y) { return eval_poly(p, y); }, x, v);
    worst_poly = std::max(worst_poly, fd_relative_error(dot(g, v), fd, norm(g)));
  }
  return {worst_res <= 1e-6 && worst_poly <= 1e-6,
          fmt("max relative error: residual %.2e, polynomial %.2e", worst_res, worst_poly)};
}

}  // namespace

int main() {
  criterion(1, "dimension identities", 1.0, dimensions);
  criterion(2, "classical designs", 1.0, classical);
  criterion(3, "DGS tightness", 1.0, dgs);
  criterion(4, "nested extension", 600.0, nested_extension);
  criterion(5, "representer-sum bounds", 30.0, representer_bounds);
  criterion(6, "boundary norm bound", 60.0, boundary_norm);
  criterion(7, "flow properties", 120.0, flow);
  criterion(8, "sampling inequalities", 120.0, mz);
  criterion(9, "equal-area partition", 10.0, partition);
  criterion(10, "total order slope", 1.0, total_order);
  criterion(11, "replication build", 120.0, replication);
  criterion(12, "gradient correctness", 10.0, gradients);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
