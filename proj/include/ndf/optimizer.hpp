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

// Extension of a fixed point set to a t-design: Riemannian gradient descent on
// the normalized residual over the product of spheres, with restarts.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ndf/bounds.hpp"
#include "ndf/designs.hpp"
#include "ndf/harmonics.hpp"
#include "ndf/partition.hpp"
#include "ndf/point.hpp"
#include "ndf/residual.hpp"

namespace ndf {

enum class InitStrategy { equal_area_centers, spiral, random };
enum class LineSearch { backtracking, fixed };

inline const char* to_string(InitStrategy s) {
  switch (s) {
    case InitStrategy::equal_area_centers: return "equal_area_centers";
    case InitStrategy::spiral: return "spiral";
    case InitStrategy::random: return "random";
  }
  return "?";
}

struct ExtendOptions {
  /// Unset means equal-area centers on S^2 and random points elsewhere.
  std::optional<InitStrategy> init_strategy;
  std::uint64_t seed = 42;
  /// Iteration cap per restart (descent and polish together).
  int max_iters = 20000;
  /// Stop when the gradient norm of the normalized residual falls below this.
  double step_tol = 1e-14;
  /// Design tolerance on the normalized residual and the monomial deviations.
  double residual_tol = 1e-10;
  /// Total number of attempts, the first one included.
  int restarts = 8;
  LineSearch line_search = LineSearch::backtracking;
  /// Step length for LineSearch::fixed.
  double fixed_step = 1e-2;
  bool record_trace = false;

  void validate() const {
    if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
    if (!(step_tol > 0.0) || !(residual_tol > 0.0)) throw std::invalid_argument("tolerances must be positive");
    if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
    if (line_search == LineSearch::fixed && !(fixed_step > 0.0))
      throw std::invalid_argument("fixed step must be positive");
  }
};

enum class Phase { descent, polish };

inline const char* to_string(Phase p) { return p == Phase::descent ? "descent" : "polish"; }

struct TraceRow {
  int restart = 0;
  int iteration = 0;
  Phase phase = Phase::descent;
  /// Normalized residual and its gradient norm before the step.
  double residual = 0.0;
  double gradient_norm = 0.0;
  double step = 0.0;
};

struct ExtendResult {
  std::vector<Point> free_points;
  DesignCertificate certificate;
  int iterations_used = 0;
  int restarts_used = 0;
  bool converged = false;
  std::vector<std::string> warnings;
  std::vector<TraceRow> trace;
};

inline void write_trace_csv(std::ostream& os, std::span<const TraceRow> rows) {
  char buf[160];
  os << "restart,iteration,phase,residual,gradient_norm,step\n";
  for (const TraceRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%d,%s,%.17g,%.17g,%.17g\n", r.restart, r.iteration, to_string(r.phase),
                  r.residual, r.gradient_norm, r.step);
    os << buf;
  }
}

/// Starting points for the free part. `fixed` only fixes the dimension check.
inline std::vector<Point> initialize_points(InitStrategy strategy, std::size_t n, SphereDim d,
                                            std::span<const Point> fixed = {}, std::uint64_t seed = 42) {
  if (n == 0) throw std::invalid_argument("need at least one free point");
  for (const Point& p : fixed) check_on_sphere(p, d);
  switch (strategy) {
    case InitStrategy::equal_area_centers:
      if (d.value() != 2) throw std::invalid_argument("equal_area_centers initialization needs d = 2");
      return cell_centers(equal_area_partition(n));
    case InitStrategy::spiral: {
      if (d.value() == 2) return spiral_points(n);
      if (d.value() != 1) throw std::invalid_argument("spiral initialization needs d <= 2");
      std::vector<Point> pts;
      // Half-step offset keeps the circle points away from the axes.
      for (std::size_t k = 0; k < n; ++k) {
        const double a = 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.5) / static_cast<double>(n);
        pts.push_back(Point{std::cos(a), std::sin(a)});
      }
      return pts;
    }
    case InitStrategy::random: {
      Rng rng(seed);
      std::vector<Point> pts;
      for (std::size_t k = 0; k < n; ++k) pts.push_back(rng.point_on_sphere(d));
      return pts;
    }
  }
  throw std::invalid_argument("unknown init strategy");
}

inline InitStrategy default_init_strategy(SphereDim d) {
  return d.value() == 2 ? InitStrategy::equal_area_centers : InitStrategy::random;
}

/// Smallest N worth attempting: the union must reach the DGS lower bound.
inline std::size_t extension_floor(int t, SphereDim d, std::size_t fixed_count) {
  const std::uint64_t dgs = dgs_lower_bound(t, d);
  return static_cast<std::size_t>(dgs > fixed_count ? dgs - fixed_count : 1);
}

struct AutoCount {
  std::size_t n = 0;
  /// The sufficient count from the bounds, before capping.
  double bound = 0.0;
  std::optional<std::string> warning;
};

/// N when the caller gives none: the sufficient count of the extension bound
/// (nested form when the fixed set is a t1-design), at least the DGS floor,
/// capped at `cap` because the proven constants are astronomically large.
inline AutoCount auto_free_count(int t, std::optional<int> t1, std::size_t fixed_count, SphereDim d,
                                 const BoundConstants& k = {}, std::size_t cap = 64) {
  AutoCount out;
  const PointCountBound b = theorem4_points(t, t1, fixed_count, d, k);
  out.bound = b.nested.value_or(b.general);
  const double wanted = std::max(std::ceil(out.bound), static_cast<double>(extension_floor(t, d, fixed_count)));
  if (wanted > static_cast<double>(cap)) {
    out.n = cap;
    char buf[160];
    std::snprintf(buf, sizeof buf, "bound asks for N = %.6g free points; capped at %zu", out.bound, cap);
    out.warning = buf;
  } else {
    out.n = static_cast<std::size_t>(wanted);
  }
  return out;
}

namespace detail {

struct Objective {
  int t;
  SphereDim dim;
  const std::vector<Point>& fixed;
  double scale;  // 1 / (omega_d n^2)

  Objective(int t_, SphereDim d, const std::vector<Point>& f, std::size_t n)
      : t(t_), dim(d), fixed(f), scale(1.0 / (surface_area(d) * static_cast<double>(n) * static_cast<double>(n))) {}

  Configuration config(const std::vector<Point>& free) const { return Configuration{dim, fixed, free}; }
  double value(const std::vector<Point>& free) const { return weyl_residual(t, config(free)).total_residual * scale; }
  std::vector<Vec> gradient(const std::vector<Point>& free) const {
    std::vector<Vec> g = residual_gradient(t, config(free));
    for (Vec& v : g)
      for (double& x : v) x *= scale;
    return g;
  }
};

inline double squared_norm(const std::vector<Vec>& g) {
  double s = 0.0;
  for (const Vec& v : g) s += dot(v, v);
  return s;
}

inline std::vector<Point> step_points(const std::vector<Point>& x, const std::vector<Vec>& g, double alpha) {
  std::vector<Point> y;
  y.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y.push_back(retract(x[i], g[i], -alpha));
  return y;
}

/// Barzilai-Borwein step from the displacement of the points and the change of
/// the gradient (previous gradient transported by tangent projection).
inline std::optional<double> bb_step(const std::vector<Point>& x0, const std::vector<Vec>& g0,
                                     const std::vector<Point>& x1, const std::vector<Vec>& g1, bool long_step) {
  double ss = 0.0, sy = 0.0, yy = 0.0;
  for (std::size_t i = 0; i < x0.size(); ++i) {
    Vec s(x1[i].vec()), old(g0[i]);
    for (std::size_t k = 0; k < s.size(); ++k) s[k] -= x0[i][k];
    project_tangent(s, x1[i].coords());
    project_tangent(old, x1[i].coords());
    for (std::size_t k = 0; k < s.size(); ++k) {
      const double y = g1[i][k] - old[k];
      ss += s[k] * s[k];
      sy += s[k] * y;
      yy += y * y;
    }
  }
  if (!(sy > 0.0)) return std::nullopt;
  const double a = long_step ? ss / sy : sy / yy;
  return std::isfinite(a) ? std::optional<double>(a) : std::nullopt;
}

struct AttemptResult {
  std::vector<Point> free;
  double residual;
  int iterations;
};

/// One descent-then-polish run. The descent phase is monotone (Armijo); once
/// the residual is below tolerance the polish phase follows the gradient to
/// its roundoff floor, since a residual of tol only bounds moment errors by
/// about sqrt(tol). The best polished point (smallest gradient) is returned.
inline AttemptResult run_attempt(const Objective& obj, std::vector<Point> x, const ExtendOptions& opt, int restart,
                                 std::vector<TraceRow>* trace) {
  constexpr double armijo = 1e-4;
  std::vector<Vec> g = obj.gradient(x);
  double f = obj.value(x);
  double gg = squared_norm(g);
  std::optional<double> bb;
  std::vector<Point> prev_x;
  std::vector<Vec> prev_g;
  int it = 0;
  auto max_norm = [](const std::vector<Vec>& v) {
    double m = 0.0;
    for (const Vec& e : v) m = std::max(m, norm(e));
    return m;
  };
  auto log_row = [&](Phase ph, double step) {
    if (trace) trace->push_back({restart, it, ph, f, std::sqrt(gg), step});
  };

  double checkpoint = f;
  for (; it < opt.max_iters && f > opt.residual_tol; ++it) {
    if (std::sqrt(gg) <= opt.step_tol) return {std::move(x), f, it};
    // A run that gains less than 0.1% over 200 steps sits in a non-design minimum.
    if (it > 0 && it % 200 == 0) {
      if (f > 0.999 * checkpoint) return {std::move(x), f, it};
      checkpoint = f;
    }
    double alpha = 0.0;
    std::vector<Point> y;
    double fy = 0.0;
    if (opt.line_search == LineSearch::fixed) {
      alpha = opt.fixed_step;
      y = step_points(x, g, alpha);
      fy = obj.value(y);
    } else {
      alpha = bb ? std::clamp(*bb, 1e-12, 1e12) : 0.1 / max_norm(g);
      // Keep any single point from moving more than a quarter turn.
      alpha = std::min(alpha, 0.5 / max_norm(g));
      bool accepted = false;
      for (int k = 0; k < 60; ++k) {
        y = step_points(x, g, alpha);
        fy = obj.value(y);
        if (fy <= f - armijo * alpha * gg) {
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) break;
    }
    log_row(Phase::descent, alpha);
    prev_x = std::move(x);
    prev_g = std::move(g);
    x = std::move(y);
    f = fy;
    g = obj.gradient(x);
    gg = squared_norm(g);
    bb = bb_step(prev_x, prev_g, x, g, it % 2 == 0);
  }
  if (f > opt.residual_tol) return {std::move(x), f, it};

  std::vector<Point> best = x;
  double best_gg = gg, best_f = f;
  int since_best = 0;
  for (; it < opt.max_iters; ++it) {
    if (std::sqrt(gg) <= opt.step_tol || since_best >= 40) break;
    const double alpha = bb ? std::clamp(*bb, 1e-12, 1e12) : 0.1 / max_norm(g);
    log_row(Phase::polish, alpha);
    prev_x = std::move(x);
    prev_g = std::move(g);
    x = step_points(prev_x, prev_g, alpha);
    g = obj.gradient(x);
    gg = squared_norm(g);
    f = obj.value(x);
    bb = bb_step(prev_x, prev_g, x, g, it % 2 == 0);
    if (!std::isfinite(gg) || f > 1e3 * opt.residual_tol) break;
    if (gg < 0.25 * best_gg) {
      best = x;
      best_gg = gg;
      best_f = f;
      since_best = 0;
    } else {
      ++since_best;
    }
  }
  return {std::move(best), best_f, it};
}

/// Tangent Gaussian perturbation of every point, scale sigma.
inline std::vector<Point> perturb(const std::vector<Point>& x, double sigma, Rng& rng) {
  std::vector<Point> y;
  y.reserve(x.size());
  for (const Point& p : x) {
    Vec v(p.ambient_dim());
    for (double& e : v) e = rng.normal();
    project_tangent(v, p.coords());
    y.push_back(retract(p, v, sigma));
  }
  return y;
}

}  // namespace detail

/// Moves `init` (the free points) so that fixed + free is a t-design. Fixed
/// points are never touched, so the input set is a bitwise sub-multiset of the result.
inline ExtendResult extend_design_from(int t, const std::vector<Point>& fixed, std::vector<Point> init,
                                       const ExtendOptions& opt = {}) {
  opt.validate();
  if (t < 1) throw std::invalid_argument("degree t must be >= 1");
  if (init.empty()) throw std::invalid_argument("need at least one free point");
  const SphereDim d = init.front().sphere_dim();
  for (const Point& p : fixed) check_on_sphere(p, d);
  for (const Point& p : init) check_on_sphere(p, d);

  ExtendResult res;
  const std::size_t floor = extension_floor(t, d, fixed.size());
  if (init.size() < floor)
    res.warnings.push_back("N = " + std::to_string(init.size()) + " is below the heuristic floor " +
                           std::to_string(floor) + "; attempting anyway");

  const detail::Objective obj(t, d, fixed, fixed.size() + init.size());
  Rng rng(opt.seed ^ 0x5bd1e995ULL);
  std::vector<Point> best;
  double best_f = std::numeric_limits<double>::infinity();
  std::vector<Point> start = std::move(init);
  for (int r = 0; r < opt.restarts; ++r) {
    if (r > 0) start = detail::perturb(best, 0.6 * std::pow(0.7, r - 1), rng);
    detail::AttemptResult a = detail::run_attempt(obj, std::move(start), opt, r, opt.record_trace ? &res.trace : nullptr);
    res.iterations_used += a.iterations;
    res.restarts_used = r + 1;
    // Strict comparison: ties keep the earlier attempt.
    if (a.residual < best_f || best.empty()) {
      best = std::move(a.free);
      best_f = a.residual;
    }
    if (best_f <= opt.residual_tol) {
      const DesignCertificate cert = certify_design(t, obj.config(best), opt.residual_tol);
      if (*cert.is_design) break;
    }
  }
  res.free_points = std::move(best);
  res.certificate = certify_design(t, obj.config(res.free_points), opt.residual_tol);
  res.converged = *res.certificate.is_design;
  return res;
}

/// extend_design_from with starting points from the configured strategy.
inline ExtendResult extend_design(int t, const std::vector<Point>& fixed, std::size_t n, SphereDim d,
                                  const ExtendOptions& opt = {}) {
  const InitStrategy s = opt.init_strategy.value_or(default_init_strategy(d));
  return extend_design_from(t, fixed, initialize_points(s, n, d, fixed, opt.seed), opt);
}

/// Design source backed by the optimizer: random starts, no fixed points.
/// Throws if the run does not certify.
inline DesignSource optimizer_design_source(ExtendOptions opt, SphereDim d) {
  return [opt, d](int degree, std::size_t count) mutable {
    ExtendOptions o = opt;
    o.init_strategy = InitStrategy::random;
    const ExtendResult r = extend_design(degree, {}, count, d, o);
    opt.seed = opt.seed * 6364136223846793005ULL + 1442695040888963407ULL;
    if (!r.converged)
      throw std::runtime_error("optimizer found no " + std::to_string(degree) + "-design with " +
                               std::to_string(count) + " points");
    return r.free_points;
  };
}

}  // namespace ndf
