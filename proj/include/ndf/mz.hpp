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

// Sampling inequalities for polynomials: one point per cell of an
// area-regular partition, discrete mean of |P| (or |grad P|) against the
// integral. Also the L2 norm bound for polynomials on the boundary set.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ndf/harmonics.hpp"
#include "ndf/partition.hpp"
#include "ndf/polynomial.hpp"
#include "ndf/quadrature.hpp"

namespace ndf {

struct MZOptions {
  double r = 1.0;
  PolyQuadrature quadrature{};
  /// Containment slack when checking pts[i] against cell i.
  double containment_tol = 1e-9;
};

/// One value or gradient comparison. For a single case lower and upper ratio
/// coincide (discrete mean / integral); sweep summaries widen them to min/max.
struct MZReport {
  int m = 0;
  double partition_norm = 0.0;
  std::size_t cells = 0;
  std::optional<double> lower_ratio, upper_ratio;
  std::optional<double> gradient_lower_ratio, gradient_upper_ratio;
  std::optional<double> integral, discrete_mean, integral_error;
  std::optional<double> gradient_integral, gradient_discrete_mean, gradient_integral_error;
  /// Partition norm below r/m (values) and r/(m+1) (gradients).
  std::optional<bool> value_hypothesis, gradient_hypothesis;
  bool pass = true;
};

inline constexpr double kValueLower = 0.5;
inline constexpr double kValueUpper = 1.5;
inline double gradient_lower_bound(SphereDim d) { return 1.0 / (3.0 * std::sqrt(static_cast<double>(d.value()))); }
inline double gradient_upper_bound(SphereDim d) { return 3.0 * std::sqrt(static_cast<double>(d.value())); }

namespace detail {

inline void check_sampling_points(const Partition& r, std::span<const Point> pts, double tol) {
  if (pts.size() != r.size())
    throw std::invalid_argument("need one sample point per cell: " + std::to_string(pts.size()) + " points for " +
                                std::to_string(r.size()) + " cells");
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (!r.cells[i].contains(pts[i], tol))
      throw std::invalid_argument("sample point " + std::to_string(i) + " lies outside its cell");
}

}  // namespace detail

inline MZReport mz_value_check(const PolynomialHandle& p, const Partition& r, std::span<const Point> pts,
                               const MZOptions& opt = {}) {
  detail::check_sampling_points(r, pts, opt.containment_tol);
  const IntegralEstimate in = integrate_abs_checked(p, opt.quadrature);
  if (!(in.value > 1e-14)) throw std::invalid_argument("integral of |P| vanishes; degenerate polynomial");
  double mean = 0.0;
  for (const Point& x : pts) mean += std::abs(eval_poly(p, x));
  mean /= static_cast<double>(pts.size());

  MZReport rep;
  rep.m = p.degree();
  rep.partition_norm = r.norm;
  rep.cells = r.size();
  rep.integral = in.value;
  rep.integral_error = in.error;
  rep.discrete_mean = mean;
  rep.lower_ratio = rep.upper_ratio = mean / in.value;
  rep.value_hypothesis = r.norm < opt.r / rep.m;
  rep.pass = *rep.lower_ratio >= kValueLower && *rep.upper_ratio <= kValueUpper;
  return rep;
}

inline MZReport mz_gradient_check(const PolynomialHandle& p, const Partition& r, std::span<const Point> pts,
                                  const MZOptions& opt = {}) {
  detail::check_sampling_points(r, pts, opt.containment_tol);
  const IntegralEstimate in = integrate_grad_abs_checked(p, opt.quadrature);
  if (!(in.value > 1e-14)) throw std::invalid_argument("integral of |grad P| vanishes; degenerate polynomial");
  double mean = 0.0;
  for (const Point& x : pts) mean += norm(eval_poly_grad(p, x));
  mean /= static_cast<double>(pts.size());

  MZReport rep;
  rep.m = p.degree();
  rep.partition_norm = r.norm;
  rep.cells = r.size();
  rep.gradient_integral = in.value;
  rep.gradient_integral_error = in.error;
  rep.gradient_discrete_mean = mean;
  rep.gradient_lower_ratio = rep.gradient_upper_ratio = mean / in.value;
  rep.gradient_hypothesis = r.norm < opt.r / (rep.m + 1);
  rep.pass = *rep.gradient_lower_ratio >= gradient_lower_bound(p.dim()) &&
             *rep.gradient_upper_ratio <= gradient_upper_bound(p.dim());
  return rep;
}

/// Both checks on one case, merged into a single report.
inline MZReport mz_check(const PolynomialHandle& p, const Partition& r, std::span<const Point> pts,
                         const MZOptions& opt = {}) {
  MZReport rep = mz_value_check(p, r, pts, opt);
  const MZReport g = mz_gradient_check(p, r, pts, opt);
  rep.gradient_lower_ratio = g.gradient_lower_ratio;
  rep.gradient_upper_ratio = g.gradient_upper_ratio;
  rep.gradient_integral = g.gradient_integral;
  rep.gradient_discrete_mean = g.gradient_discrete_mean;
  rep.gradient_integral_error = g.gradient_integral_error;
  rep.gradient_hypothesis = g.gradient_hypothesis;
  rep.pass = rep.pass && g.pass;
  return rep;
}

struct MZSweep {
  std::vector<MZReport> cases;
  /// min/max of the per-case ratios, pass = every case passed.
  MZReport summary;
  /// Cases that failed although both hypotheses held.
  std::size_t unexplained_failures = 0;
};

/// Random polynomials of degree 1..max_degree (standard-normal coefficients
/// over spiral anchors) sampled at one uniform point per cell.
inline MZSweep mz_sweep(std::size_t cases, int max_degree, std::size_t cells, std::uint64_t seed,
                        const MZOptions& opt = {}) {
  if (max_degree < 1) throw std::invalid_argument("sweep degree must be >= 1");
  const Partition r = equal_area_partition(cells);
  Rng rng(seed);
  MZSweep out;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo, glo = lo, ghi = -lo;
  bool vh = true, gh = true;
  for (std::size_t k = 0; k < cases; ++k) {
    const int m = 1 + static_cast<int>(k % static_cast<std::size_t>(max_degree));
    const SphereDim d(2);
    const auto count = static_cast<std::size_t>(dim_space(m, d));
    std::vector<double> coeffs(count);
    for (double& c : coeffs) c = rng.normal();
    const PolynomialHandle p(KernelSpec(m, d), spiral_points(count), std::move(coeffs));
    std::vector<Point> pts;
    pts.reserve(r.size());
    for (const Cell& c : r.cells) pts.push_back(c.sample(rng));
    MZReport rep = mz_check(p, r, pts, opt);
    lo = std::min(lo, *rep.lower_ratio);
    hi = std::max(hi, *rep.upper_ratio);
    glo = std::min(glo, *rep.gradient_lower_ratio);
    ghi = std::max(ghi, *rep.gradient_upper_ratio);
    vh = vh && *rep.value_hypothesis;
    gh = gh && *rep.gradient_hypothesis;
    if (!rep.pass && *rep.value_hypothesis && *rep.gradient_hypothesis) ++out.unexplained_failures;
    out.summary.pass = out.summary.pass && rep.pass;
    out.cases.push_back(std::move(rep));
  }
  out.summary.m = max_degree;
  out.summary.partition_norm = r.norm;
  out.summary.cells = r.size();
  if (cases > 0) {
    out.summary.lower_ratio = lo;
    out.summary.upper_ratio = hi;
    out.summary.gradient_lower_ratio = glo;
    out.summary.gradient_upper_ratio = ghi;
    out.summary.value_hypothesis = vh;
    out.summary.gradient_hypothesis = gh;
  }
  return out;
}

struct Lemma1Result {
  /// ||P||_2 under the unnormalized surface measure.
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  double ratio = 0.0;
};

inline double lemma1_bound(int t, SphereDim d) {
  const double dd = d.value();
  return std::sqrt((dd + 1.0) / dd * surface_area(d) *
                   static_cast<double>(dim_harmonic(t + 1, SphereDim(d.value() + 1))));
}

/// ||P||_2 <= sqrt(((d+1)/d) omega_d D(t+1, d+1)) for P normalized to the boundary set.
/// Off S^2 the square integral comes from the Gram matrix instead of quadrature.
inline Lemma1Result lemma1_check(const PolynomialHandle& p) {
  if (!p.boundary_normalized) throw std::invalid_argument("the norm bound applies to boundary-normalized polynomials");
  Lemma1Result res;
  double square = 0.0;
  if (p.dim().value() == 2) {
    // P^2 has degree 2t, so the product rule of that order is exact.
    const QuadratureRule q = product_quadrature(2 * p.degree() + 16);
    square = q.integrate([&](const Point& x) {
      const double v = detail::poly_value_grad(p, x.coords(), nullptr);
      return v * v;
    });
  } else {
    square = integral_square(p);
  }
  res.lhs = std::sqrt(surface_area(p.dim()) * square);
  res.rhs = lemma1_bound(p.degree(), p.dim());
  res.ratio = res.lhs / res.rhs;
  res.holds = res.lhs <= res.rhs;
  return res;
}

}  // namespace ndf
