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

// Quadrature on S^d. Polynomial integrands use the Gauss-Legendre x uniform
// longitude product rule; integrands with kinks or cone points (|P|, |grad P|)
// use nested adaptive Gauss-Kronrod in (theta, phi) on S^2, and randomized
// quasi-Monte Carlo with a reported standard error for d >= 3.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <queue>
#include <span>
#include <stdexcept>
#include <vector>

#include "ndf/point.hpp"

namespace ndf {

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
inline GaussRule gauss_legendre(std::size_t n) {
  if (n == 0) throw std::invalid_argument("Gauss-Legendre rule needs at least one node");
  GaussRule rule{std::vector<double>(n), std::vector<double>(n)};
  const double nn = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nn + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 1; k < n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk + 1.0) * x * p1 - kk * p0) / (kk + 1.0);
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = nn * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 1; k < n; ++k) {
      const double kk = static_cast<double>(k);
      const double p2 = ((2.0 * kk + 1.0) * x * p1 - kk * p0) / (kk + 1.0);
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : nn * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = x;
    rule.nodes[n - 1 - i] = -x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

/// Equal-weight-normalized product rule on S^2 (weights sum to 1).
struct QuadratureRule {
  SphereDim dim{2};
  std::vector<Point> nodes;
  std::vector<double> weights;
  int exact_degree = 0;

  template <typename F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

/// Gauss nodes in cos(theta) times uniform longitudes; exact for every
/// polynomial of total degree <= exact_degree.
inline QuadratureRule product_quadrature(int exact_degree) {
  if (exact_degree < 1) throw std::invalid_argument("quadrature degree must be >= 1");
  const auto n_theta = static_cast<std::size_t>(exact_degree / 2 + 1);
  const auto n_phi = static_cast<std::size_t>(exact_degree + 1);
  const GaussRule g = gauss_legendre(n_theta);
  QuadratureRule rule;
  rule.exact_degree = exact_degree;
  rule.nodes.reserve(n_theta * n_phi);
  rule.weights.reserve(n_theta * n_phi);
  for (std::size_t i = 0; i < n_theta; ++i) {
    const double z = g.nodes[i];
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    for (std::size_t j = 0; j < n_phi; ++j) {
      const double phi = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n_phi);
      rule.nodes.push_back(Point({r * std::cos(phi), r * std::sin(phi), z}));
      rule.weights.push_back(0.5 * g.weights[i] / static_cast<double>(n_phi));
    }
  }
  return rule;
}

struct IntegralEstimate {
  double value = 0.0;
  /// Estimated absolute error (standard error for the Monte Carlo route).
  double error = 0.0;
  std::size_t evaluations = 0;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod pair.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                               0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <typename F>
Panel gk15(F& f, double a, double b, std::size_t& evals) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  std::array<double, 15> fv;
  fv[7] = f(c);
  for (std::size_t k = 0; k < 7; ++k) {
    fv[k] = f(c - h * kXgk[k]);
    fv[14 - k] = f(c + h * kXgk[k]);
  }
  evals += 15;
  double kron = kWgk[7] * fv[7];
  double gauss = kWg[3] * fv[7];
  for (std::size_t k = 0; k < 7; ++k) {
    kron += kWgk[k] * (fv[k] + fv[14 - k]);
    if (k % 2 == 1) gauss += kWg[k / 2] * (fv[k] + fv[14 - k]);
  }
  const double mean = 0.5 * kron;
  double asc = kWgk[7] * std::abs(fv[7] - mean);
  for (std::size_t k = 0; k < 7; ++k) asc += kWgk[k] * (std::abs(fv[k] - mean) + std::abs(fv[14 - k] - mean));
  asc *= std::abs(h);
  double err = std::abs((kron - gauss) * h);
  if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  return {a, b, kron * h, err};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod on [a, b], starting from `panels` equal
/// panels further cut at `breaks` (known singular points, any order).
template <typename F>
IntegralEstimate adaptive_integrate(F&& f, double a, double b, double abs_tol, double rel_tol, std::size_t panels,
                                    std::size_t max_panels, std::span<const double> breaks) {
  std::priority_queue<detail::Panel> heap;
  IntegralEstimate est;
  panels = std::max<std::size_t>(1, panels);
  std::vector<double> cuts;
  for (std::size_t i = 0; i <= panels; ++i)
    cuts.push_back(i == panels ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(panels));
  for (double x : breaks)
    if (x > a && x < b) cuts.push_back(x);
  std::sort(cuts.begin(), cuts.end());
  const double min_gap = 1e-12 * (b - a);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    if (cuts[i + 1] - cuts[i] > min_gap) heap.push(detail::gk15(f, cuts[i], cuts[i + 1], est.evaluations));
  auto totals = [&]() {
    double v = 0.0, e = 0.0;
    auto copy = heap;
    while (!copy.empty()) {
      v += copy.top().value;
      e += copy.top().error;
      copy.pop();
    }
    return std::pair{v, e};
  };
  auto [value, error] = totals();
  while (error > std::max(abs_tol, rel_tol * std::abs(value)) && heap.size() < max_panels) {
    const detail::Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(worst);
      break;
    }
    const detail::Panel left = detail::gk15(f, worst.a, mid, est.evaluations);
    const detail::Panel right = detail::gk15(f, mid, worst.b, est.evaluations);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  std::tie(value, error) = totals();
  est.value = value;
  est.error = error;
  return est;
}

template <typename F>
IntegralEstimate adaptive_integrate(F&& f, double a, double b, double abs_tol, double rel_tol,
                                    std::size_t panels = 1, std::size_t max_panels = 2000) {
  return adaptive_integrate(f, a, b, abs_tol, rel_tol, panels, max_panels, std::span<const double>{});
}

struct SphereIntegralOptions {
  /// Relative accuracy target for the adaptive route.
  double rel_tol = 1e-11;
  /// Initial panel count per direction; higher values resolve more features up front.
  std::size_t panels = 4;
  /// Monte Carlo route (d >= 3): samples per randomization and number of randomizations.
  std::size_t qmc_samples = 8192;
  std::size_t qmc_shifts = 8;
  std::uint64_t seed = 42;
};

/// Panel count corresponding to a product-rule order; keeps the
/// "order >= 2t+16, cross-check at doubled order" knob meaningful for the
/// adaptive route.
inline std::size_t panels_for_order(int order) { return static_cast<std::size_t>(std::max(4, order / 4)); }

namespace detail {

inline double radical_inverse(std::size_t i, std::size_t base) {
  double inv = 1.0 / static_cast<double>(base), f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

inline constexpr std::array<std::size_t, 16> kPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

}  // namespace detail

/// Integral of f against the normalized measure of S^d.
template <typename F>
IntegralEstimate sphere_integral(F&& f, SphereDim d, const SphereIntegralOptions& opt = {}) {
  constexpr double pi = std::numbers::pi;
  if (d.value() == 1) {
    auto g = [&](double phi) { return f(Point({std::cos(phi), std::sin(phi)})); };
    IntegralEstimate e = adaptive_integrate(g, 0.0, 2.0 * pi, 0.0, opt.rel_tol, opt.panels);
    e.value /= 2.0 * pi;
    e.error /= 2.0 * pi;
    return e;
  }
  if (d.value() == 2) {
    // A coarse product-rule pilot fixes the absolute error budget, so
    // near-pole inner integrals (weighted by sin(theta)) are not over-resolved.
    const QuadratureRule pilot = product_quadrature(static_cast<int>(8 * opt.panels + 8));
    double scale = 0.0;
    for (std::size_t i = 0; i < pilot.nodes.size(); ++i) scale += pilot.weights[i] * std::abs(f(pilot.nodes[i]));
    std::size_t evals = pilot.nodes.size();
    if (scale == 0.0) scale = 1.0;
    const double budget = opt.rel_tol * scale * 4.0 * pi;
    double inner_err = 0.0;
    auto outer = [&](double theta) {
      const double st = std::sin(theta), ct = std::cos(theta);
      auto inner = [&](double phi) { return f(Point({st * std::cos(phi), st * std::sin(phi), ct})); };
      const IntegralEstimate e = adaptive_integrate(inner, 0.0, 2.0 * pi, 0.125 * budget, 0.0, opt.panels);
      evals += e.evaluations;
      inner_err = std::max(inner_err, e.error);
      return st * e.value;
    };
    IntegralEstimate e = adaptive_integrate(outer, 0.0, pi, 0.5 * budget, 0.0, opt.panels);
    e.evaluations = evals;
    e.value /= 4.0 * pi;
    e.error = (e.error + 2.0 * inner_err) / (4.0 * pi);
    return e;
  }
  // Randomly shifted Halton points pushed to the sphere through Box-Muller.
  const std::size_t n = d.ambient();
  const std::size_t dims = 2 * ((n + 1) / 2);
  if (dims > detail::kPrimes.size()) throw std::invalid_argument("sphere dimension too large for the QMC route");
  Rng rng(opt.seed);
  std::vector<double> means;
  std::size_t evals = 0;
  for (std::size_t s = 0; s < opt.qmc_shifts; ++s) {
    std::vector<double> shift(dims);
    for (double& v : shift) v = rng.uniform();
    double acc = 0.0;
    std::vector<double> g(dims);
    for (std::size_t i = 1; i <= opt.qmc_samples; ++i) {
      for (std::size_t k = 0; k < dims; k += 2) {
        double u1 = detail::radical_inverse(i, detail::kPrimes[k]) + shift[k];
        double u2 = detail::radical_inverse(i, detail::kPrimes[k + 1]) + shift[k + 1];
        u1 -= std::floor(u1);
        u2 -= std::floor(u2);
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        g[k] = r * std::cos(2.0 * pi * u2);
        g[k + 1] = r * std::sin(2.0 * pi * u2);
      }
      acc += f(Point(std::vector<double>(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(n))));
    }
    evals += opt.qmc_samples;
    means.push_back(acc / static_cast<double>(opt.qmc_samples));
  }
  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= static_cast<double>(means.size());
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  const double k = static_cast<double>(means.size());
  return {mean, k > 1 ? std::sqrt(var / (k * (k - 1.0))) : 0.0, evals};
}

}  // namespace ndf
