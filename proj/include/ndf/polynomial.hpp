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

// Elements of P_t held as kernel expansions P = sum_j c_j k_t(z_j, .), with
// exact L2 norms through the Gram matrix and accurate integrals of |P| and
// |grad P|.
//
// On S^2 the restriction of P to a colatitude circle is a trigonometric
// polynomial of degree <= t in longitude, so its Fourier coefficients come
// exactly from 2t+2 samples. The longitude integral of |P| is then exact once
// the sign changes are located, and |grad P| becomes cheap to evaluate; only
// the colatitude direction needs adaptive quadrature.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ndf/harmonics.hpp"
#include "ndf/point.hpp"
#include "ndf/quadrature.hpp"

namespace ndf {

struct PolynomialHandle {
  KernelSpec spec;
  std::vector<Point> anchors;
  std::vector<double> coeffs;
  bool boundary_normalized = false;
  /// Difference between the normalizing integral and its doubled-order recomputation.
  double normalization_error = 0.0;

  PolynomialHandle(KernelSpec s, std::vector<Point> z, std::vector<double> c)
      : spec(std::move(s)), anchors(std::move(z)), coeffs(std::move(c)) {
    if (anchors.empty() || anchors.size() != coeffs.size())
      throw std::invalid_argument("polynomial needs matching, non-empty anchor and coefficient lists");
    for (const Point& z0 : anchors) check_on_sphere(z0, spec.dim());
  }

  int degree() const { return spec.degree(); }
  SphereDim dim() const { return spec.dim(); }

  PolynomialHandle scaled(double lambda) const {
    PolynomialHandle out(*this);
    for (double& c : out.coeffs) c *= lambda;
    out.boundary_normalized = false;
    out.normalization_error = 0.0;
    return out;
  }
};

namespace detail {

/// P(x) and, when grad is non-null, its spherical gradient; x need not be a Point.
inline double poly_value_grad(const PolynomialHandle& p, std::span<const double> x, double* grad) {
  const std::size_t n = x.size();
  double value = 0.0, radial = 0.0;
  if (grad)
    for (std::size_t k = 0; k < n; ++k) grad[k] = 0.0;
  for (std::size_t j = 0; j < p.anchors.size(); ++j) {
    const std::span<const double> z = p.anchors[j].coords();
    const double s = std::clamp(dot(z, x), -1.0, 1.0);
    const LegendreValue kv = p.spec.profile(s);
    value += p.coeffs[j] * kv.value;
    if (grad) {
      const double w = p.coeffs[j] * kv.derivative;
      for (std::size_t k = 0; k < n; ++k) grad[k] += w * z[k];
      radial += w * s;
    }
  }
  if (grad)
    for (std::size_t k = 0; k < n; ++k) grad[k] -= radial * x[k];
  return value;
}

}  // namespace detail

inline double eval_poly(const PolynomialHandle& p, const Point& x) {
  check_on_sphere(x, p.dim());
  return detail::poly_value_grad(p, x.coords(), nullptr);
}

/// Spherical gradient of P at x, tangent to x.
inline Vec eval_poly_grad(const PolynomialHandle& p, const Point& x) {
  check_on_sphere(x, p.dim());
  Vec g(x.ambient_dim());
  detail::poly_value_grad(p, x.coords(), g.data());
  return g;
}

/// Exact integral of P^2 against the normalized measure (k_t reproduces under it).
inline double integral_square(const PolynomialHandle& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.anchors.size(); ++i)
    for (std::size_t j = 0; j < p.anchors.size(); ++j)
      s += p.coeffs[i] * p.coeffs[j] * p.spec.profile(clamped_dot(p.anchors[i], p.anchors[j])).value;
  return std::max(s, 0.0);
}

/// Exact integral of |grad P|^2: degree l carries the Laplace eigenvalue l(l+d-1).
inline double integral_grad_square(const PolynomialHandle& p) {
  const int t = p.degree();
  const SphereDim d = p.dim();
  double s = 0.0;
  for (std::size_t i = 0; i < p.anchors.size(); ++i)
    for (std::size_t j = 0; j < p.anchors.size(); ++j) {
      const double x = clamped_dot(p.anchors[i], p.anchors[j]);
      double k = 0.0;
      for (int l = 1; l <= t; ++l)
        k += static_cast<double>(l) * (l + d.value() - 1) * static_cast<double>(dim_harmonic(l, d)) *
             legendre_eval(l, d, x).value;
      s += p.coeffs[i] * p.coeffs[j] * k;
    }
  return std::max(s, 0.0);
}

namespace detail {

/// a0 + sum_k (a_k cos k phi + b_k sin k phi).
struct TrigSeries {
  double a0 = 0.0;
  std::vector<double> a, b;

  double eval(double phi) const { return eval(std::cos(phi), std::sin(phi)); }

  /// Evaluation from cos(phi), sin(phi); the harmonics follow by rotation.
  double eval(double c1, double s1) const {
    double c = 1.0, s = 0.0, v = a0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double cn = c * c1 - s * s1;
      s = s * c1 + c * s1;
      c = cn;
      v += a[k] * c + b[k] * s;
    }
    return v;
  }

  /// Antiderivative without the constant: a0 phi + sum (a_k sin - b_k cos)/k.
  double primitive(double phi) const {
    double v = a0 * phi;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double kk = static_cast<double>(k + 1);
      v += (a[k] * std::sin(kk * phi) - b[k] * std::cos(kk * phi)) / kk;
    }
    return v;
  }

  TrigSeries derivative() const {
    TrigSeries d;
    d.a.resize(a.size());
    d.b.resize(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double kk = static_cast<double>(k + 1);
      d.a[k] = kk * b[k];
      d.b[k] = -kk * a[k];
    }
    return d;
  }
};

/// Fourier coefficients of P(theta, .) and dP/dtheta(theta, .), exact for degree <= t.
inline std::pair<TrigSeries, TrigSeries> latitude_series(const PolynomialHandle& p, double theta) {
  const auto t = static_cast<std::size_t>(p.degree());
  const std::size_t n = 2 * t + 2;
  const double st = std::sin(theta), ct = std::cos(theta);
  std::vector<double> cs(n), sn(n), vals(n), dtheta(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double phi = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    cs[j] = std::cos(phi);
    sn[j] = std::sin(phi);
  }
  double x[3], g[3];
  for (std::size_t j = 0; j < n; ++j) {
    x[0] = st * cs[j];
    x[1] = st * sn[j];
    x[2] = ct;
    vals[j] = poly_value_grad(p, std::span<const double>(x, 3), g);
    dtheta[j] = g[0] * ct * cs[j] + g[1] * ct * sn[j] - g[2] * st;
  }
  auto fit = [&](const std::vector<double>& v) {
    TrigSeries s;
    s.a.assign(t, 0.0);
    s.b.assign(t, 0.0);
    for (std::size_t j = 0; j < n; ++j) s.a0 += v[j];
    s.a0 /= static_cast<double>(n);
    for (std::size_t k = 1; k <= t; ++k) {
      double ak = 0.0, bk = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t m = k * j % n;
        ak += v[j] * cs[m];
        bk += v[j] * sn[m];
      }
      s.a[k - 1] = 2.0 * ak / static_cast<double>(n);
      s.b[k - 1] = 2.0 * bk / static_cast<double>(n);
    }
    return s;
  };
  return {fit(vals), fit(dtheta)};
}

/// Exact integral of |g| over [0, 2 pi] for a trigonometric polynomial g.
template <typename F>
double bisect_root(F&& f, double lo, double hi, double flo) {
  const double width = hi - lo;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * width; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Exact integral of |g| over one period. Roots are bracketed between the
/// grid and the extrema of g, so nearly double roots are not lost.
inline double abs_integral(const TrigSeries& g) {
  const double twopi = 2.0 * std::numbers::pi;
  const std::size_t grid = std::max<std::size_t>(64, 16 * (g.a.size() + 1));
  const TrigSeries dg = g.derivative();
  auto eval_g = [&](double x) { return g.eval(x); };
  auto eval_dg = [&](double x) { return dg.eval(x); };

  std::vector<double> nodes;
  nodes.reserve(2 * grid + 1);
  double prev_phi = 0.0, prev_d = dg.eval(0.0);
  nodes.push_back(0.0);
  for (std::size_t j = 1; j <= grid; ++j) {
    const double phi = twopi * static_cast<double>(j) / static_cast<double>(grid);
    const double d = j == grid ? dg.eval(0.0) : dg.eval(phi);
    if (prev_d != 0.0 && d != 0.0 && (prev_d < 0.0) != (d < 0.0))
      nodes.push_back(bisect_root(eval_dg, prev_phi, phi, prev_d));
    nodes.push_back(phi);
    prev_phi = phi;
    prev_d = d;
  }

  std::vector<double> roots;
  double prev = g.eval(0.0);
  if (prev == 0.0) roots.push_back(0.0);
  for (std::size_t j = 1; j < nodes.size(); ++j) {
    const double v = j + 1 == nodes.size() ? g.eval(0.0) : g.eval(nodes[j]);
    if (v == 0.0 && j + 1 < nodes.size())
      roots.push_back(nodes[j]);
    else if (prev != 0.0 && v != 0.0 && (prev < 0.0) != (v < 0.0))
      roots.push_back(bisect_root(eval_g, nodes[j - 1], nodes[j], prev));
    prev = v;
  }
  if (roots.empty()) return std::abs(g.primitive(twopi) - g.primitive(0.0));
  double total = 0.0;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const double lo = roots[i];
    const double hi = i + 1 < roots.size() ? roots[i + 1] : roots[0] + twopi;
    total += std::abs(g.primitive(hi) - g.primitive(lo));
  }
  return total;
}

enum class SingularKind {
  /// grad P = 0: cone points of |grad P|.
  critical,
  /// P = 0 with the zero curve tangent to a colatitude circle: square-root
  /// points of the longitude integral of |P|.
  zero_tangency,
};

struct SphericalPoint {
  double theta;
  double phi;
};

inline std::array<double, 2> singular_residual(const PolynomialHandle& p, SingularKind kind, double theta,
                                               double phi) {
  const auto [values, dtheta] = latitude_series(p, theta);
  const double c = std::cos(phi), s = std::sin(phi);
  const double dphi = values.derivative().eval(c, s);
  return {kind == SingularKind::critical ? dtheta.eval(c, s) : values.eval(c, s), dphi};
}

/// Points of S^2 (away from the poles) where the integrands lose smoothness,
/// found by Newton's method from local minima of the residual on a grid.
/// Missing one only costs adaptive refinement, never correctness.
inline std::vector<SphericalPoint> singular_points(const PolynomialHandle& p, SingularKind kind) {
  constexpr double pi = std::numbers::pi;
  const int t = p.degree();
  const auto nt = static_cast<std::size_t>(4 * t + 8);
  const std::size_t np = 2 * nt;
  const double scale = std::sqrt(integral_grad_square(p)) + (kind == SingularKind::critical ? 0.0 : std::sqrt(integral_square(p)));
  if (scale == 0.0) return {};

  std::vector<double> grid(nt * np);
  for (std::size_t i = 0; i < nt; ++i) {
    const double theta = pi * (static_cast<double>(i) + 0.5) / static_cast<double>(nt);
    const auto [values, dtheta] = latitude_series(p, theta);
    const TrigSeries dphi = values.derivative();
    for (std::size_t j = 0; j < np; ++j) {
      const double phi = 2.0 * pi * static_cast<double>(j) / static_cast<double>(np);
      const double c = std::cos(phi), s = std::sin(phi);
      const double a = kind == SingularKind::critical ? dtheta.eval(c, s) : values.eval(c, s);
      // longitude derivative measured per unit length
      const double b = dphi.eval(c, s) / std::sin(theta);
      grid[i * np + j] = a * a + b * b;
    }
  }

  std::vector<SphericalPoint> found;
  const double fd = 1e-6;
  for (std::size_t i = 0; i < nt; ++i)
    for (std::size_t j = 0; j < np; ++j) {
      const double v = grid[i * np + j];
      bool minimum = true;
      for (int di = -1; di <= 1 && minimum; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const auto ii = static_cast<std::ptrdiff_t>(i) + di;
          if (ii < 0 || ii >= static_cast<std::ptrdiff_t>(nt)) continue;
          const std::size_t jj = (j + np + static_cast<std::size_t>(dj + 1) - 1) % np;
          if (grid[static_cast<std::size_t>(ii) * np + jj] < v) {
            minimum = false;
            break;
          }
        }
      if (!minimum) continue;

      double theta = pi * (static_cast<double>(i) + 0.5) / static_cast<double>(nt);
      double phi = 2.0 * pi * static_cast<double>(j) / static_cast<double>(np);
      const double max_step = pi / static_cast<double>(nt);
      bool ok = false;
      for (int it = 0; it < 40; ++it) {
        const auto f = singular_residual(p, kind, theta, phi);
        if (std::hypot(f[0], f[1]) < 1e-11 * scale) {
          ok = true;
          break;
        }
        const auto ft1 = singular_residual(p, kind, theta + fd, phi);
        const auto ft0 = singular_residual(p, kind, theta - fd, phi);
        const auto fp1 = singular_residual(p, kind, theta, phi + fd);
        const auto fp0 = singular_residual(p, kind, theta, phi - fd);
        const double j00 = (ft1[0] - ft0[0]) / (2 * fd), j01 = (fp1[0] - fp0[0]) / (2 * fd);
        const double j10 = (ft1[1] - ft0[1]) / (2 * fd), j11 = (fp1[1] - fp0[1]) / (2 * fd);
        const double det = j00 * j11 - j01 * j10;
        if (det == 0.0 || !std::isfinite(det)) break;
        double dt = -(j11 * f[0] - j01 * f[1]) / det;
        double dp = -(-j10 * f[0] + j00 * f[1]) / det;
        const double len = std::hypot(dt, dp * std::sin(theta));
        if (len > max_step) {
          dt *= max_step / len;
          dp *= max_step / len;
        }
        theta += dt;
        phi += dp;
        if (theta <= 0.0 || theta >= pi) break;
        if (std::hypot(dt, dp) < 1e-14) {
          const auto g = singular_residual(p, kind, theta, phi);
          ok = std::hypot(g[0], g[1]) < 1e-8 * scale;
          break;
        }
      }
      if (!ok || theta <= 1e-9 || theta >= pi - 1e-9) continue;
      phi = std::fmod(phi, 2.0 * pi);
      if (phi < 0.0) phi += 2.0 * pi;
      const bool duplicate = std::any_of(found.begin(), found.end(), [&](const SphericalPoint& q) {
        const double dphi = std::abs(q.phi - phi);
        return std::abs(q.theta - theta) < 1e-7 && std::min(dphi, 2.0 * pi - dphi) < 1e-7;
      });
      if (!duplicate) found.push_back({theta, phi});
    }
  return found;
}

}  // namespace detail

/// Accuracy knobs for integrals of |P| and |grad P|. `order` plays the role of
/// a product-rule order: it sets the initial panel count of the adaptive
/// colatitude integration (and its doubled value is the cross-check).
struct PolyQuadrature {
  int order = 0;  // 0 means 2t+16
  double rel_tol = 1e-9;
  std::uint64_t seed = 42;  // QMC randomization for d >= 3

  int effective_order(int t) const { return order > 0 ? order : 2 * t + 16; }
};

namespace detail {

template <typename Inner>
IntegralEstimate colatitude_integral(Inner&& inner, int order, double abs_tol, std::span<const double> breaks) {
  const std::size_t panels = panels_for_order(order);
  std::size_t evals = 0;
  auto outer = [&](double theta) {
    ++evals;
    return std::sin(theta) * inner(theta);
  };
  IntegralEstimate e = adaptive_integrate(outer, 0.0, std::numbers::pi, abs_tol * 4.0 * std::numbers::pi, 0.0,
                                          panels, 4000, breaks);
  e.value /= 4.0 * std::numbers::pi;
  e.error /= 4.0 * std::numbers::pi;
  e.evaluations = evals;
  return e;
}

template <typename F>
IntegralEstimate generic_poly_integral(const PolynomialHandle& p, F&& f, const PolyQuadrature& q) {
  SphereIntegralOptions opt;
  opt.rel_tol = q.rel_tol;
  opt.panels = panels_for_order(q.effective_order(p.degree()));
  opt.seed = q.seed;
  if (p.dim().value() >= 3) opt.qmc_samples = 4096 * static_cast<std::size_t>(std::max(1, q.effective_order(p.degree()) / 8));
  return sphere_integral(f, p.dim(), opt);
}

}  // namespace detail

/// Integral of |P| against the normalized measure.
inline IntegralEstimate integrate_abs(const PolynomialHandle& p, const PolyQuadrature& q = {}) {
  const double scale = std::sqrt(integral_square(p));
  if (p.dim().value() != 2) {
    auto f = [&](const Point& x) { return std::abs(detail::poly_value_grad(p, x.coords(), nullptr)); };
    return detail::generic_poly_integral(p, f, q);
  }
  if (scale == 0.0) return {};
  std::vector<double> breaks;
  for (const detail::SphericalPoint& sp : detail::singular_points(p, detail::SingularKind::zero_tangency))
    breaks.push_back(sp.theta);
  auto inner = [&](double theta) { return detail::abs_integral(detail::latitude_series(p, theta).first); };
  return detail::colatitude_integral(inner, q.effective_order(p.degree()), q.rel_tol * scale, breaks);
}

/// Integral of |grad P| against the normalized measure.
inline IntegralEstimate integrate_grad_abs(const PolynomialHandle& p, const PolyQuadrature& q = {}) {
  const double scale = std::sqrt(integral_grad_square(p));
  if (p.dim().value() != 2) {
    auto f = [&](const Point& x) {
      Vec g(x.ambient_dim());
      detail::poly_value_grad(p, x.coords(), g.data());
      return norm(g);
    };
    return detail::generic_poly_integral(p, f, q);
  }
  if (scale == 0.0) return {};
  const int order = q.effective_order(p.degree());
  const double abs_tol = q.rel_tol * scale;
  const std::vector<detail::SphericalPoint> cones = detail::singular_points(p, detail::SingularKind::critical);
  std::vector<double> theta_breaks;
  for (const detail::SphericalPoint& sp : cones) theta_breaks.push_back(sp.theta);
  // Circles passing close to a cone point get its longitude as a cut.
  const double near = std::numbers::pi / static_cast<double>(4 * p.degree() + 8);
  std::size_t inner_evals = 0;
  std::vector<double> phi_breaks;
  auto inner = [&](double theta) {
    phi_breaks.clear();
    for (const detail::SphericalPoint& sp : cones)
      if (std::abs(sp.theta - theta) < near) phi_breaks.push_back(sp.phi);
    const auto [values, dtheta] = detail::latitude_series(p, theta);
    const detail::TrigSeries dphi = values.derivative();
    const double st = std::sin(theta);
    // Both series share one harmonic recurrence.
    auto f = [&](double phi) {
      const double c1 = std::cos(phi), s1 = std::sin(phi);
      double c = 1.0, sn = 0.0, a = dtheta.a0, b = dphi.a0;
      for (std::size_t k = 0; k < dtheta.a.size(); ++k) {
        const double cn = c * c1 - sn * s1;
        sn = sn * c1 + c * s1;
        c = cn;
        a += dtheta.a[k] * c + dtheta.b[k] * sn;
        b += dphi.a[k] * c + dphi.b[k] * sn;
      }
      b /= st;
      return std::sqrt(a * a + b * b);
    };
    const double tol = std::numbers::pi * abs_tol;
    const IntegralEstimate e =
        adaptive_integrate(f, 0.0, 2.0 * std::numbers::pi, tol, 0.0, panels_for_order(order), 4000, phi_breaks);
    inner_evals += e.evaluations;
    return e.value;
  };
  IntegralEstimate e = detail::colatitude_integral(inner, order, 0.5 * abs_tol, theta_breaks);
  e.evaluations += inner_evals;
  return e;
}

/// Integral of |grad P| at the requested order, with the error replaced by the
/// gap to a recomputation at doubled order when that is larger.
inline IntegralEstimate integrate_grad_abs_checked(const PolynomialHandle& p, const PolyQuadrature& q = {}) {
  IntegralEstimate e = integrate_grad_abs(p, q);
  PolyQuadrature doubled = q;
  doubled.order = 2 * q.effective_order(p.degree());
  const IntegralEstimate e2 = integrate_grad_abs(p, doubled);
  e.error = std::max(e.error, std::abs(e.value - e2.value));
  e.evaluations += e2.evaluations;
  return e;
}

inline IntegralEstimate integrate_abs_checked(const PolynomialHandle& p, const PolyQuadrature& q = {}) {
  IntegralEstimate e = integrate_abs(p, q);
  PolyQuadrature doubled = q;
  doubled.order = 2 * q.effective_order(p.degree());
  const IntegralEstimate e2 = integrate_abs(p, doubled);
  e.error = std::max(e.error, std::abs(e.value - e2.value));
  e.evaluations += e2.evaluations;
  return e;
}

/// Rescales P onto the set where the integral of |grad P| is 1.
inline PolynomialHandle normalize_to_boundary(const PolynomialHandle& p, const PolyQuadrature& q = {}) {
  const IntegralEstimate e = integrate_grad_abs_checked(p, q);
  if (!(e.value > 1e-14)) throw std::invalid_argument("cannot normalize the zero polynomial");
  PolynomialHandle out = p.scaled(1.0 / e.value);
  out.boundary_normalized = true;
  out.normalization_error = e.error / e.value;
  return out;
}

/// Standard-normal coefficients over D_t anchors (spiral on S^2, random
/// otherwise), normalized onto the boundary set.
inline PolynomialHandle random_boundary_polynomial(int t, SphereDim d, Rng& rng, const PolyQuadrature& q = {}) {
  const auto count = static_cast<std::size_t>(dim_space(t, d));
  std::vector<Point> anchors;
  if (d.value() == 2) {
    anchors = spiral_points(count);
  } else {
    for (std::size_t i = 0; i < count; ++i) anchors.push_back(rng.point_on_sphere(d));
  }
  std::vector<double> coeffs(count);
  for (double& c : coeffs) c = rng.normal();
  return normalize_to_boundary(PolynomialHandle(KernelSpec(t, d), std::move(anchors), std::move(coeffs)), q);
}

}  // namespace ndf
