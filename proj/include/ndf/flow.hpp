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

// The clamped normalized gradient field U = grad P / h_eps(|grad P|) and its
// flow on S^d. Each start point moves along U for time r/(3t); the mean of P
// over the moving points can only increase, and no point travels farther than
// the elapsed time because |U| <= 1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ndf/point.hpp"
#include "ndf/polynomial.hpp"

namespace ndf {

/// u above eps, eps otherwise.
inline double h_clamp(double u, double eps) {
  if (u < 0.0 || !(eps > 0.0)) throw std::invalid_argument("h_clamp needs u >= 0 and eps > 0");
  return u > eps ? u : eps;
}

/// Clamp threshold 1/(6 sqrt d).
inline double flow_epsilon(SphereDim d) { return 1.0 / (6.0 * std::sqrt(static_cast<double>(d.value()))); }

inline double flow_terminal_time(int t, double r) { return r / (3.0 * t); }

struct FlowOptions {
  double r = 1.0;
  int steps = 200;
  /// Multiplies U; anything other than 1 breaks |U| <= 1 and exists for negative tests.
  double field_scale = 1.0;
  /// Split steps where |grad P| crosses eps, so the kink of h_eps does not cost accuracy.
  bool locate_kinks = true;
};

struct FlowTrace {
  std::vector<double> times;
  /// Mean of P over the moving points at each time.
  std::vector<double> mean_values;
  std::vector<Point> endpoints;
  double epsilon = 0.0;
  double terminal_time = 0.0;
};

namespace detail {

class FlowField {
 public:
  FlowField(const PolynomialHandle& p, double scale) : p_(p), eps_(flow_epsilon(p.dim())), scale_(scale) {}

  double epsilon() const { return eps_; }

  /// U at x/|x|, written to out; returns |grad P| there.
  double eval(std::span<const double> x, std::span<double> out) const {
    const double r = norm(x);
    std::vector<double> u(x.begin(), x.end());
    for (double& v : u) v /= r;
    detail::poly_value_grad(p_, u, out.data());
    const double g = norm(out);
    const double f = scale_ / h_clamp(g, eps_);
    for (double& v : out) v *= f;
    return g;
  }

  double grad_norm(std::span<const double> x) const {
    std::vector<double> g(x.size());
    detail::poly_value_grad(p_, x, g.data());
    return norm(g);
  }

 private:
  const PolynomialHandle& p_;
  double eps_;
  double scale_;
};

inline std::vector<double> rk4_step(const FlowField& field, const std::vector<double>& w, double h) {
  const std::size_t n = w.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), y(n);
  field.eval(w, k1);
  for (std::size_t i = 0; i < n; ++i) y[i] = w[i] + 0.5 * h * k1[i];
  field.eval(y, k2);
  for (std::size_t i = 0; i < n; ++i) y[i] = w[i] + 0.5 * h * k2[i];
  field.eval(y, k3);
  for (std::size_t i = 0; i < n; ++i) y[i] = w[i] + h * k3[i];
  field.eval(y, k4);
  for (std::size_t i = 0; i < n; ++i) y[i] = w[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  const double r = norm(y);
  for (double& v : y) v /= r;
  return y;
}

/// One step of length h; if |grad P| - eps changes sign, the step is split at
/// the crossing (located by Illinois regula falsi on the sub-step length).
inline std::vector<double> flow_step(const FlowField& field, const std::vector<double>& w, double h, bool locate) {
  std::vector<double> end = rk4_step(field, w, h);
  if (!locate) return end;
  const double eps = field.epsilon();
  const double g0 = field.grad_norm(w) - eps;
  const double g1 = field.grad_norm(end) - eps;
  if (g0 == 0.0 || g1 == 0.0 || (g0 < 0.0) == (g1 < 0.0)) return end;
  double a = 0.0, b = h, fa = g0, fb = g1;
  int side = 0;
  double tau = h;
  for (int it = 0; it < 60; ++it) {
    tau = (a * fb - b * fa) / (fb - fa);
    const double ft = field.grad_norm(rk4_step(field, w, tau)) - eps;
    if (std::abs(ft) < 1e-14 || b - a < 1e-15 * h) break;
    if ((ft < 0.0) == (fb < 0.0)) {
      b = tau;
      fb = ft;
      if (side == -1) fa *= 0.5;
      side = -1;
    } else {
      a = tau;
      fa = ft;
      if (side == 1) fb *= 0.5;
      side = 1;
    }
  }
  if (!(tau > 0.0 && tau < h)) return end;
  return rk4_step(field, rk4_step(field, w, tau), h - tau);
}

}  // namespace detail

/// Spherical field U(P, x) = grad P(x) / h_eps(|grad P(x)|), eps = 1/(6 sqrt d).
inline Vec flow_field(const PolynomialHandle& p, const Point& x) {
  check_on_sphere(x, p.dim());
  Vec u(x.ambient_dim());
  detail::FlowField(p, 1.0).eval(x.coords(), u);
  return u;
}

/// RK4 on dw/ds = U(P, w) from s = 0 to r/(3t), renormalizing after each step.
inline FlowTrace integrate_flow(const PolynomialHandle& p, std::span<const Point> starts, const FlowOptions& opt) {
  if (opt.steps < 10) throw std::invalid_argument("flow integration needs at least 10 steps");
  if (!(opt.r > 0.0)) throw std::invalid_argument("flow radius r must be positive");
  if (starts.empty()) throw std::invalid_argument("flow needs at least one start point");
  for (const Point& s : starts) check_on_sphere(s, p.dim());

  const detail::FlowField field(p, opt.field_scale);
  FlowTrace trace;
  trace.epsilon = field.epsilon();
  trace.terminal_time = flow_terminal_time(p.degree(), opt.r);
  const double h = trace.terminal_time / opt.steps;

  std::vector<std::vector<double>> w;
  for (const Point& s : starts) w.push_back(s.vec());
  auto mean_value = [&]() {
    double m = 0.0;
    for (const auto& x : w) m += detail::poly_value_grad(p, x, nullptr);
    return m / static_cast<double>(w.size());
  };
  trace.times.push_back(0.0);
  trace.mean_values.push_back(mean_value());
  for (int k = 1; k <= opt.steps; ++k) {
    for (auto& x : w) x = detail::flow_step(field, x, h, opt.locate_kinks);
    trace.times.push_back(k == opt.steps ? trace.terminal_time : h * k);
    trace.mean_values.push_back(mean_value());
  }
  for (auto& x : w) trace.endpoints.push_back(Point(std::move(x)));
  return trace;
}

inline FlowTrace integrate_flow(const PolynomialHandle& p, std::span<const Point> starts, double r, int steps) {
  FlowOptions opt;
  opt.r = r;
  opt.steps = steps;
  return integrate_flow(p, starts, opt);
}

/// True iff every endpoint lies within the terminal time (plus tol) of its start.
inline bool flow_displacement_bound_check(const FlowTrace& trace, std::span<const Point> starts, double tol = 1e-8) {
  if (trace.endpoints.size() != starts.size())
    throw std::invalid_argument("trace and start lists differ in length");
  for (std::size_t i = 0; i < starts.size(); ++i)
    if (geodesic_distance(starts[i], trace.endpoints[i]) > trace.terminal_time + tol) return false;
  return true;
}

struct OrderEstimate {
  /// Geometric mean of successive ratios max_i |w_i(h) - w_i(h/2)| over the ladder.
  double ratio = 0.0;
  std::vector<int> steps;
  std::vector<double> differences;
};

/// Observed convergence ratio of the integrator under repeated step doubling,
/// starting at `base_steps` and stopping once differences reach `floor`.
inline OrderEstimate flow_order_ratio(const PolynomialHandle& p, std::span<const Point> starts, FlowOptions opt,
                                      int base_steps = 20, int max_steps = 2560, double floor = 1e-12) {
  OrderEstimate est;
  opt.steps = base_steps;
  FlowTrace prev = integrate_flow(p, starts, opt);
  est.steps.push_back(opt.steps);
  while (opt.steps * 2 <= max_steps) {
    opt.steps *= 2;
    FlowTrace next = integrate_flow(p, starts, opt);
    double diff = 0.0;
    for (std::size_t i = 0; i < starts.size(); ++i)
      diff = std::max(diff, geodesic_distance(prev.endpoints[i], next.endpoints[i]));
    if (diff < floor) break;
    est.steps.push_back(opt.steps);
    est.differences.push_back(diff);
    prev = std::move(next);
  }
  const std::size_t n = est.differences.size();
  if (n >= 2)
    est.ratio = std::pow(est.differences.front() / est.differences.back(), 1.0 / static_cast<double>(n - 1));
  return est;
}

}  // namespace ndf
