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

// Weyl-sum design residual ||sum_j G_{p_j}||_2^2 over a point multiset, its
// tangential gradient, and an independent certification through exact
// monomial integration.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ndf/harmonics.hpp"
#include "ndf/point.hpp"

namespace ndf {

/// Given points (kept bit-exact) plus the free points an optimizer may move.
struct Configuration {
  SphereDim dim;
  std::vector<Point> fixed;
  std::vector<Point> free;

  std::size_t size() const { return fixed.size() + free.size(); }

  std::vector<Point> all() const {
    std::vector<Point> pts(fixed);
    pts.insert(pts.end(), free.begin(), free.end());
    return pts;
  }

  void validate() const {
    if (size() == 0) throw std::invalid_argument("configuration has no points");
    for (const Point& p : fixed) check_on_sphere(p, dim);
    for (const Point& p : free) check_on_sphere(p, dim);
  }

  static Configuration of(std::vector<Point> pts) {
    if (pts.empty()) throw std::invalid_argument("configuration has no points");
    SphereDim d = pts.front().sphere_dim();
    return Configuration{d, {}, std::move(pts)};
  }
};

struct DesignCertificate {
  int t = 0;
  int dim = 0;
  std::size_t point_count = 0;
  /// omega_d * sum_{i,j} k_t(p_i,p_j), the squared L2 norm of the representer sum.
  double total_residual = 0.0;
  /// Contribution of each degree l = 1..t (index l-1).
  std::vector<double> per_degree;
  /// A_{t,N} = total_residual / (omega_d N^2).
  double normalized_residual = 0.0;
  std::optional<double> oracle_max_deviation;
  std::optional<bool> is_design;
  std::optional<double> tolerance;
};

/// Raised when the kernel residual and the monomial oracle contradict the
/// inequalities that tie them together; indicates a bug, not bad input.
class InconsistentCertificate : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

/// Neumaier-compensated running sum; order-dependent but deterministic.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace detail

/// Pairwise residual with the per-degree split, over every point of `cfg`.
inline DesignCertificate weyl_residual(int t, const Configuration& cfg) {
  cfg.validate();
  const KernelSpec spec(t, cfg.dim);
  const std::vector<Point> pts = cfg.all();
  const std::size_t n = pts.size();
  const auto tt = static_cast<std::size_t>(t);

  std::vector<detail::CompensatedSum> off(tt);
  std::vector<double> terms(tt);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      spec.profile_terms(clamped_dot(pts[i], pts[j]), terms);
      for (std::size_t l = 0; l < tt; ++l) off[l].add(terms[l]);
    }

  const double omega = surface_area(cfg.dim);
  DesignCertificate cert;
  cert.t = t;
  cert.dim = cfg.dim.value();
  cert.point_count = n;
  cert.per_degree.resize(tt);
  detail::CompensatedSum total;
  for (std::size_t l = 0; l < tt; ++l) {
    const double diag = spec.weights()[l] * static_cast<double>(n);
    cert.per_degree[l] = omega * (diag + 2.0 * off[l].value());
    total.add(cert.per_degree[l]);
  }
  cert.total_residual = total.value();
  cert.normalized_residual = cert.total_residual / (omega * static_cast<double>(n) * static_cast<double>(n));
  return cert;
}

/// Residual of the union fixed + free. When the fixed part is a t1-design
/// and nothing else is present, degrees 1..t1 vanish.
inline DesignCertificate nested_residual(int t, const Configuration& cfg) { return weyl_residual(t, cfg); }

/// Tangential gradient of total_residual with respect to each free point.
inline std::vector<Vec> residual_gradient(int t, const Configuration& cfg) {
  cfg.validate();
  const KernelSpec spec(t, cfg.dim);
  const std::vector<Point> pts = cfg.all();
  const double scale = 2.0 * surface_area(cfg.dim);
  const std::size_t m = cfg.fixed.size();
  std::vector<Vec> grads;
  grads.reserve(cfg.free.size());
  for (std::size_t i = m; i < pts.size(); ++i) {
    const Point& p = pts[i];
    Vec g(p.ambient_dim(), 0.0);
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j == i) continue;
      const double s = clamped_dot(p, pts[j]);
      const double dp = spec.profile(s).derivative;
      for (std::size_t k = 0; k < g.size(); ++k) g[k] += dp * (pts[j][k] - s * p[k]);
    }
    for (double& v : g) v *= scale;
    grads.push_back(std::move(g));
  }
  return grads;
}

/// All multi-indices of length `vars` with total degree <= max_degree, graded order.
inline std::vector<std::vector<int>> multi_indices(std::size_t vars, int max_degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> alpha(vars, 0);
  for (int total = 0; total <= max_degree; ++total) {
    // Enumerate compositions of `total` into `vars` parts.
    auto rec = [&](auto&& self, std::size_t pos, int remaining) -> void {
      if (pos + 1 == vars) {
        alpha[pos] = remaining;
        out.push_back(alpha);
        return;
      }
      for (int a = remaining; a >= 0; --a) {
        alpha[pos] = a;
        self(self, pos + 1, remaining - a);
      }
    };
    rec(rec, 0, total);
  }
  return out;
}

/// Exact integral of x^alpha against the normalized surface measure of S^d.
inline double monomial_integral(std::span<const int> alpha, SphereDim d) {
  if (alpha.size() != d.ambient())
    throw std::invalid_argument("multi-index length " + std::to_string(alpha.size()) + " does not match S^" +
                                std::to_string(d.value()));
  int half_total = 0;
  double num = 1.0;
  for (int a : alpha) {
    if (a < 0) throw std::invalid_argument("multi-index entries must be >= 0");
    if (a % 2 != 0) return 0.0;
    for (int k = a - 1; k > 1; k -= 2) num *= k;  // (a-1)!!
    half_total += a / 2;
  }
  // (2/omega_d) prod Gamma((a_i+1)/2) / Gamma((|a|+d+1)/2) reduces to
  // prod (a_i-1)!! / prod_{k<|a|/2} (d+1+2k).
  double den = 1.0;
  for (int k = 0; k < half_total; ++k) den *= d.value() + 1 + 2 * k;
  return num / den;
}

/// Quadrature identity on every monomial of degree <= t, checked against the
/// kernel residual. `is_design` requires both the oracle deviation and the
/// normalized residual to be within `tol`.
inline DesignCertificate certify_design(int t, const Configuration& cfg, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("certification tolerance must be positive");
  DesignCertificate cert = weyl_residual(t, cfg);
  const std::vector<Point> pts = cfg.all();
  const std::size_t n = pts.size();
  const std::size_t vars = cfg.dim.ambient();
  const auto tt = static_cast<std::size_t>(t);

  // powers[i][k][e] = (p_i)_k^e
  std::vector<double> powers(n * vars * (tt + 1));
  auto pw = [&](std::size_t i, std::size_t k, std::size_t e) -> double& {
    return powers[(i * vars + k) * (tt + 1) + e];
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < vars; ++k) {
      pw(i, k, 0) = 1.0;
      for (std::size_t e = 1; e <= tt; ++e) pw(i, k, e) = pw(i, k, e - 1) * pts[i][k];
    }

  const std::vector<double> coeffs = KernelSpec(t, cfg.dim).monomial_coefficients();
  const double a = cert.normalized_residual;
  const double sqrt_a = std::sqrt(std::max(a, 0.0));
  const double slack = 10.0 * tol + 1e-12 * static_cast<double>(dim_space(t, cfg.dim));

  double max_dev = 0.0;
  double coef_mass = 0.0;
  bool moment_bound_ok = true;
  std::vector<int> doubled(vars);
  for (const std::vector<int>& alpha : multi_indices(vars, t)) {
    detail::CompensatedSum s;
    for (std::size_t i = 0; i < n; ++i) {
      double v = 1.0;
      for (std::size_t k = 0; k < vars; ++k) v *= pw(i, k, static_cast<std::size_t>(alpha[k]));
      s.add(v);
    }
    const double mean = s.value() / static_cast<double>(n);
    const double exact = monomial_integral(alpha, cfg.dim);
    const double dev = std::abs(mean - exact);
    max_dev = std::max(max_dev, dev);

    // |m_alpha| = |<G, x^alpha - I_alpha>| <= sqrt(A) * ||x^alpha - I_alpha||.
    for (std::size_t k = 0; k < vars; ++k) doubled[k] = 2 * alpha[k];
    const double sigma = std::sqrt(std::max(0.0, monomial_integral(doubled, cfg.dim) - exact * exact));
    if (dev > sqrt_a * sigma * (1.0 + 1e-9) + slack) moment_bound_ok = false;

    // A = sum_alpha c_|alpha| multinomial(alpha) mean_alpha m_alpha.
    int total = 0;
    double multinomial = 1.0;
    for (int e : alpha) {
      for (int k = 1; k <= e; ++k) multinomial *= static_cast<double>(total + k) / k;
      total += e;
    }
    coef_mass += std::abs(coeffs[static_cast<std::size_t>(total)]) * multinomial * std::abs(mean);
  }

  if (!moment_bound_ok)
    throw InconsistentCertificate("monomial deviation exceeds the Cauchy-Schwarz bound from the kernel residual " +
                                  std::to_string(a));
  if (a > coef_mass * max_dev + slack)
    throw InconsistentCertificate("kernel residual " + std::to_string(a) + " exceeds the bound " +
                                  std::to_string(coef_mass * max_dev) + " implied by the monomial oracle");

  cert.oracle_max_deviation = max_dev;
  cert.tolerance = tol;
  cert.is_design = (max_dev <= tol) && (a <= tol);
  return cert;
}

}  // namespace ndf
