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

// Dimension counts, surface measure, normalized Gegenbauer polynomials and
// the reproducing kernel of the mean-zero polynomial space P_t(S^d).
//
// Individual spherical harmonics are never built: everything goes through
// the addition formula, so the kernel is k_t(x,y) = sum_{l=1..t} D(l,d) P_{l,d}(<x,y>).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ndf/point.hpp"

namespace ndf {

namespace detail {
__extension__ using u128 = unsigned __int128;
}  // namespace detail

/// Exact binomial coefficient; throws std::overflow_error when it does not fit 64 bits.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  detail::u128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;  // exact: r holds binom(n-k+i, i)
    if (r > std::numeric_limits<std::uint64_t>::max())
      throw std::overflow_error("integer overflow in binomial(" + std::to_string(n) + "," + std::to_string(k) + ")");
  }
  return static_cast<std::uint64_t>(r);
}

/// D(l,d): dimension of the degree-l spherical harmonics on S^d.
inline std::uint64_t dim_harmonic(int l, SphereDim d) {
  if (l < 0) throw std::invalid_argument("harmonic degree must be >= 0");
  if (l == 0) return 1;
  const auto L = static_cast<std::uint64_t>(l);
  const auto D = static_cast<std::uint64_t>(d.value());
  // (2l+d-1)/(l+d-1) * binom(l+d-1, l); the division is exact.
  const std::uint64_t c = binomial(L + D - 1, L);
  const detail::u128 num = static_cast<detail::u128>(c) * (2 * L + D - 1);
  const detail::u128 q = num / (L + D - 1);
  if (q > std::numeric_limits<std::uint64_t>::max()) throw std::overflow_error("integer overflow in D(l,d)");
  return static_cast<std::uint64_t>(q);
}

/// D_t = sum_{l=1..t} D(l,d) = D(t,d+1) - 1, the dimension of P_t.
inline std::uint64_t dim_space(int t, SphereDim d) {
  if (t < 1) throw std::invalid_argument("degree t must be >= 1");
  return dim_harmonic(t, SphereDim(d.value() + 1)) - 1;
}

/// omega_d, the surface area of S^d.
inline double surface_area(SphereDim d) {
  const double h = 0.5 * (d.value() + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

struct LegendreValue {
  double value;
  double derivative;
};

/// P_{l,d}(s) and its derivative, normalized so that P_{l,d}(1) = 1.
inline LegendreValue legendre_eval(int l, SphereDim d, double s) {
  if (l < 0) throw std::invalid_argument("Legendre degree must be >= 0");
  s = std::clamp(s, -1.0, 1.0);
  if (l == 0) return {1.0, 0.0};
  const double dd = d.value();
  double p0 = 1.0, dp0 = 0.0;
  double p1 = s, dp1 = 1.0;
  for (int k = 1; k < l; ++k) {
    const double a = (2.0 * k + dd - 1.0) / (k + dd - 1.0);
    const double b = k / (k + dd - 1.0);
    const double p2 = a * s * p1 - b * p0;
    const double dp2 = a * (p1 + s * dp1) - b * dp0;
    p0 = p1;
    dp0 = dp1;
    p1 = p2;
    dp1 = dp2;
  }
  return {p1, dp1};
}

/// Degree and sphere of the reproducing kernel k_t, with the D(l,d) weights cached.
class KernelSpec {
 public:
  KernelSpec(int t, SphereDim d) : t_(t), d_(d) {
    if (t < 1) throw std::invalid_argument("kernel degree t must be >= 1");
    weights_.reserve(static_cast<std::size_t>(t));
    for (int l = 1; l <= t; ++l) weights_.push_back(static_cast<double>(dim_harmonic(l, d)));
    diagonal_ = static_cast<double>(dim_space(t, d));
  }

  int degree() const { return t_; }
  SphereDim dim() const { return d_; }
  /// D(l,d) for l = 1..t (index l-1).
  const std::vector<double>& weights() const { return weights_; }
  /// k_t(x,x) = D_t.
  double diagonal() const { return diagonal_; }

  /// sum_l D(l,d) P_{l,d}(s) and its s-derivative.
  LegendreValue profile(double s) const {
    s = std::clamp(s, -1.0, 1.0);
    const double dd = d_.value();
    double p0 = 1.0, dp0 = 0.0, p1 = s, dp1 = 1.0;
    double v = weights_[0] * p1, dv = weights_[0] * dp1;
    for (int k = 1; k < t_; ++k) {
      const double a = (2.0 * k + dd - 1.0) / (k + dd - 1.0);
      const double b = k / (k + dd - 1.0);
      const double p2 = a * s * p1 - b * p0;
      const double dp2 = a * (p1 + s * dp1) - b * dp0;
      p0 = p1;
      dp0 = dp1;
      p1 = p2;
      dp1 = dp2;
      v += weights_[static_cast<std::size_t>(k)] * p1;
      dv += weights_[static_cast<std::size_t>(k)] * dp1;
    }
    return {v, dv};
  }

  /// Per-degree values D(l,d) P_{l,d}(s) written to out[l-1].
  void profile_terms(double s, std::span<double> out) const {
    s = std::clamp(s, -1.0, 1.0);
    const double dd = d_.value();
    double p0 = 1.0, p1 = s;
    out[0] = weights_[0] * p1;
    for (int k = 1; k < t_; ++k) {
      const double p2 = ((2.0 * k + dd - 1.0) * s * p1 - k * p0) / (k + dd - 1.0);
      p0 = p1;
      p1 = p2;
      out[static_cast<std::size_t>(k)] = weights_[static_cast<std::size_t>(k)] * p1;
    }
  }

  /// Coefficients c_n of the kernel profile in the monomial basis, sum_n c_n s^n.
  std::vector<double> monomial_coefficients() const {
    const double dd = d_.value();
    const auto n = static_cast<std::size_t>(t_) + 1;
    std::vector<double> p0(n, 0.0), p1(n, 0.0), total(n, 0.0);
    p0[0] = 1.0;
    p1[1] = 1.0;
    for (std::size_t i = 0; i < n; ++i) total[i] += weights_[0] * p1[i];
    for (int k = 1; k < t_; ++k) {
      std::vector<double> p2(n, 0.0);
      for (std::size_t i = 0; i + 1 < n; ++i) p2[i + 1] += (2.0 * k + dd - 1.0) * p1[i];
      for (std::size_t i = 0; i < n; ++i) p2[i] = (p2[i] - k * p0[i]) / (k + dd - 1.0);
      p0 = std::move(p1);
      p1 = std::move(p2);
      for (std::size_t i = 0; i < n; ++i) total[i] += weights_[static_cast<std::size_t>(k)] * p1[i];
    }
    return total;
  }

 private:
  int t_;
  SphereDim d_;
  std::vector<double> weights_;
  double diagonal_;
};

inline double kernel_eval(const KernelSpec& spec, const Point& x, const Point& y) {
  check_on_sphere(x, spec.dim());
  check_on_sphere(y, spec.dim());
  return spec.profile(clamped_dot(x, y)).value;
}

/// Spherical gradient of k_t(z, .) at x; tangent to x.
inline Vec kernel_grad(const KernelSpec& spec, const Point& z, const Point& x) {
  check_on_sphere(x, spec.dim());
  check_on_sphere(z, spec.dim());
  const double s = clamped_dot(z, x);
  const double dp = spec.profile(s).derivative;
  Vec g(x.ambient_dim());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = dp * (z[i] - s * x[i]);
  return g;
}

}  // namespace ndf
