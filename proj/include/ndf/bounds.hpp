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

// Closed-form point counts. Lower bounds and the estimates that make an
// extension possible come first; the replication construction for rational
// degree ratios closes the file.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ndf/designs.hpp"
#include "ndf/harmonics.hpp"
#include "ndf/point.hpp"
#include "ndf/residual.hpp"

namespace ndf {

/// Constants the existence proofs leave unspecified. Only B, r, the C1 margin,
/// an optional C1 override and C_d are inputs; C2 and C3 are always derived.
struct BoundConstants {
  double b = 7.0;
  double r = 1.0;
  /// Relative margin in C1 > (108 B / r)^d.
  double c1_margin = 0.01;
  std::optional<double> c1_override;
  /// Size constant of optimal-order designs, N = C_d t^d. Unset means C1 / 2.
  std::optional<double> c_d;

  void validate() const {
    if (!(b > 0.0) || !(r > 0.0)) throw std::invalid_argument("constants B and r must be positive");
    if (!(c1_margin > 0.0)) throw std::invalid_argument("C1 margin must be positive (the inequality is strict)");
    if (c_d && !(*c_d > 0.0)) throw std::invalid_argument("C_d must be positive");
    if (c1_override && !(*c1_override > 0.0)) throw std::invalid_argument("C1 override must be positive");
  }

  /// The strict lower limit (108 B / r)^d for C1.
  double c1_floor(SphereDim d) const { return std::pow(108.0 * b / r, d.value()); }
  double c1(SphereDim d) const {
    validate();
    if (c1_override) {
      if (!(*c1_override > c1_floor(d)))
        throw std::invalid_argument("C1 override must exceed (108 B / r)^d = " + std::to_string(c1_floor(d)));
      return *c1_override;
    }
    return c1_floor(d) * (1.0 + c1_margin);
  }
  double c2(SphereDim d) const { return r / (36.0 * std::sqrt(static_cast<double>(d.value()))); }
  double c3(SphereDim d) const {
    const double dd = d.value();
    return std::sqrt((dd + 1.0) / dd);
  }
  double design_constant(SphereDim d) const { return c_d ? *c_d : 0.5 * c1(d); }
};

/// Delsarte-Goethals-Seidel lower bound on the size of a t-design.
inline std::uint64_t dgs_lower_bound(int t, SphereDim d) {
  if (t < 1) throw std::invalid_argument("degree t must be >= 1");
  const auto dd = static_cast<std::uint64_t>(d.value());
  const auto k = static_cast<std::uint64_t>(t / 2);
  if (t % 2 == 0) return binomial(dd + k, dd) + binomial(dd + k - 1, dd);
  const std::uint64_t b = binomial(dd + k, dd);
  if (b > UINT64_MAX / 2) throw std::overflow_error("DGS bound overflows 64 bits");
  return 2 * b;
}

struct LemmaBounds {
  /// Upper bound on ||P||_2 for P on the boundary set.
  double norm_bound = 0.0;
  /// Upper bounds on ||sum of M representers||_2, any set and a t1-design.
  double representer_general = 0.0;
  double representer_nested = 0.0;
  /// Magnitudes of the lower bounds on <sum of representers, P> over the boundary set.
  double pairing_general = 0.0;
  double pairing_nested = 0.0;
};

inline void check_degrees(int t, int t1) {
  if (t1 < 1 || t1 >= t) throw std::invalid_argument("need 1 <= t1 < t, got t1 = " + std::to_string(t1) +
                                                      ", t = " + std::to_string(t));
}

inline LemmaBounds lemma_bounds(int t, int t1, std::uint64_t m, SphereDim d) {
  check_degrees(t, t1);
  if (m < 1) throw std::invalid_argument("M must be >= 1");
  const double dd = d.value();
  const double omega = surface_area(d);
  const double mm = static_cast<double>(m);
  const double dt = static_cast<double>(dim_space(t, d));
  const double gap = dt - static_cast<double>(dim_space(t1, d));
  const double next = static_cast<double>(dim_harmonic(t + 1, SphereDim(d.value() + 1)));
  LemmaBounds b;
  b.norm_bound = std::sqrt((dd + 1.0) / dd * omega * next);
  b.representer_general = mm * std::sqrt(omega * dt);
  b.representer_nested = mm * std::sqrt(omega * gap);
  b.pairing_general = mm * std::sqrt((dd + 1.0) / dd * next * dt);
  b.pairing_nested = mm * std::sqrt((dd + 1.0) / dd * next * gap);
  return b;
}

struct PointCountBound {
  double general = 0.0;
  /// Present when the fixed set is a t1-design.
  std::optional<double> nested;
};

/// Sufficient number of added points: max(C1 t^d, C3 M t sqrt(D(t+1,d+1) D) / C2)
/// with D = D_t in general and D_t - D_t1 for a fixed t1-design.
inline PointCountBound theorem4_points(int t, std::optional<int> t1, std::uint64_t m, SphereDim d,
                                       const BoundConstants& k = {}) {
  if (t < 1) throw std::invalid_argument("degree t must be >= 1");
  if (t1) check_degrees(t, *t1);
  const double first = k.c1(d) * std::pow(static_cast<double>(t), d.value());
  const double next = static_cast<double>(dim_harmonic(t + 1, SphereDim(d.value() + 1)));
  const double factor = k.c3(d) / k.c2(d) * static_cast<double>(m) * t * std::sqrt(next);
  const double dt = static_cast<double>(dim_space(t, d));
  PointCountBound out;
  out.general = std::max(first, factor * std::sqrt(dt));
  if (t1) out.nested = std::max(first, factor * std::sqrt(dt - static_cast<double>(dim_space(*t1, d))));
  return out;
}

/// N + M for extending an optimal-order (t-1)-design, M = C_d (t-1)^d: the
/// figure whose growth in t is the t^{2d+1} order.
inline double corollary3_order(int t, SphereDim d, const BoundConstants& k = {}) {
  if (t < 2) throw std::invalid_argument("the total order needs t >= 2");
  const double m = k.design_constant(d) * std::pow(static_cast<double>(t - 1), d.value());
  const double next = static_cast<double>(dim_harmonic(t + 1, SphereDim(d.value() + 1)));
  const double dt = static_cast<double>(dim_space(t, d));
  const double n = std::max(k.c1(d) * std::pow(static_cast<double>(t), d.value()),
                            k.c3(d) / k.c2(d) * m * t * std::sqrt(next * dt));
  return n + m;
}

struct BoundsReport {
  int d = 0, t = 0, t1 = 0;
  std::uint64_t m = 0;
  std::uint64_t dgs_lower = 0;
  LemmaBounds lemmas;
  PointCountBound points;
  double corollary3_total_order = 0.0;
  /// Echo of the constants in effect.
  double c1 = 0.0, c2 = 0.0, c3 = 0.0, c_d = 0.0, b = 0.0, r = 0.0, c1_margin = 0.0;
};

inline BoundsReport bounds_report(int t, int t1, std::uint64_t m, SphereDim d, const BoundConstants& k = {}) {
  BoundsReport rep;
  rep.d = d.value();
  rep.t = t;
  rep.t1 = t1;
  rep.m = m;
  rep.dgs_lower = dgs_lower_bound(t, d);
  rep.lemmas = lemma_bounds(t, t1, m, d);
  rep.points = theorem4_points(t, t1, m, d, k);
  rep.corollary3_total_order = corollary3_order(t, d, k);
  rep.c1 = k.c1(d);
  rep.c2 = k.c2(d);
  rep.c3 = k.c3(d);
  rep.c_d = k.design_constant(d);
  rep.b = k.b;
  rep.r = k.r;
  rep.c1_margin = k.c1_margin;
  return rep;
}

/// Replication arithmetic for t = (p/q) t1: a base t-design of q^d units is a
/// t1-design, and p^d - q^d further unit-size t-designs bring it to p^d units.
struct ReplicationPlan {
  int t1 = 0, t = 0, d = 0;
  std::uint64_t p = 0, q = 0;
  std::uint64_t copies = 0;
  /// Points per added design, as a formula in the design constant.
  std::string unit_size_expr;
  /// Constant of the final order, (p/q)^d * q^d C_d = p^d C_d.
  double constant = 0.0;
};

inline std::uint64_t int_pow(std::uint64_t base, int e) {
  std::uint64_t v = 1;
  for (int i = 0; i < e; ++i) {
    if (v > UINT64_MAX / base) throw std::overflow_error("power overflows 64 bits");
    v *= base;
  }
  return v;
}

inline ReplicationPlan proposition1_plan(int t1, int t, SphereDim d, const BoundConstants& k = {}) {
  check_degrees(t, t1);
  const auto g = static_cast<std::uint64_t>(std::gcd(t, t1));
  ReplicationPlan plan;
  plan.t1 = t1;
  plan.t = t;
  plan.d = d.value();
  plan.p = static_cast<std::uint64_t>(t) / g;
  plan.q = static_cast<std::uint64_t>(t1) / g;
  plan.copies = int_pow(plan.p, d.value()) - int_pow(plan.q, d.value());
  plan.unit_size_expr = "C_d * " + std::to_string(t) + "^" + std::to_string(d.value());
  plan.constant = static_cast<double>(int_pow(plan.p, d.value())) * k.design_constant(d);
  return plan;
}

struct ReplicationBuild {
  ReplicationPlan plan;
  std::size_t unit_size = 0;
  /// The base t-design, used as the t1-design.
  std::vector<Point> base;
  /// base followed by the added copies.
  std::vector<Point> points;
  DesignCertificate base_certificate;
  DesignCertificate union_certificate;
  bool contains_base = false;
};

/// Executes the plan with `unit_size` points per unit; the base has q^d units.
inline ReplicationBuild proposition1_build(int t1, int t, SphereDim d, const DesignSource& source,
                                           std::size_t unit_size, double tol = 1e-10) {
  if (unit_size == 0) throw std::invalid_argument("unit size must be positive");
  ReplicationBuild out;
  out.plan = proposition1_plan(t1, t, d);
  out.unit_size = unit_size;
  out.base = source(t, static_cast<std::size_t>(int_pow(out.plan.q, d.value())) * unit_size);
  out.points = out.base;
  for (std::uint64_t c = 0; c < out.plan.copies; ++c) {
    const std::vector<Point> add = source(t, unit_size);
    out.points.insert(out.points.end(), add.begin(), add.end());
  }
  out.base_certificate = certify_design(t1, Configuration::of(out.base), tol);
  out.union_certificate = certify_design(t, Configuration::of(out.points), tol);
  out.contains_base = std::equal(out.base.begin(), out.base.end(), out.points.begin());
  return out;
}

}  // namespace ndf
