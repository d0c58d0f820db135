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

#include <gtest/gtest.h>

#include <cmath>

#include "ndf/polynomial.hpp"
#include "oracles.hpp"

using namespace ndf;

namespace {

const SphereDim kS2(2);

PolynomialHandle raw_polynomial(int t, SphereDim d, Rng& rng, std::size_t anchors = 0) {
  const std::size_t n = anchors ? anchors : static_cast<std::size_t>(dim_space(t, d));
  std::vector<Point> z;
  std::vector<double> c;
  for (std::size_t i = 0; i < n; ++i) {
    z.push_back(rng.point_on_sphere(d));
    c.push_back(rng.normal());
  }
  return PolynomialHandle(KernelSpec(t, d), std::move(z), std::move(c));
}

double relative_gap(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST(EvalPoly, KernelAtItsAnchorIsDimension) {
  for (int t = 1; t <= 6; ++t) {
    const Point z{0.3, 0.1, -0.5};
    const PolynomialHandle p(KernelSpec(t, kS2), {z}, {1.0});
    EXPECT_NEAR(eval_poly(p, z), static_cast<double>(dim_space(t, kS2)), 1e-10);
  }
}

TEST(EvalPoly, IsKernelExpansion) {
  Rng rng(1);
  const PolynomialHandle p = raw_polynomial(4, kS2, rng);
  const Point x = rng.point_on_sphere(kS2);
  double s = 0.0;
  for (std::size_t j = 0; j < p.anchors.size(); ++j) s += p.coeffs[j] * kernel_eval(p.spec, p.anchors[j], x);
  EXPECT_NEAR(eval_poly(p, x), s, 1e-11 * std::max(1.0, std::abs(s)));
}

TEST(EvalPolyGrad, TangentAndMatchesFiniteDifferences) {
  Rng rng(2);
  for (int k = 0; k < 100; ++k) {
    const int d = 1 + k % 3;
    const PolynomialHandle p = raw_polynomial(1 + k % 6, SphereDim(d), rng, 1 + static_cast<std::size_t>(k) % 9);
    const Point x = rng.point_on_sphere(SphereDim(d));
    const Vec g = eval_poly_grad(p, x);
    EXPECT_NEAR(dot(g, x.coords()), 0.0, 1e-10 * std::max(1.0, norm(g)));
    const std::vector<double> v = oracle::random_tangent(x, rng);
    const double fd = oracle::tangent_derivative([&](const Point& y) { return eval_poly(p, y); }, x, v);
    const double an = dot(g, v);
    EXPECT_LE(std::abs(an - fd), 1e-6 * std::max(std::abs(fd), 1e-3 * norm(g) + 1e-9)) << "case " << k;
  }
}

TEST(EvalPoly, RejectsDimensionMismatch) {
  Rng rng(3);
  const PolynomialHandle p = raw_polynomial(2, kS2, rng);
  EXPECT_THROW(eval_poly(p, Point{1, 0}), std::invalid_argument);
  EXPECT_THROW(PolynomialHandle(KernelSpec(2, kS2), {}, {}), std::invalid_argument);
}

TEST(IntegralSquare, ClosedFormsAgreeWithProductRule) {
  Rng rng(4);
  for (int t = 1; t <= 7; ++t) {
    const PolynomialHandle p = raw_polynomial(t, kS2, rng);
    const QuadratureRule q = product_quadrature(2 * t + 2);
    const double sq = q.integrate([&](const Point& x) { return std::pow(eval_poly(p, x), 2); });
    const double gsq = q.integrate([&](const Point& x) { return std::pow(norm(eval_poly_grad(p, x)), 2); });
    EXPECT_NEAR(integral_square(p), sq, 1e-10 * sq);
    EXPECT_NEAR(integral_grad_square(p), gsq, 1e-10 * gsq);
  }
}

TEST(IntegrateAbs, AgreesWithGenericAdaptiveRoute) {
  Rng rng(5);
  for (int t = 1; t <= 4; ++t) {
    const PolynomialHandle p = raw_polynomial(t, kS2, rng);
    SphereIntegralOptions o;
    o.rel_tol = 1e-9;
    o.panels = 16;
    const double a = sphere_integral([&](const Point& x) { return std::abs(eval_poly(p, x)); }, kS2, o).value;
    const double g = sphere_integral([&](const Point& x) { return norm(eval_poly_grad(p, x)); }, kS2, o).value;
    EXPECT_LE(relative_gap(integrate_abs(p).value, a), 1e-7) << t;
    EXPECT_LE(relative_gap(integrate_grad_abs(p).value, g), 1e-7) << t;
  }
}

TEST(IntegrateAbs, DoubledOrderChangesLessThanTolerance) {
  Rng rng(6);
  for (int k = 0; k < 12; ++k) {
    const int t = 1 + k % 6;
    const PolynomialHandle p = raw_polynomial(t, kS2, rng);
    PolyQuadrature q, q2;
    q2.order = 2 * q.effective_order(t);
    EXPECT_LE(relative_gap(integrate_abs(p, q).value, integrate_abs(p, q2).value), 1e-9) << t;
    EXPECT_LE(relative_gap(integrate_grad_abs(p, q).value, integrate_grad_abs(p, q2).value), 1e-9) << t;
  }
}

TEST(NormalizeToBoundary, HitsOneUnderIndependentReintegration) {
  Rng rng(7);
  for (int k = 0; k < 10; ++k) {
    const PolynomialHandle p = random_boundary_polynomial(3, kS2, rng);
    EXPECT_TRUE(p.boundary_normalized);
    PolyQuadrature doubled;
    doubled.order = 2 * doubled.effective_order(3);
    EXPECT_NEAR(integrate_grad_abs(p, doubled).value, 1.0, 1e-6);
  }
}

TEST(NormalizeToBoundary, IdempotentAndHomogeneous) {
  Rng rng(8);
  const PolynomialHandle p = random_boundary_polynomial(3, kS2, rng);
  const PolynomialHandle again = normalize_to_boundary(p);
  const PolynomialHandle from_scaled = normalize_to_boundary(p.scaled(5.0));
  for (std::size_t j = 0; j < p.coeffs.size(); ++j) {
    EXPECT_NEAR(again.coeffs[j], p.coeffs[j], 1e-9 * std::abs(p.coeffs[j]) + 1e-15);
    EXPECT_NEAR(from_scaled.coeffs[j], p.coeffs[j], 1e-9 * std::abs(p.coeffs[j]) + 1e-15);
  }
  EXPECT_THROW(normalize_to_boundary(p.scaled(0.0)), std::invalid_argument);
}

TEST(NormalizeToBoundary, HigherSphereThroughMonteCarlo) {
  Rng rng(9);
  const PolynomialHandle p = random_boundary_polynomial(2, SphereDim(3), rng);
  SphereIntegralOptions o;
  o.seed = 1234;
  const IntegralEstimate e = sphere_integral([&](const Point& x) { return norm(eval_poly_grad(p, x)); }, SphereDim(3), o);
  EXPECT_NEAR(e.value, 1.0, std::max(10.0 * e.error, 1e-3));
}
