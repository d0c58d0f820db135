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

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numbers>

#include "ndf/partition.hpp"
#include "oracles.hpp"

using namespace ndf;

constexpr double kPi = std::numbers::pi;

TEST(Partition, WholeSphereAndHemispheres) {
  const Partition one = equal_area_partition(1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_NEAR(one.cells[0].area(), 1.0, 1e-15);
  EXPECT_NEAR(one.norm, kPi, 1e-15);
  const Partition two = equal_area_partition(2);
  ASSERT_EQ(two.size(), 2u);
  for (const Cell& c : two.cells) EXPECT_NEAR(c.area(), 0.5, 1e-15);
  EXPECT_NEAR(two.norm, kPi, 1e-12);
}

TEST(Partition, RejectsBadInput) {
  EXPECT_THROW(equal_area_partition(0), std::invalid_argument);
  EXPECT_THROW(equal_area_partition(10, SphereDim(3)), std::invalid_argument);
}

TEST(Partition, EqualAreasSummingToOne) {
  for (std::size_t n : {3u, 7u, 10u, 33u, 100u, 1000u, 4096u, 10000u}) {
    const Partition r = equal_area_partition(n);
    ASSERT_EQ(r.size(), n);
    double total = 0.0;
    for (const Cell& c : r.cells) {
      EXPECT_NEAR(c.area(), 1.0 / static_cast<double>(n), 1e-12);
      EXPECT_LT(c.theta0, c.theta1);
      EXPECT_GE(c.phi1 - c.phi0, 0.0);
      EXPECT_LE(c.phi1 - c.phi0, 2 * kPi);
      total += c.area();
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(Partition, CapDiameters) {
  const Cell cap{CellKind::polar_cap, 0.0, 0.4, 0.0, 2 * kPi};
  EXPECT_NEAR(cap.diameter(), 0.8, 1e-14);
  const Cell big{CellKind::polar_cap, 0.0, 2.5, 0.0, 2 * kPi};
  EXPECT_NEAR(big.diameter(), kPi, 1e-14);
  const Cell south{CellKind::polar_cap, kPi - 0.3, kPi, 0.0, 2 * kPi};
  EXPECT_NEAR(south.diameter(), 0.6, 1e-12);
}

TEST(Partition, NormMatchesBruteForceDiameters) {
  const Partition r = equal_area_partition(100);
  double brute = 0.0;
  for (const Cell& c : r.cells) {
    const double s = oracle::sampled_diameter(c, 100);
    EXPECT_LE(s, c.diameter() + 1e-12);
    EXPECT_NEAR(s, c.diameter(), 1e-3);
    brute = std::max(brute, s);
  }
  EXPECT_NEAR(partition_norm(r), brute, 1e-3);
  EXPECT_EQ(partition_norm(r), r.norm);
}

TEST(Partition, NormScalesLikeInverseRootN) {
  double prev = kPi + 1.0, lo = 1e9, hi = 0.0;
  for (int k = 0; k <= 12; ++k) {
    const auto n = std::size_t{1} << k;
    const Partition r = equal_area_partition(n);
    EXPECT_LE(r.norm, prev + 1e-12) << n;
    prev = r.norm;
    if (n >= 8) {
      lo = std::min(lo, r.norm * std::sqrt(static_cast<double>(n)));
      hi = std::max(hi, r.norm * std::sqrt(static_cast<double>(n)));
    }
  }
  for (std::size_t n : {10u, 100u, 1000u}) EXPECT_LE(equal_area_partition(n).norm * std::sqrt(static_cast<double>(n)), 7.0);
  EXPECT_LE(hi / lo, 2.0);
}

TEST(Partition, CentersAndLocate) {
  const Partition r = equal_area_partition(50);
  const Point north = r.cells.front().center();
  EXPECT_NEAR(north[2], 1.0, 1e-15);
  const std::vector<Point> centers = cell_centers(r);
  for (std::size_t i = 0; i < r.size(); ++i) {
    EXPECT_EQ(locate(r, centers[i]), i);
    EXPECT_TRUE(r.cells[i].contains(centers[i]));
  }
}

TEST(Partition, SamplesStayInTheirCell) {
  Rng rng(3);
  const Partition r = equal_area_partition(300);
  for (std::size_t i = 0; i < r.size(); ++i)
    for (int k = 0; k < 5; ++k) {
      const Point x = r.cells[i].sample(rng);
      EXPECT_TRUE(r.cells[i].contains(x, 1e-12));
      EXPECT_EQ(locate(r, x), i);
    }
}

TEST(Partition, UniformOccupancyChiSquare) {
  const std::size_t n = 100, draws = 100000;
  const Partition r = equal_area_partition(n);
  Rng rng(2024);
  std::vector<double> counts(n, 0.0);
  for (std::size_t k = 0; k < draws; ++k) counts[locate(r, rng.point_on_sphere(SphereDim(2)))] += 1.0;
  const double expected = static_cast<double>(draws) / static_cast<double>(n);
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  const boost::math::chi_squared dist(static_cast<double>(n - 1));
  EXPECT_GT(boost::math::cdf(boost::math::complement(dist, chi2)), 0.001) << "chi2 = " << chi2;
}
