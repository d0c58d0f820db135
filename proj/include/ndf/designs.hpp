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

// Classical spherical designs on S^1 and S^2, and design sources that return
// certified designs of a requested size.

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "ndf/point.hpp"
#include "ndf/residual.hpp"

namespace ndf {

struct ClassicalDesign {
  std::string name;
  int strength;  // largest t for which it is a t-design
  std::vector<Point> points;
};

inline std::vector<Point> antipodal_pair() { return {Point{0.0, 0.0, 1.0}, Point{0.0, 0.0, -1.0}}; }

inline std::vector<Point> tetrahedron() {
  return {Point{1.0, 1.0, 1.0}, Point{1.0, -1.0, -1.0}, Point{-1.0, 1.0, -1.0}, Point{-1.0, -1.0, 1.0}};
}

inline std::vector<Point> octahedron() {
  return {Point{1.0, 0.0, 0.0},  Point{-1.0, 0.0, 0.0}, Point{0.0, 1.0, 0.0},
          Point{0.0, -1.0, 0.0}, Point{0.0, 0.0, 1.0},  Point{0.0, 0.0, -1.0}};
}

inline std::vector<Point> cube() {
  std::vector<Point> pts;
  for (double x : {1.0, -1.0})
    for (double y : {1.0, -1.0})
      for (double z : {1.0, -1.0}) pts.push_back(Point{x, y, z});
  return pts;
}

inline std::vector<Point> icosahedron() {
  const double g = std::numbers::phi;
  std::vector<Point> pts;
  for (double a : {1.0, -1.0})
    for (double b : {g, -g}) {
      pts.push_back(Point{0.0, a, b});
      pts.push_back(Point{a, b, 0.0});
      pts.push_back(Point{b, 0.0, a});
    }
  return pts;
}

/// Regular n-gon on S^1, an (n-1)-design.
inline std::vector<Point> regular_polygon(std::size_t n) {
  std::vector<Point> pts;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    pts.push_back(Point{std::cos(a), std::sin(a)});
  }
  return pts;
}

inline std::vector<ClassicalDesign> classical_designs_s2() {
  return {{"antipodal", 1, antipodal_pair()},
          {"tetrahedron", 2, tetrahedron()},
          {"octahedron", 3, octahedron()},
          {"cube", 3, cube()},
          {"icosahedron", 5, icosahedron()}};
}

/// Returns a certified `degree`-design with exactly `count` points, or throws.
using DesignSource = std::function<std::vector<Point>(int degree, std::size_t count)>;

/// Unions of randomly rotated copies of the smallest classical S^2 design of
/// sufficient strength whose size divides `count`.
inline DesignSource classical_design_source(std::uint64_t seed) {
  return [seed](int degree, std::size_t count) {
    Rng rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(count + 1000 * degree)));
    for (const ClassicalDesign& design : classical_designs_s2()) {
      if (design.strength < degree || count % design.points.size() != 0) continue;
      std::vector<Point> out;
      for (std::size_t c = 0; c < count / design.points.size(); ++c) {
        const std::vector<Point> rotated = Rotation::random(3, rng).apply(std::span<const Point>(design.points));
        out.insert(out.end(), rotated.begin(), rotated.end());
      }
      return out;
    }
    throw std::runtime_error("no classical " + std::to_string(degree) + "-design on S^2 with " +
                             std::to_string(count) + " points");
  };
}

}  // namespace ndf
