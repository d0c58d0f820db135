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

// Area-regular zonal partitions of S^2: two polar caps plus collars, each
// collar cut into equal longitude slices. Every cell has normalized area 1/N
// in closed form; diameters are evaluated in closed form as well.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "ndf/point.hpp"

namespace ndf {

enum class CellKind { polar_cap, collar_rect };

inline const char* to_string(CellKind k) { return k == CellKind::polar_cap ? "polar_cap" : "collar_rect"; }

namespace detail {

inline double angle_between(double theta_a, double theta_b, double cos_dphi) {
  const double c = std::cos(theta_a) * std::cos(theta_b) + std::sin(theta_a) * std::sin(theta_b) * cos_dphi;
  return std::acos(std::clamp(c, -1.0, 1.0));
}

}  // namespace detail

/// Colatitude/longitude box [theta0,theta1] x [phi0,phi1]; caps span the full circle.
struct Cell {
  CellKind kind;
  double theta0;
  double theta1;
  double phi0;
  double phi1;

  double area() const { return (std::cos(theta0) - std::cos(theta1)) * (phi1 - phi0) / (4.0 * std::numbers::pi); }

  double diameter() const {
    constexpr double pi = std::numbers::pi;
    if (kind == CellKind::polar_cap) {
      if (theta0 <= 0.0 && theta1 >= pi) return pi;
      if (theta0 <= 0.0) return std::min(2.0 * theta1, pi);
      return std::min(2.0 * (pi - theta0), pi);
    }
    // Longitude separation enters only through cos(dphi), which is smallest at
    // min(width, pi). The colatitude pair minimizing cos(distance) is among the
    // candidates below.
    const double c = std::cos(std::min(phi1 - phi0, pi));
    const auto inside = [&](double th) { return th >= theta0 && th <= theta1; };
    double best = theta1 - theta0;
    std::vector<std::array<double, 2>> pairs;
    for (double a : {theta0, theta1}) {
      for (double b : {theta0, theta1}) pairs.push_back({a, b});
      // minimizer of cos(a)cos(b) + sin(a)sin(b)c over b
      double crit = std::atan2(std::sin(a) * c, std::cos(a)) + pi;
      if (crit >= 2.0 * pi) crit -= 2.0 * pi;
      if (inside(crit)) pairs.push_back({a, crit});
    }
    if (inside(pi / 2)) pairs.push_back({pi / 2, pi / 2});
    for (const auto& [a, b] : pairs) best = std::max(best, detail::angle_between(a, b, c));
    return best;
  }

  bool contains(const Point& x, double tol = 1e-12) const {
    const SphericalCoords sc = to_spherical(x);
    if (sc.theta < theta0 - tol || sc.theta > theta1 + tol) return false;
    if (kind == CellKind::polar_cap) return true;
    // near the poles longitude is meaningless
    if (std::sin(sc.theta) < tol) return true;
    const double twopi = 2.0 * std::numbers::pi;
    for (double phi : {sc.phi, sc.phi + twopi, sc.phi - twopi})
      if (phi >= phi0 - tol && phi <= phi1 + tol) return true;
    return false;
  }

  Point center() const {
    if (kind == CellKind::polar_cap) {
      if (theta0 <= 0.0) return Point{0.0, 0.0, 1.0};
      return Point{0.0, 0.0, -1.0};
    }
    return from_spherical(0.5 * (theta0 + theta1), 0.5 * (phi0 + phi1));
  }

  /// Uniform (area measure) sample inside the cell.
  Point sample(Rng& rng) const {
    const double z = std::cos(theta1) + rng.uniform() * (std::cos(theta0) - std::cos(theta1));
    const double phi = phi0 + rng.uniform() * (phi1 - phi0);
    return from_spherical(std::acos(std::clamp(z, -1.0, 1.0)), phi);
  }
};

/// A band of cells sharing a colatitude range, indices [first, first+count).
struct Zone {
  double theta0;
  double theta1;
  std::size_t first;
  std::size_t count;
};

struct Partition {
  std::vector<Cell> cells;
  std::vector<Zone> zones;
  double norm = 0.0;

  std::size_t size() const { return cells.size(); }
};

inline double partition_norm(const Partition& r) {
  double best = 0.0;
  for (const Cell& c : r.cells) best = std::max(best, c.diameter());
  return best;
}

inline Partition equal_area_partition(std::size_t n, SphereDim d = SphereDim(2)) {
  constexpr double pi = std::numbers::pi;
  if (d.value() != 2) throw std::invalid_argument("equal-area partitions are implemented for S^2 only");
  if (n == 0) throw std::invalid_argument("partition needs at least one cell");

  Partition r;
  const double nn = static_cast<double>(n);
  // Colatitude at which the cap above it holds `cells` cells.
  const auto boundary = [&](double cells) { return std::acos(std::clamp(1.0 - 2.0 * cells / nn, -1.0, 1.0)); };

  if (n == 1) {
    r.cells.push_back({CellKind::polar_cap, 0.0, pi, 0.0, 2.0 * pi});
    r.zones.push_back({0.0, pi, 0, 1});
    r.norm = partition_norm(r);
    return r;
  }

  const double cap = boundary(1.0);
  r.cells.push_back({CellKind::polar_cap, 0.0, cap, 0.0, 2.0 * pi});
  r.zones.push_back({0.0, cap, 0, 1});

  if (n > 2) {
    const double ideal_height = std::sqrt(4.0 * pi / nn);
    const auto collars = static_cast<std::size_t>(
        std::max(1.0, std::round((pi - 2.0 * cap) / ideal_height)));
    const double height = (pi - 2.0 * cap) / static_cast<double>(collars);

    // Ideal (fractional) cell counts per collar, rounded with carried remainder
    // so the counts sum to n - 2.
    std::vector<std::size_t> counts(collars);
    double carry = 0.0;
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < collars; ++i) {
      const double a = cap + height * static_cast<double>(i);
      const double b = a + height;
      const double ideal = (std::cos(a) - std::cos(b)) / 2.0 * nn;
      const auto m = static_cast<std::size_t>(std::max(0.0, std::round(ideal + carry)));
      carry += ideal - static_cast<double>(m);
      counts[i] = m;
      assigned += m;
    }
    // Rounding drift, if any, lands on the last collar.
    if (assigned != n - 2) counts.back() = counts.back() + (n - 2) - assigned;

    double before = 1.0;
    for (std::size_t i = 0; i < collars; ++i) {
      if (counts[i] == 0) continue;
      const double t0 = boundary(before);
      const double t1 = boundary(before + static_cast<double>(counts[i]));
      const double width = 2.0 * pi / static_cast<double>(counts[i]);
      r.zones.push_back({t0, t1, r.cells.size(), counts[i]});
      for (std::size_t j = 0; j < counts[i]; ++j) {
        const double p0 = width * static_cast<double>(j);
        const double p1 = j + 1 == counts[i] ? 2.0 * pi : width * static_cast<double>(j + 1);
        r.cells.push_back({CellKind::collar_rect, t0, t1, p0, p1});
      }
      before += static_cast<double>(counts[i]);
    }
  }

  const double south = r.cells.back().theta1;
  r.cells.push_back({CellKind::polar_cap, n == 2 ? cap : south, pi, 0.0, 2.0 * pi});
  r.zones.push_back({r.cells.back().theta0, pi, r.cells.size() - 1, 1});
  r.norm = partition_norm(r);
  return r;
}

/// Index of the cell containing x; boundary ties go to the lower index.
inline std::size_t locate(const Partition& r, const Point& x) {
  const SphericalCoords sc = to_spherical(x);
  for (const Zone& z : r.zones) {
    if (sc.theta > z.theta1) continue;
    if (z.count == 1) return z.first;
    const double width = 2.0 * std::numbers::pi / static_cast<double>(z.count);
    auto j = static_cast<std::size_t>(std::floor(sc.phi / width));
    if (j >= z.count) j = z.count - 1;
    if (j > 0 && sc.phi <= r.cells[z.first + j].phi0) --j;
    return z.first + j;
  }
  return r.cells.size() - 1;
}

inline std::vector<Point> cell_centers(const Partition& r) {
  std::vector<Point> pts;
  pts.reserve(r.size());
  for (const Cell& c : r.cells) pts.push_back(c.center());
  return pts;
}

}  // namespace ndf
