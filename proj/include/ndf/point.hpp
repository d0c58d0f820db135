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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ndf {

/// Dimension d of the sphere S^d embedded in R^{d+1}.
class SphereDim {
 public:
  explicit SphereDim(int d) : d_(d) {
    if (d < 1) throw std::invalid_argument("sphere dimension must be >= 1, got " + std::to_string(d));
  }
  int value() const { return d_; }
  std::size_t ambient() const { return static_cast<std::size_t>(d_) + 1; }
  friend bool operator==(SphereDim, SphereDim) = default;

 private:
  int d_;
};

using Vec = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

/// A unit vector in R^{d+1}. Construction normalizes; copies preserve the bits.
class Point {
 public:
  Point() = default;

  explicit Point(std::vector<double> coords) : x_(std::move(coords)) {
    if (x_.size() < 2) throw std::invalid_argument("a point needs at least 2 coordinates");
    const double n = norm(x_);
    if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("cannot normalize a zero or non-finite vector");
    // Vectors already unit to a few ulps keep their bits, so that normalizing
    // is idempotent and printed points read back exactly.
    if (std::abs(n - 1.0) > 4.0 * std::numeric_limits<double>::epsilon())
      for (double& v : x_) v /= n;
  }

  Point(std::initializer_list<double> coords) : Point(std::vector<double>(coords)) {}

  std::span<const double> coords() const { return x_; }
  const std::vector<double>& vec() const { return x_; }
  double operator[](std::size_t i) const { return x_[i]; }
  std::size_t ambient_dim() const { return x_.size(); }
  SphereDim sphere_dim() const { return SphereDim(static_cast<int>(x_.size()) - 1); }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::vector<double> x_;
};

inline double clamped_dot(const Point& a, const Point& b) {
  return std::clamp(dot(a.coords(), b.coords()), -1.0, 1.0);
}

/// Great-circle distance. Chord form stays accurate for nearby and antipodal pairs.
inline double geodesic_distance(const Point& a, const Point& b) {
  double chord2 = 0.0;
  for (std::size_t i = 0; i < a.ambient_dim(); ++i) {
    const double diff = a[i] - b[i];
    chord2 += diff * diff;
  }
  return 2.0 * std::asin(std::min(1.0, 0.5 * std::sqrt(chord2)));
}

/// Moves `p` along the tangent vector `v` and retracts back to the sphere.
inline Point retract(const Point& p, std::span<const double> v, double scale = 1.0) {
  std::vector<double> y(p.vec());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += scale * v[i];
  return Point(std::move(y));
}

/// Removes the component of `v` along the unit vector `x`.
inline void project_tangent(std::span<double> v, std::span<const double> x) {
  const double s = dot(v, x);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= s * x[i];
}

inline void check_same_sphere(const Point& a, const Point& b) {
  if (a.ambient_dim() != b.ambient_dim())
    throw std::invalid_argument("points live on spheres of different dimension (" +
                                std::to_string(a.ambient_dim()) + " vs " + std::to_string(b.ambient_dim()) +
                                " coordinates)");
}

inline void check_on_sphere(const Point& p, SphereDim d) {
  if (p.ambient_dim() != d.ambient())
    throw std::invalid_argument("point has " + std::to_string(p.ambient_dim()) + " coordinates, expected " +
                                std::to_string(d.ambient()));
}

/// Colatitude/longitude chart of S^2, theta in [0, pi], phi in [0, 2 pi).
inline Point from_spherical(double theta, double phi) {
  const double st = std::sin(theta);
  return Point({st * std::cos(phi), st * std::sin(phi), std::cos(theta)});
}

struct SphericalCoords {
  double theta;
  double phi;
};

inline SphericalCoords to_spherical(const Point& p) {
  if (p.ambient_dim() != 3) throw std::invalid_argument("spherical coordinates need a point on S^2");
  const double theta = std::acos(std::clamp(p[2], -1.0, 1.0));
  double phi = std::atan2(p[1], p[0]);
  if (phi < 0.0) phi += 2.0 * std::numbers::pi;
  if (phi >= 2.0 * std::numbers::pi) phi = 0.0;
  return {theta, phi};
}

/// Generalized spiral on S^2: n nearly uniform points, z descending from the
/// north pole, longitude advancing by the golden angle.
inline std::vector<Point> spiral_points(std::size_t n) {
  std::vector<Point> pts;
  pts.reserve(n);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t k = 0; k < n; ++k) {
    const double z = 1.0 - (2.0 * static_cast<double>(k) + 1.0) / static_cast<double>(n);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(k);
    pts.push_back(Point({r * std::cos(phi), r * std::sin(phi), z}));
  }
  return pts;
}

/// Seeded generator with a fixed draw sequence across standard libraries
/// (std distributions are implementation-defined, the engine is not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

  Point point_on_sphere(SphereDim d) {
    std::vector<double> v(d.ambient());
    for (;;) {
      for (double& x : v) x = normal();
      if (norm(v) > 1e-12) return Point(v);
    }
  }

  std::uint64_t next_seed() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Dense row-major orthogonal matrix.
class Rotation {
 public:
  explicit Rotation(std::size_t n) : n_(n), a_(n * n, 0.0) {
    for (std::size_t i = 0; i < n; ++i) a_[i * n + i] = 1.0;
  }

  /// Haar-distributed rotation: Gram-Schmidt on a Gaussian matrix.
  static Rotation random(std::size_t n, Rng& rng) {
    Rotation r(n);
    for (double& v : r.a_) v = rng.normal();
    for (std::size_t i = 0; i < n; ++i) {
      std::span<double> row(r.a_.data() + i * n, n);
      for (std::size_t j = 0; j < i; ++j) {
        std::span<const double> prev(r.a_.data() + j * n, n);
        const double s = dot(row, prev);
        for (std::size_t k = 0; k < n; ++k) row[k] -= s * prev[k];
      }
      const double nr = norm(row);
      for (double& v : row) v /= nr;
    }
    return r;
  }

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  std::vector<double> apply(std::span<const double> x) const {
    std::vector<double> y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) y[i] += a_[i * n_ + j] * x[j];
    return y;
  }

  Point apply(const Point& p) const { return Point(apply(p.coords())); }

  std::vector<Point> apply(std::span<const Point> pts) const {
    std::vector<Point> out;
    out.reserve(pts.size());
    for (const Point& p : pts) out.push_back(apply(p));
    return out;
  }

 private:
  std::size_t n_;
  std::vector<double> a_;
};

}  // namespace ndf
