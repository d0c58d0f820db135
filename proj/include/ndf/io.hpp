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

// Point-set text files: a header "# dim <d> count <n> [degree <t>]" followed by
// n rows of d+1 coordinates printed with 17 significant digits.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ndf/point.hpp"

namespace ndf {

/// Malformed input; carries the 1-based line number when one applies.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct PointSetFile {
  int dim = 2;
  std::vector<Point> points;
  std::optional<int> degree;
  /// Largest |1 - |row|| seen while loading (rows are renormalized).
  double max_correction = 0.0;
};

/// Rows further than this from unit norm are rejected.
inline constexpr double kUnitTolerance = 1e-9;

inline PointSetFile read_point_set(std::istream& in, const std::string& source = "<input>") {
  PointSetFile f;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  std::size_t count = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    if (!have_header) {
      std::string hash, key;
      ss >> hash;
      if (hash != "#") throw FormatError(source, lineno, "expected header '# dim <d> count <n> [degree <t>]'");
      long long dim = -1, n = -1, degree = -1;
      while (ss >> key) {
        long long v = 0;
        if (!(ss >> v)) throw FormatError(source, lineno, "header key '" + key + "' has no integer value");
        if (key == "dim")
          dim = v;
        else if (key == "count")
          n = v;
        else if (key == "degree")
          degree = v;
        else
          throw FormatError(source, lineno, "unknown header key '" + key + "'");
      }
      if (dim < 1) throw FormatError(source, lineno, "header needs 'dim' >= 1");
      if (n < 0) throw FormatError(source, lineno, "header needs 'count' >= 0");
      if (degree == 0 || degree < -1) throw FormatError(source, lineno, "'degree' must be >= 1");
      f.dim = static_cast<int>(dim);
      count = static_cast<std::size_t>(n);
      if (degree > 0) f.degree = static_cast<int>(degree);
      have_header = true;
      continue;
    }
    if (f.points.size() == count)
      throw FormatError(source, lineno, "more rows than the declared count " + std::to_string(count));
    std::vector<double> row;
    std::string tok;
    while (ss >> tok) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || !std::isfinite(v)) throw FormatError(source, lineno, "not a number: '" + tok + "'");
      row.push_back(v);
    }
    if (row.size() != static_cast<std::size_t>(f.dim) + 1)
      throw FormatError(source, lineno,
                        "expected " + std::to_string(f.dim + 1) + " coordinates, got " + std::to_string(row.size()));
    const double n = norm(row);
    if (!(std::abs(n - 1.0) <= kUnitTolerance))
      throw FormatError(source, lineno, "row is not unit norm (|x| = " + std::to_string(n) + ")");
    f.max_correction = std::max(f.max_correction, std::abs(n - 1.0));
    f.points.emplace_back(std::move(row));
  }
  if (!have_header) throw FormatError(source, lineno, "empty file, missing header");
  if (f.points.size() != count)
    throw FormatError(source, lineno,
                      "declared " + std::to_string(count) + " points, found " + std::to_string(f.points.size()));
  return f;
}

inline PointSetFile read_point_set_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path, 0, "cannot open file");
  return read_point_set(in, path);
}

inline void write_point_set(std::ostream& os, int dim, std::span<const Point> pts, std::optional<int> degree = {}) {
  os << "# dim " << dim << " count " << pts.size();
  if (degree) os << " degree " << *degree;
  os << '\n';
  char buf[32];
  for (const Point& p : pts) {
    if (p.ambient_dim() != static_cast<std::size_t>(dim) + 1)
      throw std::invalid_argument("point dimension does not match the file dimension");
    for (std::size_t i = 0; i < p.ambient_dim(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", p[i]);
      if (i) os << ' ';
      os << buf;
    }
    os << '\n';
  }
}

/// Writes through a temporary file in the same directory and renames it into place.
inline void write_file_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

inline void write_point_set_file(const std::string& path, int dim, std::span<const Point> pts,
                                 std::optional<int> degree = {}) {
  std::ostringstream os;
  write_point_set(os, dim, pts, degree);
  write_file_atomic(path, os.str());
}

}  // namespace ndf
