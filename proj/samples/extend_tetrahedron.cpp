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

// Grows the regular tetrahedron (a 2-design) into a 3-design that keeps its
// four vertices, then prints the certificate of the union.

#include <cstdio>

#include "ndf/ndf.hpp"

int main() {
  const ndf::SphereDim d(2);
  const std::vector<ndf::Point> fixed = ndf::tetrahedron();

  ndf::ExtendOptions opt;
  opt.init_strategy = ndf::InitStrategy::random;
  opt.seed = 7;
  const ndf::ExtendResult r = ndf::extend_design(3, fixed, 8, d, opt);

  std::printf("converged=%d free=%zu residual=%.3e max_moment_error=%.3e\n", r.converged, r.free_points.size(),
              r.certificate.normalized_residual, r.certificate.oracle_max_deviation.value_or(-1.0));
  for (const ndf::Point& p : r.free_points) std::printf("% .12f % .12f % .12f\n", p[0], p[1], p[2]);
  return r.converged ? 0 : 1;
}
