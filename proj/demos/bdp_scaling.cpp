// Copyright 2026 The curvlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Unit-rate birth-death chains on {1, ..., n}: the time at which the worst
// expected gap m(t) falls to 1/2, next to n^2.

#include <cstdio>

#include "curvlab/curvlab.hpp"

int main() {
  using namespace curvlab;
  std::printf("%6s %12s %10s %12s\n", "n", "t(m=1/2)", "t/n^2", "hit(t)");
  for (std::size_t n : {6, 10, 20, 40}) {
    const auto spec = models::unit_rate_bdp(n);
    auto m_at = [&](double t) { return models::bdp_m_curve(spec, {t}).m[0]; };
    double lo = 0.0;
    double hi = 10.0 * static_cast<double>(n * n);
    for (int it = 0; it < 50; ++it) {
      const double mid = 0.5 * (lo + hi);
      (m_at(mid) > 0.5 ? lo : hi) = mid;
    }
    const double t = 0.5 * (lo + hi);
    const double hit = models::bdp_m_curve(spec, {t}).hitting_bound[0];
    std::printf("%6zu %12.4f %10.5f %12.6f\n", n, t, t / static_cast<double>(n * n), hit);
  }
  return 0;
}
