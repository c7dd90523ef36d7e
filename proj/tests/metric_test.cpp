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

#include <cmath>
#include <cstdlib>
#include <deque>

#include <gtest/gtest.h>

#include "curvlab/metric.hpp"
#include "support/generators.hpp"

namespace curvlab {
namespace {

TEST(TrivialMetric, Values) {
  const auto d1 = trivial_metric(StateSpace::indexed(1));
  EXPECT_EQ(d1(0, 0), 0.0);
  const auto d3 = trivial_metric(StateSpace::indexed(3));
  for (std::size_t x = 0; x < 3; ++x) {
    for (std::size_t y = 0; y < 3; ++y) EXPECT_EQ(d3(x, y), x == y ? 0.0 : 1.0);
  }
}

TEST(MetricSpace, RejectsNonMetrics) {
  Matrix d(3, 3);
  d << 0, 1, 5, 1, 0, 1, 5, 1, 0;  // triangle fails
  EXPECT_THROW(MetricSpace(StateSpace::indexed(3), d), Error);
  d << 0, 1, 2, 1, 0, 1, 2, 0.5, 0;  // asymmetric
  EXPECT_THROW(MetricSpace(StateSpace::indexed(3), d), Error);
  d << 0, 0, 1, 0, 0, 1, 1, 1, 0;  // zero off the diagonal
  EXPECT_THROW(MetricSpace(StateSpace::indexed(3), d), Error);
}

StochasticMatrix cycle_walk(std::size_t n) {
  Matrix p = Matrix::Zero(n, n);
  for (std::size_t x = 0; x < n; ++x) {
    p(x, (x + 1) % n) = 0.5;
    p(x, (x + n - 1) % n) = 0.5;
  }
  return StochasticMatrix(StateSpace::indexed(n), p);
}

TEST(CombinatorialDistance, CompletePathAndCycle) {
  Matrix full = Matrix::Constant(3, 3, 1.0 / 3.0);
  const auto dc = combinatorial_distance(StochasticMatrix(StateSpace::indexed(3), full));
  EXPECT_EQ(dc(0, 1), 1.0);
  EXPECT_EQ(dc(1, 2), 1.0);

  Matrix path = Matrix::Zero(4, 4);
  path(0, 1) = 1.0;
  path(1, 0) = path(1, 2) = 0.5;
  path(2, 1) = path(2, 3) = 0.5;
  path(3, 2) = 1.0;
  EXPECT_EQ(combinatorial_distance(StochasticMatrix(StateSpace::indexed(4), path))(0, 3), 3.0);

  // Breadth-first search from every vertex of the 6-cycle.
  const auto d6 = combinatorial_distance(cycle_walk(6));
  for (std::size_t s = 0; s < 6; ++s) {
    std::vector<int> dist(6, -1);
    std::deque<std::size_t> queue{s};
    dist[s] = 0;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t v : {(u + 1) % 6, (u + 5) % 6}) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
      }
    }
    for (std::size_t t = 0; t < 6; ++t) EXPECT_EQ(d6(s, t), dist[t]);
  }
}

TEST(ClosureFromPairs, PathPairAndShortcut) {
  const auto [path, s] = closure_from_pairs(StateSpace::indexed(4),
                                            {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}});
  EXPECT_EQ(path(0, 3), 3.0);
  EXPECT_EQ(s.size(), 3u);
  const auto [single, s1] = closure_from_pairs(StateSpace::indexed(2), {{0, 1, 2.5}});
  EXPECT_EQ(single(0, 1), 2.5);
  const auto [tri, s2] =
      closure_from_pairs(StateSpace::indexed(3), {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 3.0}});
  EXPECT_EQ(tri(0, 2), 2.0);
  EXPECT_THROW(closure_from_pairs(StateSpace::indexed(3), {{0, 1, 1.0}}), Error);
}

TEST(VerifyGenerating, Examples) {
  const auto d3 = trivial_metric(StateSpace::indexed(3));
  EXPECT_TRUE(verify_generating(d3, GeneratingSet::all_pairs(3)));

  Matrix h(4, 4);  // Hamming on {0,1}^2: 00, 01, 10, 11
  h << 0, 1, 1, 2, 1, 0, 2, 1, 1, 2, 0, 1, 2, 1, 1, 0;
  const MetricSpace ham(StateSpace({"00", "01", "10", "11"}), h);
  EXPECT_TRUE(verify_generating(ham, GeneratingSet::at_distance(ham, 1.0)));

  Matrix p(3, 3);
  p << 0, 1, 2, 1, 0, 1, 2, 1, 0;
  const MetricSpace line(StateSpace::indexed(3), p);
  EXPECT_FALSE(verify_generating(line, GeneratingSet({{0, 2}})));
  EXPECT_TRUE(verify_generating(line, GeneratingSet({{0, 1}, {1, 2}})));
}

TEST(VerifyGenerating, AllPairsAlwaysGenerateRandomMetrics) {
  testing::Rng rng(21);
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 2 + k % 5;
    const auto d = testing::random_metric(rng, StateSpace::indexed(n));
    EXPECT_TRUE(verify_generating(d, GeneratingSet::all_pairs(n)));
  }
}

}  // namespace
}  // namespace curvlab
