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

// Random chains, metrics and measures for property tests.

#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "curvlab/chain.hpp"
#include "curvlab/metric.hpp"

namespace curvlab::testing {

using Rng = std::mt19937_64;

inline Vector dirichlet(Rng& rng, Eigen::Index n, double shape = 1.0) {
  std::gamma_distribution<double> gamma(shape, 1.0);
  Vector w(n);
  for (Eigen::Index i = 0; i < n; ++i) w[i] = gamma(rng) + 1e-300;
  return w / w.sum();
}

/// Mixture of sparse and spread laws, including near-Dirac ones.
inline ProbabilityVector random_measure(Rng& rng, const StateSpace& space) {
  const auto n = static_cast<Eigen::Index>(space.size());
  std::uniform_int_distribution<int> kind(0, 3);
  Vector w;
  switch (kind(rng)) {
    case 0: w = dirichlet(rng, n, 0.2); break;
    case 1: w = dirichlet(rng, n, 1.0); break;
    case 2: w = dirichlet(rng, n, 5.0); break;
    default: {
      w = Vector::Zero(n);
      w[std::uniform_int_distribution<Eigen::Index>(0, n - 1)(rng)] = 1.0;
    }
  }
  return ProbabilityVector(space, w);
}

/// Irreducible kernel: a random cycle through all states keeps it strongly
/// connected; the remaining mass is Dirichlet with random sparsity.
inline StochasticMatrix random_kernel(Rng& rng, std::size_t n) {
  const auto m = static_cast<Eigen::Index>(n);
  std::vector<Eigen::Index> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<Eigen::Index>(i);
  std::shuffle(order.begin(), order.end(), rng);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix p = Matrix::Zero(m, m);
  for (Eigen::Index x = 0; x < m; ++x) {
    Vector row = dirichlet(rng, m, 0.5);
    for (Eigen::Index y = 0; y < m; ++y) {
      if (u(rng) < 0.3) row[y] = 0.0;
    }
    p.row(x) = row.transpose();
  }
  for (std::size_t k = 0; k < n; ++k) {
    p(order[k], order[(k + 1) % n]) += 0.1 + u(rng);
  }
  for (Eigen::Index x = 0; x < m; ++x) p.row(x) /= p.row(x).sum();
  return StochasticMatrix(StateSpace::indexed(n), std::move(p));
}

inline Generator random_generator(Rng& rng, std::size_t n) {
  const StochasticMatrix p = random_kernel(rng, n);
  std::uniform_real_distribution<double> scale(0.2, 3.0);
  Matrix rates = scale(rng) * p.entries();
  rates.diagonal().setZero();
  for (Eigen::Index x = 0; x < rates.rows(); ++x) {
    rates(x, x) = -rates.row(x).sum();
  }
  return Generator(p.space(), std::move(rates));
}

/// Shortest-path closure of random positive weights on the complete graph.
inline MetricSpace random_metric(Rng& rng, const StateSpace& space) {
  const std::size_t n = space.size();
  std::uniform_real_distribution<double> w(0.5, 3.0);
  std::vector<WeightedPair> edges;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) edges.push_back({x, y, w(rng)});
  }
  return closure_from_pairs(space, edges).first;
}

/// 1-D positions 0 = s_0 < s_1 < ... on the line, |s_x - s_y|.
inline MetricSpace random_line_metric(Rng& rng, const StateSpace& space,
                                      std::vector<double>* positions = nullptr) {
  const std::size_t n = space.size();
  std::uniform_real_distribution<double> gap(0.2, 2.0);
  std::vector<double> s(n, 0.0);
  for (std::size_t x = 1; x < n; ++x) s[x] = s[x - 1] + gap(rng);
  Matrix d(n, n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) d(x, y) = std::abs(s[x] - s[y]);
  }
  if (positions != nullptr) *positions = s;
  return MetricSpace(space, std::move(d));
}

}  // namespace curvlab::testing
