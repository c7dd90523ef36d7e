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

// Finite metric spaces and the pair sets that generate them by geodesic
// concatenation.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "curvlab/chain.hpp"

namespace curvlab {

namespace tol {
inline constexpr double kMetric = 1e-12;
}  // namespace tol

using StatePair = std::pair<std::size_t, std::size_t>;

class MetricSpace {
 public:
  /// Validates symmetry, zero diagonal, positivity off the diagonal and the
  /// triangle inequality (relative tolerance 1e-12).
  MetricSpace(StateSpace space, Matrix dist)
      : space_(std::move(space)), dist_(std::move(dist)) {
    validate(/*check_triangle=*/true);
  }

  /// For distance matrices that are shortest-path closures or otherwise
  /// metric by construction; skips the cubic triangle check.
  struct TrustedTag {};
  MetricSpace(StateSpace space, Matrix dist, TrustedTag)
      : space_(std::move(space)), dist_(std::move(dist)) {
    validate(/*check_triangle=*/false);
  }

  const StateSpace& space() const { return space_; }
  const Matrix& dist() const { return dist_; }
  double operator()(std::size_t x, std::size_t y) const { return dist_(x, y); }
  std::size_t size() const { return space_.size(); }

 private:
  void validate(bool check_triangle) {
    const std::size_t n = space_.size();
    detail::require_square(dist_, n, "distance matrix");
    for (std::size_t x = 0; x < n; ++x) {
      require(dist_(x, x) == 0.0, Errc::kNotMetric,
              "d(" + space_.label(x) + "," + space_.label(x) + ") != 0");
      for (std::size_t y = x + 1; y < n; ++y) {
        const double a = dist_(x, y);
        require(std::isfinite(a) && a > 0.0, Errc::kNotMetric,
                "d(" + space_.label(x) + "," + space_.label(y) +
                    ") must be positive and finite");
        require(a == dist_(y, x), Errc::kNotMetric,
                "distance is not symmetric at (" + space_.label(x) + "," +
                    space_.label(y) + ")");
      }
    }
    if (!check_triangle) return;
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        for (std::size_t z = 0; z < n; ++z) {
          const double via = dist_(x, z) + dist_(z, y);
          require(dist_(x, y) <= via + tol::kMetric * std::max(1.0, via),
                  Errc::kNotMetric,
                  "triangle inequality fails for (" + space_.label(x) + "," +
                      space_.label(z) + "," + space_.label(y) + ")");
        }
      }
    }
  }

  StateSpace space_;
  Matrix dist_;
};

/// Pairs whose geodesic concatenations are meant to reproduce a metric.
/// Only membership is enforced here; use verify_generating() for the
/// generating property itself.
class GeneratingSet {
 public:
  GeneratingSet() = default;
  explicit GeneratingSet(std::vector<StatePair> pairs)
      : pairs_(std::move(pairs)) {
    for (const auto& [x, y] : pairs_) {
      require(x != y, Errc::kInvalidArgument,
              "generating pairs must join distinct states");
    }
  }

  /// Every unordered pair {x, y} with x < y.
  static GeneratingSet all_pairs(std::size_t n) {
    std::vector<StatePair> pairs;
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = x + 1; y < n; ++y) pairs.emplace_back(x, y);
    }
    return GeneratingSet(std::move(pairs));
  }

  /// Pairs at distance exactly `radius` (within tolerance), x < y.
  static GeneratingSet at_distance(const MetricSpace& d, double radius) {
    std::vector<StatePair> pairs;
    for (std::size_t x = 0; x < d.size(); ++x) {
      for (std::size_t y = x + 1; y < d.size(); ++y) {
        if (std::abs(d(x, y) - radius) <= tol::kMetric * std::max(1.0, radius))
          pairs.emplace_back(x, y);
      }
    }
    return GeneratingSet(std::move(pairs));
  }

  const std::vector<StatePair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }

 private:
  std::vector<StatePair> pairs_;
};

struct WeightedPair {
  std::size_t x;
  std::size_t y;
  double weight;
};

namespace detail {

inline void floyd_warshall(Matrix& d) {
  const Eigen::Index n = d.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double dik = d(i, k);
      if (!std::isfinite(dik)) continue;
      for (Eigen::Index j = 0; j < n; ++j) {
        const double via = dik + d(k, j);
        if (via < d(i, j)) d(i, j) = via;
      }
    }
  }
}

inline bool all_finite(const Matrix& d) {
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (!std::isfinite(d.data()[i])) return false;
  }
  return true;
}

}  // namespace detail

/// The 0/1 metric d(x, y) = 1 for x != y.
inline MetricSpace trivial_metric(const StateSpace& space) {
  const auto n = static_cast<Eigen::Index>(space.size());
  Matrix d = Matrix::Ones(n, n);
  d.diagonal().setZero();
  return MetricSpace(space, std::move(d), MetricSpace::TrustedTag{});
}

/// Shortest-path distance in the undirected support graph of P
/// (x ~ y iff P(x, y) > 0 or P(y, x) > 0), unit edge weights. The directed
/// quantity min{n : P^n(x, y) > 0} can be asymmetric for non-reversible P and
/// is therefore not offered.
inline MetricSpace combinatorial_distance(const StochasticMatrix& p) {
  const std::size_t n = p.size();
  const double inf = std::numeric_limits<double>::infinity();
  Matrix d = Matrix::Constant(n, n, inf);
  for (std::size_t s = 0; s < n; ++s) {
    d(s, s) = 0.0;
    std::deque<std::size_t> queue{s};
    while (!queue.empty()) {
      const std::size_t x = queue.front();
      queue.pop_front();
      for (std::size_t y = 0; y < n; ++y) {
        if (y == x || std::isfinite(d(s, y))) continue;
        if (p(x, y) > 0.0 || p(y, x) > 0.0) {
          d(s, y) = d(s, x) + 1.0;
          queue.push_back(y);
        }
      }
    }
  }
  require(detail::all_finite(d), Errc::kNotConnected,
          "support graph is not connected");
  return MetricSpace(p.space(), std::move(d), MetricSpace::TrustedTag{});
}

/// Shortest-path closure of weighted undirected edges; the edges themselves
/// become the generating set.
inline std::pair<MetricSpace, GeneratingSet> closure_from_pairs(
    const StateSpace& space, const std::vector<WeightedPair>& edges) {
  const std::size_t n = space.size();
  const double inf = std::numeric_limits<double>::infinity();
  Matrix d = Matrix::Constant(n, n, inf);
  d.diagonal().setZero();
  std::vector<StatePair> pairs;
  pairs.reserve(edges.size());
  for (const auto& e : edges) {
    require(e.x < n && e.y < n, Errc::kDimensionMismatch,
            "edge endpoint out of range");
    require(e.x != e.y, Errc::kInvalidArgument, "edge joins a state to itself");
    require(std::isfinite(e.weight) && e.weight > 0.0,
            Errc::kNonpositiveWeight, "edge weights must be positive");
    d(e.x, e.y) = std::min(d(e.x, e.y), e.weight);
    d(e.y, e.x) = d(e.x, e.y);
    pairs.emplace_back(e.x, e.y);
  }
  detail::floyd_warshall(d);
  require(detail::all_finite(d), Errc::kNotConnected,
          "weighted pairs do not connect the state space");
  // Symmetrize away round-off from the relaxation order.
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      const double v = std::min(d(x, y), d(y, x));
      d(x, y) = v;
      d(y, x) = v;
    }
  }
  return {MetricSpace(space, std::move(d), MetricSpace::TrustedTag{}),
          GeneratingSet(std::move(pairs))};
}

/// True iff the shortest-path metric over the edges of S, weighted by d,
/// reproduces d within 1e-12.
inline bool verify_generating(const MetricSpace& d, const GeneratingSet& s) {
  const std::size_t n = d.size();
  const double inf = std::numeric_limits<double>::infinity();
  Matrix g = Matrix::Constant(n, n, inf);
  g.diagonal().setZero();
  for (const auto& [x, y] : s.pairs()) {
    if (x >= n || y >= n || x == y) return false;
    g(x, y) = d(x, y);
    g(y, x) = d(x, y);
  }
  detail::floyd_warshall(g);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (std::abs(g(x, y) - d(x, y)) > tol::kMetric * std::max(1.0, d(x, y)))
        return false;
    }
  }
  return true;
}

}  // namespace curvlab
