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

// Exact optimal transport on finite metric spaces and the curvature
// quantities built on it.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "curvlab/chain.hpp"
#include "curvlab/metric.hpp"
#include "curvlab/transport/max_flow.hpp"
#include "curvlab/transport/network_simplex.hpp"

namespace curvlab {

namespace tol {
inline constexpr double kMarginal = 1e-10;
inline constexpr double kFlow = 1e-10;
inline constexpr double kAllowedCell = 1e-12;
}  // namespace tol

/// Joint law on X x X with prescribed marginals.
class Coupling {
 public:
  Coupling(Matrix joint, ProbabilityVector left, ProbabilityVector right)
      : joint_(std::move(joint)), left_(std::move(left)),
        right_(std::move(right)) {
    const auto m = static_cast<Eigen::Index>(left_.size());
    const auto n = static_cast<Eigen::Index>(right_.size());
    require(joint_.rows() == m && joint_.cols() == n,
            Errc::kDimensionMismatch, "coupling shape mismatch");
    require(joint_.minCoeff() >= 0.0, Errc::kInvariantViolation,
            "coupling has a negative cell");
    const double row_err =
        (joint_.rowwise().sum() - left_.weights()).cwiseAbs().maxCoeff();
    const double col_err =
        (joint_.colwise().sum().transpose() - right_.weights())
            .cwiseAbs()
            .maxCoeff();
    require(row_err <= tol::kMarginal && col_err <= tol::kMarginal,
            Errc::kInvariantViolation, "coupling marginals are off");
  }

  const Matrix& joint() const { return joint_; }
  const ProbabilityVector& left() const { return left_; }
  const ProbabilityVector& right() const { return right_; }

  /// E[d(X, Y)] under this coupling.
  double expected_distance(const MetricSpace& d) const {
    return joint_.cwiseProduct(d.dist()).sum();
  }

 private:
  Matrix joint_;
  ProbabilityVector left_;
  ProbabilityVector right_;
};

struct WassersteinResult {
  double value = 0.0;
  Coupling plan;
  Vector potential_left;   // Kantorovich potentials, u(x) + v(y) <= d(x, y)
  Vector potential_right;
};

inline WassersteinResult wasserstein(const ProbabilityVector& mu,
                                     const ProbabilityVector& nu,
                                     const MetricSpace& d) {
  require(mu.space() == d.space() && nu.space() == d.space(),
          Errc::kDimensionMismatch,
          "measures and metric live on different state spaces");
  TransportSolution sol =
      solve_transportation(mu.weights(), nu.weights(), d.dist());
  return {sol.cost, Coupling(std::move(sol.plan), mu, nu),
          std::move(sol.row_dual), std::move(sol.col_dual)};
}

/// Total variation sum_x (mu(x) - nu(x))_+, equal to W under the 0/1 metric.
inline double total_variation(const Vector& mu, const Vector& nu) {
  return (mu - nu).cwiseMax(0.0).sum();
}

struct PairContraction {
  std::size_t x;
  std::size_t y;
  double factor;  // W(P(x,.), P(y,.)) / d(x, y)
};

struct CurvatureReport {
  double kappa = 0.0;
  std::vector<PairContraction> per_pair;
  GeneratingSet generating_set;

  const PairContraction& worst() const {
    return *std::max_element(
        per_pair.begin(), per_pair.end(),
        [](const auto& a, const auto& b) { return a.factor < b.factor; });
  }
};

/// kappa = 1 - max over (x, y) in S of W(P(x,.), P(y,.)) / d(x, y).
/// S must generate d (see verify_generating); the value may be negative.
inline CurvatureReport ollivier_curvature(const StochasticMatrix& p,
                                          const MetricSpace& d,
                                          const GeneratingSet& s) {
  require(!s.empty(), Errc::kEmptyGeneratingSet, "generating set is empty");
  require(p.space() == d.space(), Errc::kDimensionMismatch,
          "kernel and metric live on different state spaces");
  CurvatureReport report;
  report.generating_set = s;
  report.per_pair.reserve(s.size());
  double worst = 0.0;
  for (const auto& [x, y] : s.pairs()) {
    require(x < p.size() && y < p.size(), Errc::kDimensionMismatch,
            "generating pair out of range");
    const double w =
        solve_transportation(p.entries().row(x).transpose(),
                             p.entries().row(y).transpose(), d.dist())
            .cost;
    const double factor = std::max(0.0, w) / d(x, y);
    report.per_pair.push_back({x, y, factor});
    worst = std::max(worst, factor);
  }
  report.kappa = 1.0 - worst;
  return report;
}

inline CurvatureReport ollivier_curvature(const StochasticMatrix& p,
                                          const MetricSpace& d) {
  return ollivier_curvature(p, d, GeneratingSet::all_pairs(p.size()));
}

struct SectionalWitness {
  StatePair pair;
  Coupling coupling;
};

struct SectionalCertificate {
  bool holds = true;
  std::vector<SectionalWitness> witnesses;
  std::optional<StatePair> failing_pair;
  double failing_flow = 1.0;  // max-flow value at the failing pair
};

namespace detail {

/// Max-flow of the bipartite network whose middle arcs are the cells
/// {(u, v) : d(u, v) <= radius + 1e-12}; returns flow value and joint.
inline std::pair<double, Matrix> distance_capped_flow(const Vector& left,
                                                      const Vector& right,
                                                      const MetricSpace& d,
                                                      double radius) {
  const std::size_t n = d.size();
  const std::size_t source = 2 * n;
  const std::size_t sink = 2 * n + 1;
  MaxFlow net(2 * n + 2);
  for (std::size_t u = 0; u < n; ++u) {
    if (left[u] > 0.0) net.add_arc(source, u, left[u]);
    if (right[u] > 0.0) net.add_arc(n + u, sink, right[u]);
  }
  std::vector<std::pair<StatePair, int>> middle;
  for (std::size_t u = 0; u < n; ++u) {
    if (left[u] <= 0.0) continue;
    for (std::size_t v = 0; v < n; ++v) {
      if (right[v] <= 0.0) continue;
      if (d(u, v) <= radius + tol::kAllowedCell) {
        middle.push_back({{u, v}, net.add_arc(u, n + v, 2.0)});
      }
    }
  }
  const double value = net.solve(source, sink);
  Matrix joint = Matrix::Zero(n, n);
  for (const auto& [cell, arc] : middle) {
    joint(cell.first, cell.second) = net.flow(arc);
  }
  return {value, std::move(joint)};
}

}  // namespace detail

/// Decides, for each (x, y) in S, whether P*(x,.) and P*(y,.) admit a
/// coupling supported on {d(u, v) <= d(x, y)}. By the gluing lemma,
/// feasibility on a generating set certifies it for every pair. Stops at
/// the first infeasible pair.
inline SectionalCertificate sectional_feasible(const StochasticMatrix& pstar,
                                               const MetricSpace& d,
                                               const GeneratingSet& s) {
  require(pstar.space() == d.space(), Errc::kDimensionMismatch,
          "kernel and metric live on different state spaces");
  SectionalCertificate cert;
  cert.witnesses.reserve(s.size());
  for (const auto& [x, y] : s.pairs()) {
    const Vector left = pstar.entries().row(x).transpose();
    const Vector right = pstar.entries().row(y).transpose();
    auto [value, joint] = detail::distance_capped_flow(left, right, d, d(x, y));
    if (value < 1.0 - tol::kFlow) {
      cert.holds = false;
      cert.failing_pair = StatePair{x, y};
      cert.failing_flow = value;
      return cert;
    }
    cert.witnesses.push_back(
        {{x, y}, Coupling(std::move(joint), pstar.row(x), pstar.row(y))});
  }
  return cert;
}

/// max over x != y of |f(x) - f(y)| / d(x, y); 0 on a single point.
inline double lipschitz(const Vector& f, const MetricSpace& d) {
  require(f.size() == static_cast<Eigen::Index>(d.size()),
          Errc::kDimensionMismatch, "function length mismatch");
  double best = 0.0;
  for (std::size_t x = 0; x < d.size(); ++x) {
    for (std::size_t y = x + 1; y < d.size(); ++y) {
      best = std::max(best, std::abs(f[x] - f[y]) / d(x, y));
    }
  }
  return best;
}

}  // namespace curvlab
