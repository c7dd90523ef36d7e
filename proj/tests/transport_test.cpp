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

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "curvlab/transport.hpp"
#include "support/generators.hpp"

namespace curvlab {
namespace {

ProbabilityVector law(const StateSpace& s, std::initializer_list<double> w) {
  Vector v(static_cast<Eigen::Index>(w.size()));
  Eigen::Index i = 0;
  for (double x : w) v[i++] = x;
  return ProbabilityVector(s, v);
}

/// Random 1-Lipschitz function: min over anchors of a_k + d(x_k, .).
Vector mcshane(testing::Rng& rng, const MetricSpace& d) {
  const auto n = static_cast<Eigen::Index>(d.size());
  std::uniform_real_distribution<double> u(0.0, 3.0);
  Vector f = Vector::Constant(n, std::numeric_limits<double>::infinity());
  for (Eigen::Index k = 0; k < n; ++k) {
    const double a = u(rng);
    for (Eigen::Index x = 0; x < n; ++x) f[x] = std::min(f[x], a + d(k, x));
  }
  return f;
}

TEST(Wasserstein, BasicValues) {
  const auto s = StateSpace::indexed(3);
  const auto d = trivial_metric(s);
  const auto mu = law(s, {0.2, 0.3, 0.5});
  const auto same = wasserstein(mu, mu, d);
  EXPECT_NEAR(same.value, 0.0, 1e-15);
  EXPECT_NEAR((same.plan.joint() - Matrix(mu.weights().asDiagonal())).cwiseAbs().maxCoeff(),
              0.0, 1e-15);

  Matrix line(3, 3);
  line << 0, 1, 3, 1, 0, 2, 3, 2, 0;
  const MetricSpace dl(s, line);
  EXPECT_NEAR(wasserstein(ProbabilityVector::dirac(s, 0), ProbabilityVector::dirac(s, 2), dl).value,
              3.0, 1e-15);

  const auto s2 = StateSpace::indexed(2);
  EXPECT_NEAR(wasserstein(law(s2, {0.7, 0.3}), law(s2, {0.4, 0.6}), trivial_metric(s2)).value,
              0.3, 1e-15);
}

TEST(Wasserstein, TrivialMetricEqualsTotalVariation) {
  testing::Rng rng(31);
  for (int k = 0; k < 300; ++k) {
    const auto s = StateSpace::indexed(2 + k % 7);
    const auto mu = testing::random_measure(rng, s);
    const auto nu = testing::random_measure(rng, s);
    EXPECT_NEAR(wasserstein(mu, nu, trivial_metric(s)).value,
                0.5 * (mu.weights() - nu.weights()).cwiseAbs().sum(), 1e-12);
  }
}

TEST(Wasserstein, LineMetricMatchesCdfFormula) {
  testing::Rng rng(32);
  for (int k = 0; k < 300; ++k) {
    const auto s = StateSpace::indexed(2 + k % 7);
    std::vector<double> pos;
    const auto d = testing::random_line_metric(rng, s, &pos);
    const auto mu = testing::random_measure(rng, s);
    const auto nu = testing::random_measure(rng, s);
    double oracle = 0.0;
    double cdf = 0.0;
    for (std::size_t x = 0; x + 1 < s.size(); ++x) {
      cdf += mu.weights()[x] - nu.weights()[x];
      oracle += std::abs(cdf) * (pos[x + 1] - pos[x]);
    }
    EXPECT_NEAR(wasserstein(mu, nu, d).value, oracle, 1e-11);
  }
}

TEST(Wasserstein, StrongDualityAndLipschitzLowerBound) {
  testing::Rng rng(33);
  for (int k = 0; k < 300; ++k) {
    const auto s = StateSpace::indexed(2 + k % 6);
    const auto d = testing::random_metric(rng, s);
    const auto mu = testing::random_measure(rng, s);
    const auto nu = testing::random_measure(rng, s);
    const auto w = wasserstein(mu, nu, d);
    EXPECT_NEAR(w.plan.expected_distance(d), w.value, 1e-11);
    const double dual = w.potential_left.dot(mu.weights()) + w.potential_right.dot(nu.weights());
    EXPECT_NEAR(dual, w.value, 1e-10);
    for (std::size_t x = 0; x < s.size(); ++x) {
      for (std::size_t y = 0; y < s.size(); ++y) {
        EXPECT_LE(w.potential_left[x] + w.potential_right[y], d(x, y) + 1e-10);
      }
    }
    const Vector f = mcshane(rng, d);
    ASSERT_LE(lipschitz(f, d), 1.0 + 1e-12);
    EXPECT_LE(f.dot(mu.weights() - nu.weights()), w.value + 1e-10);
  }
}

TEST(Curvature, ClosedForms) {
  const auto s = StateSpace::indexed(3);
  const auto pi = law(s, {0.2, 0.3, 0.5});
  Matrix line(3, 3);
  line << 0, 1, 3, 1, 0, 2, 3, 2, 0;
  const MetricSpace dl(s, line);
  EXPECT_NEAR(ollivier_curvature(StochasticMatrix::rank_one(pi), dl).kappa, 1.0, 1e-15);
  EXPECT_NEAR(ollivier_curvature(StochasticMatrix::identity(s), dl).kappa, 0.0, 1e-15);

  Matrix p2(2, 2);
  p2 << 0.75, 0.25, 0.25, 0.75;
  const StochasticMatrix two(StateSpace::indexed(2), p2);
  const auto rep = ollivier_curvature(two, trivial_metric(two.space()));
  EXPECT_NEAR(rep.kappa, 0.5, 1e-15);
  EXPECT_EQ(rep.worst().x, 0u);
  EXPECT_EQ(rep.worst().y, 1u);
}

TEST(Curvature, GeneratingSetReductionMatchesAllPairs) {
  testing::Rng rng(34);
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 3 + k % 4;
    const auto p = testing::random_kernel(rng, n);
    std::vector<WeightedPair> edges;
    std::uniform_real_distribution<double> w(0.5, 2.0);
    for (std::size_t x = 0; x + 1 < n; ++x) edges.push_back({x, x + 1, w(rng)});
    edges.push_back({0, n - 1, w(rng)});
    const auto [d, gen] = closure_from_pairs(p.space(), edges);
    const double full = ollivier_curvature(p, d).kappa;
    EXPECT_NEAR(ollivier_curvature(p, d, gen).kappa, full, 1e-10);
  }
}

TEST(Curvature, EmptyGeneratingSetIsRejected) {
  const auto p = StochasticMatrix::identity(StateSpace::indexed(2));
  EXPECT_THROW(ollivier_curvature(p, trivial_metric(p.space()), GeneratingSet{}), Error);
}

TEST(Sectional, FeasibleExamples) {
  const auto s = StateSpace::indexed(3);
  Matrix line(3, 3);
  line << 0, 1, 2, 1, 0, 1, 2, 1, 0;
  const MetricSpace dl(s, line);
  const auto pi = law(s, {0.2, 0.3, 0.5});
  EXPECT_TRUE(sectional_feasible(StochasticMatrix::rank_one(pi), dl,
                                 GeneratingSet::all_pairs(3)).holds);
  EXPECT_TRUE(sectional_feasible(StochasticMatrix::identity(s), dl,
                                 GeneratingSet::all_pairs(3)).holds);
  testing::Rng rng(35);
  for (int k = 0; k < 50; ++k) {
    const auto p = testing::random_kernel(rng, 2);
    EXPECT_TRUE(sectional_feasible(p, trivial_metric(p.space()),
                                   GeneratingSet::all_pairs(2)).holds);
  }
}

TEST(Sectional, InfeasibleCycleOnLine) {
  const auto s = StateSpace::indexed(3);
  Matrix line(3, 3);
  line << 0, 1, 2, 1, 0, 1, 2, 1, 0;
  const MetricSpace dl(s, line);
  Matrix c = Matrix::Zero(3, 3);
  c(0, 2) = c(1, 0) = c(2, 1) = 1.0;
  const auto cert = sectional_feasible(StochasticMatrix(s, c), dl,
                                       GeneratingSet({{0, 1}, {1, 2}}));
  EXPECT_FALSE(cert.holds);
  ASSERT_TRUE(cert.failing_pair.has_value());
  EXPECT_EQ(cert.failing_pair->first, 0u);
  EXPECT_NEAR(cert.failing_flow, 0.0, 1e-15);
}

TEST(Sectional, WitnessesRespectTheDistanceCap) {
  testing::Rng rng(36);
  int holding = 0;
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 2 + k % 5;
    const auto p = testing::random_kernel(rng, n);
    const auto d = testing::random_metric(rng, p.space());
    const auto s = GeneratingSet::all_pairs(n);
    const auto cert = sectional_feasible(p, d, s);
    if (!cert.holds) continue;
    ++holding;
    ASSERT_EQ(cert.witnesses.size(), s.size());
    for (const auto& w : cert.witnesses) {
      const double cap = d(w.pair.first, w.pair.second);
      for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
          if (w.coupling.joint()(u, v) > 1e-12) {
            EXPECT_LE(d(u, v), cap + 1e-12);
          }
        }
      }
    }
  }
  EXPECT_GT(holding, 0);
}

TEST(Lipschitz, Values) {
  const auto s = StateSpace::indexed(4);
  testing::Rng rng(37);
  const auto d = testing::random_metric(rng, s);
  EXPECT_EQ(lipschitz(Vector::Constant(4, 2.5), d), 0.0);
  for (std::size_t x0 = 0; x0 < 4; ++x0) {
    EXPECT_NEAR(lipschitz(d.dist().row(x0).transpose(), d), 1.0, 1e-14);
  }
  const auto s2 = StateSpace::indexed(2);
  EXPECT_EQ(lipschitz((Vector(2) << 0.0, 1.0).finished(), trivial_metric(s2)), 1.0);
}

TEST(DualLipschitz, LipschitzContractionUnderCurvature) {
  testing::Rng rng(38);
  std::normal_distribution<double> g;
  for (int k = 0; k < 300; ++k) {
    const std::size_t n = 2 + k % 5;
    const auto p = testing::random_kernel(rng, n);
    const auto d = k % 2 == 0 ? trivial_metric(p.space())
                              : testing::random_metric(rng, p.space());
    const double kappa = ollivier_curvature(p, d).kappa;
    Vector f(n);
    for (auto& v : f) v = g(rng);
    EXPECT_LE(lipschitz(p.apply(f), d), (1.0 - kappa) * lipschitz(f, d) + 1e-9);
  }
}

TEST(DualLipschitz, LogLipschitzUnderSectionalCurvature) {
  testing::Rng rng(39);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  int checked = 0;
  for (int k = 0; k < 400; ++k) {
    const std::size_t n = 2 + k % 5;
    const auto p = testing::random_kernel(rng, n);
    const auto pstar = adjoint(p, stationary_distribution(p));
    const auto d = k % 2 == 0 ? trivial_metric(p.space())
                              : testing::random_metric(rng, p.space());
    if (!sectional_feasible(pstar, d, GeneratingSet::all_pairs(n)).holds) continue;
    ++checked;
    Vector logf(n);
    for (auto& v : logf) v = u(rng);
    const Vector pf = pstar.apply(logf.array().exp().matrix());
    EXPECT_LE(lipschitz(pf.array().log().matrix(), d), lipschitz(logf, d) + 1e-9);
  }
  EXPECT_GT(checked, 100);
}

}  // namespace
}  // namespace curvlab
