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

#include <gtest/gtest.h>

#include "curvlab/chain.hpp"
#include "support/generators.hpp"

namespace curvlab {
namespace {

StochasticMatrix kernel2(double p, double q) {
  Matrix m(2, 2);
  m << 1 - p, p, q, 1 - q;
  return StochasticMatrix(StateSpace::indexed(2), m);
}

TEST(StateSpace, RejectsDuplicateLabels) {
  EXPECT_THROW(StateSpace({"a", "b", "a"}), Error);
  EXPECT_THROW(StateSpace(std::vector<std::string>{}), Error);
  const StateSpace s({"a", "b"});
  EXPECT_EQ(s.index_of("b"), 1u);
  EXPECT_FALSE(s.index_of("c").has_value());
}

TEST(StochasticMatrix, RejectsBadRows) {
  Matrix m(2, 2);
  m << 0.5, 0.6, 0.5, 0.5;
  EXPECT_THROW(StochasticMatrix(StateSpace::indexed(2), m), Error);
  m << 1.2, -0.2, 0.5, 0.5;
  EXPECT_THROW(StochasticMatrix(StateSpace::indexed(2), m), Error);
  m << 0.5, 0.5, 0.5, 0.5;
  EXPECT_THROW(StochasticMatrix(StateSpace::indexed(3), m), Error);
}

TEST(Stationary, TwoStateClosedForm) {
  EXPECT_NEAR(stationary_distribution(kernel2(0.5, 0.5)).weights()[0], 0.5, 1e-14);
  EXPECT_NEAR(stationary_distribution(kernel2(0.25, 0.25)).weights()[0], 0.5, 1e-14);
  const Vector pi = stationary_distribution(kernel2(0.1, 0.3)).weights();
  EXPECT_NEAR(pi[0], 0.75, 1e-14);
  EXPECT_NEAR(pi[1], 0.25, 1e-14);
}

TEST(Stationary, InvariantOnRandomKernels) {
  testing::Rng rng(11);
  for (int k = 0; k < 200; ++k) {
    const auto p = testing::random_kernel(rng, 2 + k % 5);
    const Vector pi = stationary_distribution(p).weights();
    EXPECT_LE((pi.transpose() * p.entries() - pi.transpose()).cwiseAbs().maxCoeff(),
              1e-12);
    EXPECT_NEAR(pi.sum(), 1.0, 1e-12);
    EXPECT_GT(pi.minCoeff(), 0.0);
  }
}

TEST(Adjoint, ReversibleAndCycle) {
  const auto p = kernel2(0.1, 0.3);
  const auto ps = adjoint(p, stationary_distribution(p));
  EXPECT_LE((ps.entries() - p.entries()).cwiseAbs().maxCoeff(), 1e-14);

  Matrix c = Matrix::Zero(3, 3);
  c(0, 1) = c(1, 2) = c(2, 0) = 1.0;
  const StochasticMatrix cyc(StateSpace::indexed(3), c);
  const auto cs = adjoint(cyc, stationary_distribution(cyc));
  EXPECT_LE((cs.entries() - c.transpose()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Adjoint, DetailedBalanceDualityAndInvolution) {
  testing::Rng rng(12);
  for (int k = 0; k < 100; ++k) {
    const auto p = testing::random_kernel(rng, 2 + k % 5);
    const auto pi = stationary_distribution(p);
    const auto ps = adjoint(p, pi);
    const Vector& w = pi.weights();
    const Matrix lhs = w.asDiagonal() * ps.entries();
    const Matrix rhs = (w.asDiagonal() * p.entries()).transpose();
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((adjoint(ps, pi).entries() - p.entries()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Semigroup, ZeroTimeAndRankOne) {
  const Vector pi = (Vector(3) << 0.2, 0.3, 0.5).finished();
  Matrix r(3, 3);
  for (int x = 0; x < 3; ++x) r.row(x) = pi.transpose();
  const auto l = Generator::from_kernel(StochasticMatrix(StateSpace::indexed(3), r));
  EXPECT_LE((semigroup_at(l, 0.0).entries() - Matrix::Identity(3, 3))
                .cwiseAbs().maxCoeff(), 1e-15);
  for (double t : {0.1, 1.0, 3.0, 25.0}) {
    const Matrix expect = (1 - std::exp(-t)) * r + std::exp(-t) * Matrix::Identity(3, 3);
    EXPECT_LE((semigroup_at(l, t).entries() - expect).cwiseAbs().maxCoeff(), 1e-12)
        << "t=" << t;
  }
}

TEST(Semigroup, TwoStateClosedForm) {
  for (auto [a, b] : {std::pair{1.0, 2.0}, {0.3, 0.05}, {40.0, 7.0}}) {
    Matrix rates(2, 2);
    rates << -a, a, b, -b;
    const Generator l(StateSpace::indexed(2), rates);
    for (double t : {0.01, 0.5, 2.0, 10.0}) {
      const double e = std::exp(-(a + b) * t);
      Matrix expect(2, 2);
      expect << b + a * e, a - a * e, b - b * e, a + b * e;
      expect /= a + b;
      EXPECT_LE((semigroup_at(l, t).entries() - expect).cwiseAbs().maxCoeff(), 1e-12)
          << a << " " << b << " t=" << t;
    }
  }
}

TEST(Semigroup, SemigroupPropertyOnRandomGenerators) {
  testing::Rng rng(13);
  for (int k = 0; k < 50; ++k) {
    const auto l = testing::random_generator(rng, 2 + k % 5);
    const Matrix lhs = semigroup_at(l, 0.7).entries() * semigroup_at(l, 1.6).entries();
    EXPECT_LE((lhs - semigroup_at(l, 2.3).entries()).cwiseAbs().maxCoeff(), 1e-11);
    const Vector pi = stationary_distribution(l).weights();
    EXPECT_LE((pi.transpose() * l.rates()).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Generator, NormalizesDiagonalAndRejectsNegativeRates) {
  Matrix rates(2, 2);
  rates << -1.0, 1.0, -0.5, 0.5;
  EXPECT_THROW(Generator(StateSpace::indexed(2), rates), Error);
  rates << -1.0, 1.0, 2.0, -2.0;
  const Generator l(StateSpace::indexed(2), rates);
  EXPECT_DOUBLE_EQ(l.max_rate(), 2.0);
  EXPECT_TRUE(l.irreducible());
}

TEST(Perturb, FormulaAndStationarity) {
  const StochasticMatrix id = StochasticMatrix::identity(StateSpace::indexed(2));
  const auto pe = perturb(id, ProbabilityVector::uniform(id.space()), 0.5);
  EXPECT_DOUBLE_EQ(pe(0, 0), 0.75);
  EXPECT_DOUBLE_EQ(pe(0, 1), 0.25);
  EXPECT_THROW(perturb(id, ProbabilityVector::uniform(id.space()), 0.0), Error);

  testing::Rng rng(14);
  for (int k = 0; k < 50; ++k) {
    const auto p = testing::random_kernel(rng, 2 + k % 5);
    const auto pi = stationary_distribution(p);
    const auto p3 = perturb(p, pi, 0.3);
    EXPECT_LE((stationary_distribution(p3).weights() - pi.weights()).cwiseAbs().maxCoeff(),
              1e-12);
    EXPECT_LE((perturb(p, pi, 1e-9).entries() - p.entries()).cwiseAbs().maxCoeff(), 1e-8);
  }
}

}  // namespace
}  // namespace curvlab
