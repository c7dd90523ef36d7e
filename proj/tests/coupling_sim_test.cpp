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
#include <set>

#include <gtest/gtest.h>

#include "curvlab/curvlab.hpp"

namespace curvlab {
namespace {

constexpr int kSamples = 4000;

std::vector<std::vector<double>> linear_rates(std::size_t n, std::size_t m) {
  std::vector<double> r;
  for (std::size_t k = 1; k <= m; ++k) r.push_back(static_cast<double>(k));
  return std::vector<std::vector<double>>(n, r);
}

TEST(Squares64, StreamsAreReproducibleAndDistinct) {
  Squares64 a(42, 0);
  Squares64 b(42, 0);
  Squares64 c(42, 1);
  Squares64 d(43, 0);
  std::set<std::uint64_t> seen;
  for (int k = 0; k < 1000; ++k) {
    const auto va = a.next();
    EXPECT_EQ(va, b.next());
    seen.insert(va);
    seen.insert(c.next());
    seen.insert(d.next());
  }
  EXPECT_EQ(seen.size(), 3000u);
}

TEST(Squares64, UniformAndExponentialMoments) {
  Squares64 rng(7, 3);
  double sum = 0.0;
  double sq = 0.0;
  double exp_sum = 0.0;
  constexpr int n = 200000;
  for (int k = 0; k < n; ++k) {
    const double u = rng.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sq += u * u;
    exp_sum += rng.exponential(2.0);
  }
  EXPECT_NEAR(sum / n, 0.5, 0.005);
  EXPECT_NEAR(sq / n, 1.0 / 3.0, 0.005);
  EXPECT_NEAR(exp_sum / n, 0.5, 0.005);
  std::vector<int> bins(5, 0);
  for (int k = 0; k < 50000; ++k) ++bins[rng.below(5)];
  for (int c : bins) EXPECT_NEAR(c, 10000, 500);
}

TEST(Sampling, RequiresEnoughSamplesAndFiniteTimes) {
  const auto spec = models::unit_rate_bdp(4);
  EXPECT_THROW(simulate_bdp_pair(spec, 1, {1.0}, 999, 1), Error);
  EXPECT_THROW(simulate_bdp_pair(spec, 1, {-1.0}, 1000, 1), Error);
  EXPECT_THROW(simulate_bdp_pair(spec, 4, {1.0}, 1000, 1), Error);
  EXPECT_THROW(simulate_bdp_pair({{1.0, 2.0, 0.0}, {0.0, 1.0, 1.0}}, 1, {1.0}, 1000, 1), Error);
}

TEST(BirthDeathCoupling, MatchesExactMeanGap) {
  const auto spec = models::unit_rate_bdp(6);
  const std::vector<double> times{0.0, 1.0, 4.0, 10.0};
  const auto l = models::bdp_generator(spec);
  Vector pos(6);
  for (int x = 0; x < 6; ++x) pos[x] = x + 1;
  for (std::size_t x0 : {1u, 3u, 5u}) {
    const auto est = simulate_bdp_pair(spec, x0, times, kSamples, 100 + x0);
    EXPECT_EQ(est.mean[0], 1.0);
    for (std::size_t k = 0; k < times.size(); ++k) {
      const Vector mean = semigroup_at(l, times[k]).apply(pos);
      const double exact = mean[x0] - mean[x0 - 1];
      EXPECT_NEAR(est.mean[k], exact, est.ci95[k] + 1e-12) << "x0=" << x0 << " t=" << times[k];
      if (k > 0) {
        EXPECT_LE(est.mean[k], est.mean[k - 1]);
      }
    }
  }
}

TEST(BirthDeathCoupling, WorstStartDominatesNoStart) {
  const auto spec = models::unit_rate_bdp(6);
  const std::vector<double> times{2.0, 6.0};
  const auto worst = simulate_bdp_worst(spec, times, kSamples, 5);
  const auto m = models::bdp_m_curve(spec, times);
  for (std::size_t k = 0; k < times.size(); ++k) {
    EXPECT_NEAR(worst.mean[k], m.m[k], 2.0 * worst.ci95[k] + 0.01);
  }
}

TEST(InterchangeCoupling, CompleteGraphCoalescesAtConstantRate) {
  for (std::size_t n : {3u, 4u}) {
    const double c = 4.0 / static_cast<double>(n * (n - 1));
    const auto spec = models::random_transpositions(n, c);
    const std::vector<double> times{0.0, 0.5, 1.0, 2.0};
    const auto est = simulate_interchange_worst(spec, times, kSamples, 9);
    EXPECT_EQ(est.mean[0], 1.0);
    for (std::size_t k = 1; k < times.size(); ++k) {
      EXPECT_NEAR(est.mean[k], std::exp(-c * times[k]), est.ci95[k] + 0.005) << n;
    }
  }
}

TEST(InterchangeCoupling, MatchesMeetingTailOnThreeSites) {
  const auto spec = models::random_transpositions(3, 2.0 / 3.0);
  const std::vector<double> times{0.5, 1.0, 2.0};
  const auto tail = models::interchange_meeting_tail(spec, times);
  const auto est = simulate_interchange_pair(spec, 0, 2, times, kSamples, 21);
  for (std::size_t k = 0; k < times.size(); ++k) {
    EXPECT_NEAR(est.mean[k], tail.values[k], est.ci95[k] + 0.005);
  }
}

TEST(ZeroRangeCoupling, SameSiteIsCoalesced) {
  const auto spec = models::mean_field_zrp(2, {0.5, 0.5}, linear_rates(2, 2));
  const auto est = simulate_zrp_pair(spec, {1, 0}, 1, 1, {0.0, 1.0}, 1000, 3);
  EXPECT_EQ(est.mean[0], 0.0);
  EXPECT_EQ(est.mean[1], 0.0);
}

TEST(ZeroRangeCoupling, RefreshTailBelowExponential) {
  const auto spec =
      models::mean_field_zrp(3, {1.0 / 3, 1.0 / 3, 1.0 / 3}, linear_rates(3, 3));
  const std::vector<double> times{0.25, 0.5, 1.0, 2.0, 3.0};
  const auto est = simulate_zrp_worst(spec, times, kSamples, 17, ZrpCoupling::kRefresh);
  for (std::size_t k = 0; k < times.size(); ++k) {
    EXPECT_LE(est.mean[k], std::exp(-times[k]) + est.ci95[k]);
  }
  EXPECT_THROW(simulate_zrp_worst(
                   {3, (Matrix(2, 2) << 0, 1, 1, 0).finished(), linear_rates(2, 3)}, times,
                   1000, 1, ZrpCoupling::kRefresh),
               Error);
}

TEST(ZeroRangeCoupling, TailDominatesExactTransportCost) {
  Matrix g(2, 2);
  g << 0.3, 0.7, 0.6, 0.4;
  const models::ZrpSpec spec{2, g, {{1.0, 2.5}, {2.0, 3.0}}};
  const auto m = models::build_zrp(spec);
  const auto states = models::zrp_states(2, 2);
  auto index_of = [&](const std::vector<int>& x) {
    return static_cast<std::size_t>(std::find(states.begin(), states.end(), x) - states.begin());
  };
  const std::vector<double> times{0.25, 0.5, 1.0, 2.0};
  // One-sided, Bonferroni over 2 starts x 4 times at family level 2.5%.
  const double widen = 2.7344 / 1.959964;
  std::uint64_t seed = 4;
  for (const auto& z : models::zrp_states(2, 1)) {
    auto x = z;
    auto y = z;
    ++x[0];
    ++y[1];
    const auto est = simulate_zrp_pair(spec, z, 0, 1, times, kSamples, seed++,
                                       ZrpCoupling::kIndependent);
    for (std::size_t k = 0; k < times.size(); ++k) {
      const StochasticMatrix pt = semigroup_at(m.generator, times[k]);
      const double w = wasserstein(pt.row(index_of(x)), pt.row(index_of(y)), m.metric).value;
      EXPECT_GE(est.mean[k], w - widen * est.ci95[k]) << "t=" << times[k];
    }
  }
}

TEST(Determinism, SameSeedSameEstimate) {
  const auto spec = models::random_transpositions(4, 0.5);
  const std::vector<double> times{0.5, 1.5};
  const auto a = simulate_interchange_worst(spec, times, 1000, 99);
  const auto b = simulate_interchange_worst(spec, times, 1000, 99);
  const auto c = simulate_interchange_worst(spec, times, 1000, 100);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.seed, 99u);
  EXPECT_NE(a.mean, c.mean);
}

}  // namespace
}  // namespace curvlab
