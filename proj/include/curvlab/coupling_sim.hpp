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

// Event-driven Monte-Carlo of coalescing couplings. Every sample draws from
// its own counter-based stream keyed by (seed, sample index), so estimates
// do not depend on evaluation order.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "curvlab/error.hpp"
#include "curvlab/models/birth_death.hpp"
#include "curvlab/models/interchange.hpp"
#include "curvlab/models/zero_range.hpp"

namespace curvlab {

inline constexpr int kMinSamples = 1000;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Widynski's "squares" counter-based generator, 64-bit output variant.
class Squares64 {
 public:
  Squares64(std::uint64_t seed, std::uint64_t stream)
      : key_(splitmix64(splitmix64(seed) ^ splitmix64(~stream)) | 1ULL) {}

  std::uint64_t next() {
    const std::uint64_t ctr = counter_++;
    std::uint64_t x = ctr * key_;
    const std::uint64_t y = x;
    const std::uint64_t z = y + key_;
    x = x * x + y;
    x = (x >> 32) | (x << 32);
    x = x * x + z;
    x = (x >> 32) | (x << 32);
    x = x * x + y;
    x = (x >> 32) | (x << 32);
    const std::uint64_t t = x = x * x + z;
    x = (x >> 32) | (x << 32);
    return t ^ ((x * x + y) >> 32);
  }

  /// Uniform on (0, 1).
  double uniform() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

  std::size_t below(std::size_t k) {
    return std::min(k - 1, static_cast<std::size_t>(uniform() * static_cast<double>(k)));
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

struct CouplingEstimate {
  std::vector<double> times;
  std::vector<double> mean;  // estimated P(X_t != Y_t)
  std::vector<double> ci95;  // 1.96 sqrt(p (1 - p) / n)
  int n_samples = 0;
  std::uint64_t seed = 0;
};

namespace detail {

inline void require_sampling(const std::vector<double>& times, int n_samples) {
  require(n_samples >= kMinSamples, Errc::kInvalidArgument,
          "at least " + std::to_string(kMinSamples) + " samples are required");
  require(!times.empty(), Errc::kInvalidArgument, "need at least one time");
  for (double t : times) {
    require(std::isfinite(t) && t >= 0.0, Errc::kNonFiniteTime,
            "times must be finite and nonnegative");
  }
}

/// Runs `trajectory(rng)` for each sample; it returns the coalescence time
/// (infinity if none before the horizon).
template <class Trajectory>
CouplingEstimate estimate_tail(const std::vector<double>& times, int n_samples,
                               std::uint64_t seed, Trajectory&& trajectory) {
  require_sampling(times, n_samples);
  std::vector<long> alive(times.size(), 0);
  for (int s = 0; s < n_samples; ++s) {
    Squares64 rng(seed, static_cast<std::uint64_t>(s));
    const double tau = trajectory(rng);
    for (std::size_t k = 0; k < times.size(); ++k) alive[k] += tau > times[k];
  }
  CouplingEstimate est;
  est.times = times;
  est.n_samples = n_samples;
  est.seed = seed;
  for (long a : alive) {
    const double p = static_cast<double>(a) / n_samples;
    est.mean.push_back(p);
    est.ci95.push_back(1.96 * std::sqrt(p * (1.0 - p) / n_samples));
  }
  return est;
}

inline void assert_nonincreasing(double before, double after) {
  require(after <= before + 1e-12, Errc::kInvariantViolation,
          "coupled distance increased");
}

}  // namespace detail

/// Order-preserving coupling from (x0, x0 + 1), x0 1-based. Shared moves at
/// the smaller of the two rates; the surplus of X's up rate or Y's down rate
/// makes the pair coalesce.
inline CouplingEstimate simulate_bdp_pair(const models::BirthDeathSpec& spec,
                                          std::size_t x0,
                                          const std::vector<double>& times,
                                          int n_samples, std::uint64_t seed) {
  models::validate(spec);
  require(models::bdp_monotone(spec), Errc::kMonotonicityViolated,
          "birth-death rates are not monotone");
  const std::size_t n = spec.n();
  require(x0 >= 1 && x0 < n, Errc::kInvalidArgument,
          "starting pair (x0, x0 + 1) must lie in {1, ..., n}");
  const double horizon = *std::max_element(times.begin(), times.end());
  auto qp = [&](std::size_t x) { return spec.q_plus[x - 1]; };
  auto qm = [&](std::size_t x) { return spec.q_minus[x - 1]; };
  return detail::estimate_tail(times, n_samples, seed, [&](Squares64& rng) {
    std::size_t x = x0;
    double t = 0.0;
    while (true) {
      const double up_both = qp(x + 1);
      const double up_x = qp(x) - qp(x + 1);
      const double down_both = qm(x);
      const double down_y = qm(x + 1) - qm(x);
      const double total = up_both + up_x + down_both + down_y;
      t += rng.exponential(total);
      if (t > horizon) return std::numeric_limits<double>::infinity();
      double u = rng.uniform() * total;
      if ((u -= up_x) < 0.0 || (u -= down_y) < 0.0) return t;
      if ((u -= up_both) < 0.0) {
        ++x;
      } else {
        --x;
      }
      require(x >= 1 && x < n, Errc::kInvariantViolation,
              "coupled birth-death pair left the segment");
    }
  });
}

/// Synchronized-shuffle coupling of x = id and y = id o (i j): both apply
/// the same uniform shuffle of the ringing block, except that a block holding
/// both discrepant positions makes the pair coalesce. i, j are 0-based.
inline CouplingEstimate simulate_interchange_pair(
    const models::InterchangeSpec& spec, std::size_t i, std::size_t j,
    const std::vector<double>& times, int n_samples, std::uint64_t seed) {
  models::validate(spec);
  require(i < spec.n && j < spec.n && i != j, Errc::kInvalidArgument,
          "transposition pair must join two distinct sites");
  double total = 0.0;
  for (const auto& b : spec.blocks) total += b.rate;
  const double horizon = *std::max_element(times.begin(), times.end());
  return detail::estimate_tail(times, n_samples, seed, [&](Squares64& rng) {
    if (total <= 0.0) return std::numeric_limits<double>::infinity();
    std::vector<int> x(spec.n);
    for (std::size_t k = 0; k < spec.n; ++k) x[k] = static_cast<int>(k);
    std::vector<int> y = x;
    std::swap(y[i], y[j]);
    double t = 0.0;
    int dist = 1;
    std::vector<std::size_t> image;
    while (true) {
      t += rng.exponential(total);
      if (t > horizon) return std::numeric_limits<double>::infinity();
      double u = rng.uniform() * total;
      std::size_t pick = 0;
      while (pick + 1 < spec.blocks.size() && (u -= spec.blocks[pick].rate) >= 0.0) {
        ++pick;
      }
      const auto& sites = spec.blocks[pick].sites;
      image = sites;
      for (std::size_t k = image.size(); k > 1; --k) {
        std::swap(image[k - 1], image[rng.below(k)]);
      }
      const std::vector<int> xs = x;
      const std::vector<int> ys = y;
      for (std::size_t k = 0; k < sites.size(); ++k) {
        x[sites[k]] = xs[image[k]];
        y[sites[k]] = ys[image[k]];
      }
      // Same positions off the block means y can match x's shuffle exactly.
      bool agree_outside = true;
      for (std::size_t k = 0; k < spec.n && agree_outside; ++k) {
        if (std::find(sites.begin(), sites.end(), k) == sites.end()) {
          agree_outside = xs[k] == ys[k];
        }
      }
      if (agree_outside) y = x;
      const int next = models::transposition_distance(x, y);
      detail::assert_nonincreasing(dist, next);
      dist = next;
      if (dist == 0) return t;
    }
  });
}

enum class ZrpCoupling {
  kIndependent,  // tagged walks jump independently given the background
  kRefresh,      // mean-field G: common refresh at rate delta
};

/// Background zero-range process Z on m - 1 particles (z0) plus two tagged
/// particles at sites i and j (0-based). The tagged particle at u leaves at
/// rate r_u(Z_u + 1) - r_u(Z_u) and lands according to G(u, .).
inline CouplingEstimate simulate_zrp_pair(const models::ZrpSpec& spec,
                                          const std::vector<int>& z0,
                                          std::size_t i, std::size_t j,
                                          const std::vector<double>& times,
                                          int n_samples, std::uint64_t seed,
                                          ZrpCoupling coupling =
                                              ZrpCoupling::kIndependent) {
  models::validate(spec);
  const auto mono = models::zrp_monotone(spec);
  require(mono.holds, Errc::kMonotonicityViolated,
          "zero-range rates are not monotone");
  const std::size_t n = spec.sites();
  require(z0.size() == n && i < n && j < n, Errc::kInvalidArgument,
          "background configuration or tagged sites out of range");
  long count = 0;
  for (int v : z0) {
    require(v >= 0, Errc::kInvalidArgument, "negative occupation");
    count += v;
  }
  require(spec.m >= 1 && count == static_cast<long>(spec.m) - 1,
          Errc::kInvalidArgument, "background must carry m - 1 particles");
  require(coupling == ZrpCoupling::kIndependent || models::zrp_mean_field(spec),
          Errc::kInvalidArgument, "refresh coupling needs a mean-field G");
  const double delta = coupling == ZrpCoupling::kRefresh ? mono.delta : 0.0;
  const Vector nu = spec.g.row(0).transpose();
  const double horizon = *std::max_element(times.begin(), times.end());

  auto pick_site = [&](Squares64& rng, const Eigen::Ref<const Vector>& row) {
    double u = rng.uniform();
    std::size_t v = 0;
    while (v + 1 < n && (u -= row[v]) >= 0.0) ++v;
    return v;
  };

  return detail::estimate_tail(times, n_samples, seed, [&](Squares64& rng) {
    if (i == j) return 0.0;
    std::vector<int> z = z0;
    std::size_t a = i;
    std::size_t b = j;
    double t = 0.0;
    std::vector<double> background(n);
    while (true) {
      double zsum = 0.0;
      for (std::size_t u = 0; u < n; ++u) {
        background[u] = spec.r(u, static_cast<std::size_t>(z[u]));
        zsum += background[u];
      }
      const double ra = spec.r(a, z[a] + 1u) - spec.r(a, z[a]) - delta;
      const double rb = spec.r(b, z[b] + 1u) - spec.r(b, z[b]) - delta;
      const double total = zsum + std::max(ra, 0.0) + std::max(rb, 0.0) + delta;
      if (total <= 0.0) return std::numeric_limits<double>::infinity();
      t += rng.exponential(total);
      if (t > horizon) return std::numeric_limits<double>::infinity();
      double u = rng.uniform() * total;
      if ((u -= delta) < 0.0) return t;  // common refresh to the same site
      if ((u -= std::max(ra, 0.0)) < 0.0) {
        a = pick_site(rng, spec.g.row(a).transpose());
      } else if ((u -= std::max(rb, 0.0)) < 0.0) {
        b = pick_site(rng, spec.g.row(b).transpose());
      } else {
        std::size_t from = 0;
        while (from + 1 < n && (u -= background[from]) >= 0.0) ++from;
        const std::size_t to = pick_site(rng, spec.g.row(from).transpose());
        --z[from];
        ++z[to];
      }
      if (a == b) return t;
    }
  });
}

namespace detail {

/// Picks the start whose pilot estimate has the largest summed tail, then
/// re-estimates it on fresh samples so the reported CI stays honest (the
/// maximum of several noisy estimates is biased upward).
template <class Run>
CouplingEstimate select_and_estimate(std::size_t candidates,
                                     const std::vector<double>& times,
                                     int n_samples, std::uint64_t seed,
                                     Run&& run) {
  require_sampling(times, n_samples);
  if (candidates == 0) {
    return {times, std::vector<double>(times.size(), 0.0),
            std::vector<double>(times.size(), 0.0), n_samples, seed};
  }
  std::size_t best = 0;
  if (candidates > 1) {
    double best_sum = -1.0;
    const std::uint64_t pilot = splitmix64(seed ^ 0x70696c6f74ULL);
    for (std::size_t c = 0; c < candidates; ++c) {
      const CouplingEstimate est = run(c, splitmix64(pilot + c));
      double sum = 0.0;
      for (double v : est.mean) sum += v;
      if (sum > best_sum) {
        best_sum = sum;
        best = c;
      }
    }
  }
  CouplingEstimate out = run(best, seed);
  out.seed = seed;
  return out;
}

}  // namespace detail

/// Estimate for the worst start x0 in {1, ..., n - 1}, chosen by a pilot run.
inline CouplingEstimate simulate_bdp_worst(const models::BirthDeathSpec& spec,
                                           const std::vector<double>& times,
                                           int n_samples, std::uint64_t seed) {
  models::validate(spec);
  const std::size_t pairs = spec.n() > 0 ? spec.n() - 1 : 0;
  return detail::select_and_estimate(
      pairs, times, n_samples, seed, [&](std::size_t c, std::uint64_t s) {
        return simulate_bdp_pair(spec, c + 1, times, n_samples, s);
      });
}

/// Estimate for the worst transposition pair i < j, chosen by a pilot run.
inline CouplingEstimate simulate_interchange_worst(
    const models::InterchangeSpec& spec, const std::vector<double>& times,
    int n_samples, std::uint64_t seed) {
  models::validate(spec);
  std::vector<std::pair<std::size_t, std::size_t>> starts;
  for (std::size_t i = 0; i < spec.n; ++i) {
    for (std::size_t j = i + 1; j < spec.n; ++j) starts.emplace_back(i, j);
  }
  return detail::select_and_estimate(
      starts.size(), times, n_samples, seed,
      [&](std::size_t c, std::uint64_t s) {
        return simulate_interchange_pair(spec, starts[c].first,
                                         starts[c].second, times, n_samples, s);
      });
}

/// Estimate for the worst background z (m - 1 particles) and tagged sites
/// i < j, chosen by a pilot run.
inline CouplingEstimate simulate_zrp_worst(const models::ZrpSpec& spec,
                                           const std::vector<double>& times,
                                           int n_samples, std::uint64_t seed,
                                           ZrpCoupling coupling) {
  models::validate(spec);
  require(spec.m >= 1, Errc::kInvalidArgument, "need at least one particle");
  const std::size_t n = spec.sites();
  struct Start {
    std::vector<int> z;
    std::size_t i, j;
  };
  std::vector<Start> starts;
  for (const auto& z : models::zrp_states(n, spec.m - 1)) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) starts.push_back({z, i, j});
    }
  }
  return detail::select_and_estimate(
      starts.size(), times, n_samples, seed,
      [&](std::size_t c, std::uint64_t s) {
        return simulate_zrp_pair(spec, starts[c].z, starts[c].i, starts[c].j,
                                 times, n_samples, s, coupling);
      });
}

}  // namespace curvlab
