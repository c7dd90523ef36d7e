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

// Birth-death chains on the segment {1, ..., n}.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "curvlab/bounds.hpp"
#include "curvlab/models/common.hpp"

namespace curvlab::models {

/// Up rates q_plus(x) and down rates q_minus(x), x = 1..n (stored 0-based).
/// q_minus(1) = q_plus(n) = 0 and every other rate is positive.
struct BirthDeathSpec {
  std::vector<double> q_plus;
  std::vector<double> q_minus;

  std::size_t n() const { return q_plus.size(); }
};

inline void validate(const BirthDeathSpec& spec) {
  const std::size_t n = spec.n();
  require(n >= 1 && spec.q_minus.size() == n, Errc::kBadRates,
          "q_plus and q_minus must have the same positive length");
  require(spec.q_minus.front() == 0.0 && spec.q_plus.back() == 0.0,
          Errc::kBadRates, "boundary rates q_minus(1), q_plus(n) must be 0");
  for (std::size_t x = 0; x + 1 < n; ++x) {
    require(std::isfinite(spec.q_plus[x]) && spec.q_plus[x] > 0.0,
            Errc::kBadRates, "q_plus must be positive below n");
    require(std::isfinite(spec.q_minus[x + 1]) && spec.q_minus[x + 1] > 0.0,
            Errc::kBadRates, "q_minus must be positive above 1");
  }
}

/// Unit rates: simple random walk on the n-segment.
inline BirthDeathSpec unit_rate_bdp(std::size_t n) {
  BirthDeathSpec spec{std::vector<double>(n, 1.0), std::vector<double>(n, 1.0)};
  spec.q_plus.back() = 0.0;
  spec.q_minus.front() = 0.0;
  return spec;
}

inline Generator bdp_generator(const BirthDeathSpec& spec) {
  validate(spec);
  const std::size_t n = spec.n();
  std::vector<std::string> labels;
  for (std::size_t x = 1; x <= n; ++x) labels.push_back(std::to_string(x));
  Matrix rates = Matrix::Zero(n, n);
  for (std::size_t x = 0; x < n; ++x) {
    if (x + 1 < n) rates(x, x + 1) = spec.q_plus[x];
    if (x > 0) rates(x, x - 1) = spec.q_minus[x];
    rates(x, x) = -(spec.q_plus[x] + spec.q_minus[x]);
  }
  return Generator(StateSpace(std::move(labels)), std::move(rates));
}

/// pi(x) proportional to prod_{k=2}^{x} q_plus(k-1) / q_minus(k).
inline Vector bdp_stationary_formula(const BirthDeathSpec& spec) {
  validate(spec);
  const std::size_t n = spec.n();
  Vector w(n);
  double log_w = 0.0;
  std::vector<double> logs(n, 0.0);
  for (std::size_t x = 1; x < n; ++x) {
    log_w += std::log(spec.q_plus[x - 1]) - std::log(spec.q_minus[x]);
    logs[x] = log_w;
  }
  const double top = *std::max_element(logs.begin(), logs.end());
  for (std::size_t x = 0; x < n; ++x) w[x] = std::exp(logs[x] - top);
  return w / w.sum();
}

/// Generator, product-form law, metric |x - y| and consecutive pairs.
inline ModelInstance build_bdp(const BirthDeathSpec& spec) {
  Generator l = bdp_generator(spec);
  const std::size_t n = spec.n();
  require_within_cap(static_cast<double>(n), "birth-death chain");
  Vector pi = bdp_stationary_formula(spec);
  require_stationary(l, pi, "birth-death chain");
  Matrix d(n, n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      d(x, y) = std::abs(static_cast<double>(x) - static_cast<double>(y));
    }
  }
  std::vector<StatePair> pairs;
  for (std::size_t x = 0; x + 1 < n; ++x) pairs.emplace_back(x, x + 1);
  const StateSpace space = l.space();
  return {std::move(l), ProbabilityVector(space, std::move(pi)),
          MetricSpace(space, std::move(d), MetricSpace::TrustedTag{}),
          GeneratingSet(std::move(pairs))};
}

/// q_plus non-increasing and q_minus non-decreasing.
inline bool bdp_monotone(const BirthDeathSpec& spec) {
  for (std::size_t x = 0; x + 1 < spec.n(); ++x) {
    if (spec.q_plus[x + 1] > spec.q_plus[x]) return false;
    if (spec.q_minus[x + 1] < spec.q_minus[x]) return false;
  }
  return true;
}

/// min over 1 <= x < n of q_plus(x) - q_plus(x+1) + q_minus(x+1) - q_minus(x);
/// 0 for a single state.
inline double bdp_delta(const BirthDeathSpec& spec) {
  if (spec.n() < 2) return 0.0;
  double delta = std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x + 1 < spec.n(); ++x) {
    delta = std::min(delta, spec.q_plus[x] - spec.q_plus[x + 1] +
                                spec.q_minus[x + 1] - spec.q_minus[x]);
  }
  return delta;
}

struct BdpMCurve {
  std::vector<double> times;
  std::vector<double> m;              // max_x E_{x+1}[X_t] - E_x[X_t]
  std::vector<double> exp_bound;      // e^{-delta t}
  std::vector<double> hitting_bound;  // P_1(T_n > t) ^ P_n(T_1 > t)
  double delta = 0.0;

  BoundCurve as_bound_curve() const {
    return BoundCurve(times, m, BoundKind::kModelSpecific);
  }
};

namespace detail {

/// P_from(T_target > t) for the chain with `target` made absorbing.
inline double survival(const Generator& l, std::size_t from,
                       std::size_t target, double t) {
  Matrix rates = l.rates();
  rates.row(target).setZero();
  const StochasticMatrix pt = semigroup_at(Generator(l.space(), rates), t);
  return std::clamp(1.0 - pt(from, target), 0.0, 1.0);
}

}  // namespace detail

/// Exact m(t) next to its Gronwall bound e^{-delta t} and the hitting-time
/// bound, all from dense matrix exponentials.
inline BdpMCurve bdp_m_curve(const BirthDeathSpec& spec,
                             const std::vector<double>& times) {
  require(bdp_monotone(spec), Errc::kMonotonicityViolated,
          "birth-death rates are not monotone");
  const Generator l = bdp_generator(spec);
  const std::size_t n = spec.n();
  Vector position(n);
  for (std::size_t x = 0; x < n; ++x) position[x] = static_cast<double>(x + 1);

  BdpMCurve out;
  out.times = times;
  out.delta = bdp_delta(spec);
  for (double t : times) {
    const Vector mean = semigroup_at(l, t).apply(position);
    double m = 0.0;
    for (std::size_t x = 0; x + 1 < n; ++x) m = std::max(m, mean[x + 1] - mean[x]);
    out.m.push_back(std::min(m, 1.0));
    out.exp_bound.push_back(std::exp(-out.delta * t));
    out.hitting_bound.push_back(
        n < 2 ? 0.0
              : std::min(detail::survival(l, 0, n - 1, t),
                         detail::survival(l, n - 1, 0, t)));
  }
  return out;
}

}  // namespace curvlab::models
