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

// Zero-range process: m particles on n sites, a particle leaves site i at
// total rate r_i(x_i) and lands on j with probability G(i, j).

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "curvlab/models/common.hpp"

namespace curvlab::models {

/// rates[i][k - 1] = r_i(k) for k = 1..m; an optional (m+1)-th entry is used
/// only for the literal increment report of zrp_monotone.
struct ZrpSpec {
  std::size_t m = 0;
  Matrix g;
  std::vector<std::vector<double>> rates;

  std::size_t sites() const { return static_cast<std::size_t>(g.rows()); }
  /// r_i(k), with r_i(0) = 0.
  double r(std::size_t i, std::size_t k) const {
    return k == 0 ? 0.0 : rates[i][k - 1];
  }
};

/// Mean-field instance: G(i, j) = nu_j for every i.
inline ZrpSpec mean_field_zrp(std::size_t m, const std::vector<double>& nu,
                              std::vector<std::vector<double>> rates) {
  const auto n = static_cast<Eigen::Index>(nu.size());
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = nu[j];
  }
  return {m, std::move(g), std::move(rates)};
}

inline void validate(const ZrpSpec& spec) {
  const std::size_t n = spec.sites();
  require(n >= 1 && spec.g.cols() == spec.g.rows(), Errc::kDimensionMismatch,
          "G must be a nonempty square matrix");
  require(spec.rates.size() == n, Errc::kDimensionMismatch,
          "need one rate function per site");
  for (std::size_t i = 0; i < n; ++i) {
    require(spec.rates[i].size() >= spec.m, Errc::kBadRates,
            "rate function of site " + std::to_string(i + 1) +
                " must list r(1), ..., r(m)");
    for (double v : spec.rates[i]) {
      require(std::isfinite(v) && v > 0.0, Errc::kBadRates,
              "rates must be positive for k >= 1");
    }
    for (std::size_t j = 0; j < n; ++j) {
      require(std::isfinite(spec.g(i, j)) && spec.g(i, j) >= 0.0,
              Errc::kBadRates, "G must be nonnegative");
    }
    require(std::abs(spec.g.row(i).sum() - 1.0) <= tol::kRenormalize,
            Errc::kBadRates, "G rows must sum to 1");
  }
  require(curvlab::detail::strongly_connected(spec.g), Errc::kNotIrreducible,
          "G is not irreducible");
}

inline bool zrp_mean_field(const ZrpSpec& spec) {
  for (Eigen::Index i = 1; i < spec.g.rows(); ++i) {
    if ((spec.g.row(i) - spec.g.row(0)).cwiseAbs().maxCoeff() > 1e-12) {
      return false;
    }
  }
  return true;
}

/// Compositions of m into n parts in colexicographic order (the last site
/// is the most significant).
inline std::vector<std::vector<int>> zrp_states(std::size_t n, std::size_t m) {
  std::vector<std::vector<int>> out;
  std::vector<int> x(n, 0);
  // Walk the compositions in colex order: find the lowest site that can
  // move a unit upward, as in an odometer with a fixed total.
  if (n == 0) return out;
  x[0] = static_cast<int>(m);
  out.push_back(x);
  while (true) {
    std::size_t k = 0;
    while (k + 1 < n && x[k] == 0) ++k;
    if (k + 1 >= n) break;
    const int carry = x[k] - 1;
    x[k] = 0;
    x[k + 1] += 1;
    x[0] = carry;
    out.push_back(x);
  }
  return out;
}

inline double zrp_state_count(std::size_t n, std::size_t m) {
  // C(m + n - 1, n - 1)
  double c = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    c = c * static_cast<double>(m + k) / static_cast<double>(k);
  }
  return std::round(c);
}

/// Stationary law nu of G.
inline Vector zrp_nu(const ZrpSpec& spec) {
  const StochasticMatrix g(StateSpace::indexed(spec.sites()), spec.g);
  return stationary_distribution(g).weights();
}

/// Generator, product-form law, half-L1 metric and pairs at distance one.
inline ModelInstance build_zrp(const ZrpSpec& spec) {
  validate(spec);
  const std::size_t n = spec.sites();
  require_within_cap(zrp_state_count(n, spec.m), "zero-range process");
  const auto states = zrp_states(n, spec.m);
  const std::size_t total = states.size();
  std::vector<std::string> labels;
  for (const auto& x : states) labels.push_back(tuple_label(x));
  const StateSpace space(std::move(labels));

  auto index_of = [&](const std::vector<int>& x) {
    // Colex rank: sites above k carry the most weight.
    const auto it = std::lower_bound(
        states.begin(), states.end(), x,
        [](const std::vector<int>& a, const std::vector<int>& b) {
          return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(),
                                              b.rend());
        });
    return static_cast<std::size_t>(it - states.begin());
  };

  const Vector nu = zrp_nu(spec);
  Matrix rates = Matrix::Zero(total, total);
  Vector log_pi(total);
  Matrix d(total, total);
  std::vector<StatePair> pairs;
  for (std::size_t a = 0; a < total; ++a) {
    const auto& x = states[a];
    double lw = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (int k = 1; k <= x[i]; ++k) {
        lw += std::log(nu[i]) - std::log(spec.r(i, static_cast<std::size_t>(k)));
      }
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || spec.g(i, j) == 0.0) continue;
        auto y = x;
        --y[i];
        ++y[j];
        rates(a, index_of(y)) +=
            spec.r(i, static_cast<std::size_t>(x[i])) * spec.g(i, j);
      }
    }
    log_pi[a] = lw;
    for (std::size_t b = 0; b < total; ++b) {
      int l1 = 0;
      for (std::size_t i = 0; i < n; ++i) l1 += std::abs(states[b][i] - x[i]);
      d(a, b) = 0.5 * l1;
      if (a < b && l1 == 2) pairs.emplace_back(a, b);
    }
    rates(a, a) = -rates.row(a).sum();
  }
  Vector pi = (log_pi.array() - log_pi.maxCoeff()).exp().matrix();
  pi /= pi.sum();
  Generator l(space, std::move(rates));
  require_stationary(l, pi, "zero-range process");
  return {std::move(l), ProbabilityVector(space, std::move(pi)),
          MetricSpace(space, std::move(d), MetricSpace::TrustedTag{}),
          GeneratingSet(std::move(pairs))};
}

/// Same rates with G replaced by its adjoint G*(i, j) = nu_j G(j, i) / nu_i.
inline ZrpSpec zrp_adjoint_spec(const ZrpSpec& spec) {
  validate(spec);
  const Vector nu = zrp_nu(spec);
  ZrpSpec out = spec;
  for (Eigen::Index i = 0; i < spec.g.rows(); ++i) {
    for (Eigen::Index j = 0; j < spec.g.cols(); ++j) {
      out.g(i, j) = nu[j] * spec.g(j, i) / nu[i];
    }
  }
  return out;
}

struct ZrpMonotonicity {
  bool holds = true;
  /// min / max over i and k in [m] of r_i(k) - r_i(k - 1), with r_i(0) = 0:
  /// the increments seen by a discrepancy riding on m - 1 other particles.
  double delta = 0.0;
  double Delta = 0.0;
  /// min over i and k in [m] of r_i(k + 1) - r_i(k), when every r_i(m + 1)
  /// is supplied.
  std::optional<double> delta_literal;
};

inline ZrpMonotonicity zrp_monotone(const ZrpSpec& spec) {
  ZrpMonotonicity out;
  const std::size_t n = spec.sites();
  if (spec.m == 0 || n == 0) return out;
  out.delta = std::numeric_limits<double>::infinity();
  out.Delta = -std::numeric_limits<double>::infinity();
  bool extended = true;
  double literal = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 1; k <= spec.m && k <= spec.rates[i].size(); ++k) {
      const double inc = spec.r(i, k) - spec.r(i, k - 1);
      if (inc < 0.0) out.holds = false;
      out.delta = std::min(out.delta, inc);
      out.Delta = std::max(out.Delta, inc);
    }
    if (spec.rates[i].size() > spec.m) {
      for (std::size_t k = 1; k <= spec.m; ++k) {
        literal = std::min(literal, spec.r(i, k + 1) - spec.r(i, k));
      }
    } else {
      extended = false;
    }
  }
  if (extended) out.delta_literal = literal;
  return out;
}

}  // namespace curvlab::models
