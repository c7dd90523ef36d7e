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

// Colored exclusion process with refresh on S^n, and the killed random walk
// on [n] that controls its curvature.

#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "curvlab/bounds.hpp"
#include "curvlab/models/common.hpp"

namespace curvlab::models {

/// Color law nu on S (fully supported), symmetric exchange rates c on n
/// sites and refresh rates r. Sites and colors are 0-based.
struct CepSpec {
  std::vector<double> nu;
  Matrix c;
  std::vector<double> r;

  std::size_t sites() const { return r.size(); }
  std::size_t colors() const { return nu.size(); }
};

inline void validate(const CepSpec& spec) {
  const std::size_t n = spec.sites();
  require(n >= 1, Errc::kBadRates, "need at least one site");
  require(!spec.nu.empty(), Errc::kBadRates, "need at least one color");
  double total = 0.0;
  for (double w : spec.nu) {
    require(std::isfinite(w) && w > 0.0, Errc::kBadRates,
            "color law must be fully supported");
    total += w;
  }
  require(std::abs(total - 1.0) <= 1e-12, Errc::kBadRates,
          "color law must sum to 1");
  require(spec.c.rows() == static_cast<Eigen::Index>(n) &&
              spec.c.cols() == static_cast<Eigen::Index>(n),
          Errc::kDimensionMismatch, "exchange-rate array must be n x n");
  for (std::size_t i = 0; i < n; ++i) {
    require(spec.c(i, i) == 0.0, Errc::kBadRates,
            "exchange rates must vanish on the diagonal");
    require(std::isfinite(spec.r[i]) && spec.r[i] >= 0.0, Errc::kBadRates,
            "refresh rates must be nonnegative");
    for (std::size_t j = 0; j < n; ++j) {
      require(std::isfinite(spec.c(i, j)) && spec.c(i, j) >= 0.0,
              Errc::kBadRates, "exchange rates must be nonnegative");
      require(spec.c(i, j) == spec.c(j, i), Errc::kBadRates,
              "exchange rates must be symmetric");
    }
  }
}

/// Every connected component of the exchange graph contains a site with a
/// positive refresh rate.
inline bool cep_irreducible(const CepSpec& spec) {
  const std::size_t n = spec.sites();
  std::vector<int> comp(n, -1);
  int count = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<std::size_t> stack{s};
    comp[s] = count;
    bool refreshed = false;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      refreshed = refreshed || spec.r[i] > 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (comp[j] < 0 && spec.c(i, j) > 0.0) {
          comp[j] = count;
          stack.push_back(j);
        }
      }
    }
    if (!refreshed) return false;
    ++count;
  }
  return true;
}

namespace detail {

/// Configurations of S^n indexed with site 0 most significant.
inline std::vector<std::vector<int>> color_configs(std::size_t n,
                                                   std::size_t colors) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= colors;
  std::vector<std::vector<int>> out(total, std::vector<int>(n));
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (std::size_t i = n; i-- > 0;) {
      out[idx][i] = static_cast<int>(rest % colors);
      rest /= colors;
    }
  }
  return out;
}

inline std::size_t config_index(const std::vector<int>& x, std::size_t colors) {
  std::size_t idx = 0;
  for (int v : x) idx = idx * colors + static_cast<std::size_t>(v);
  return idx;
}

}  // namespace detail

/// Full generator on S^n, product law, Hamming metric and Hamming-1 pairs.
/// The Hamming pairs are used even when r lacks full support, in which case
/// the metric is not the combinatorial one of the chain.
inline ModelInstance build_cep(const CepSpec& spec) {
  validate(spec);
  require(cep_irreducible(spec), Errc::kNotIrreducible,
          "refresh support misses a component of the exchange graph");
  const std::size_t n = spec.sites();
  const std::size_t q = spec.colors();
  require_within_cap(std::pow(static_cast<double>(q), static_cast<double>(n)),
                     "colored exclusion process");
  const auto configs = detail::color_configs(n, q);
  const std::size_t total = configs.size();

  std::vector<std::string> labels;
  labels.reserve(total);
  for (const auto& x : configs) labels.push_back(tuple_label(x));
  const StateSpace space(std::move(labels));

  Matrix rates = Matrix::Zero(total, total);
  Vector pi(total);
  Matrix d(total, total);
  std::vector<StatePair> pairs;
  for (std::size_t a = 0; a < total; ++a) {
    const auto& x = configs[a];
    double w = 1.0;
    for (int v : x) w *= spec.nu[v];
    pi[a] = w;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (spec.c(i, j) <= 0.0 || x[i] == x[j]) continue;
        auto y = x;
        std::swap(y[i], y[j]);
        rates(a, detail::config_index(y, q)) += spec.c(i, j);
      }
      if (spec.r[i] <= 0.0) continue;
      for (std::size_t sigma = 0; sigma < q; ++sigma) {
        if (static_cast<int>(sigma) == x[i]) continue;
        auto y = x;
        y[i] = static_cast<int>(sigma);
        rates(a, detail::config_index(y, q)) += spec.r[i] * spec.nu[sigma];
      }
    }
    rates(a, a) = -rates.row(a).sum();
    for (std::size_t b = 0; b < total; ++b) {
      int diff = 0;
      for (std::size_t i = 0; i < n; ++i) diff += configs[b][i] != x[i];
      d(a, b) = diff;
      if (diff == 1 && a < b) pairs.emplace_back(a, b);
    }
  }
  Generator l(space, std::move(rates));
  require_stationary(l, pi, "colored exclusion process");
  return {std::move(l), ProbabilityVector(space, std::move(pi)),
          MetricSpace(space, std::move(d), MetricSpace::TrustedTag{}),
          GeneratingSet(std::move(pairs))};
}

/// Laplace matrix of the walk on [n] with conductances c killed at rate r.
inline Matrix cep_laplacian(const CepSpec& spec) {
  validate(spec);
  const std::size_t n = spec.sites();
  Matrix delta = spec.c;
  for (std::size_t i = 0; i < n; ++i) {
    delta(i, i) = -spec.r[i] - spec.c.row(i).sum();
  }
  return delta;
}

/// max_i P_i(T > t) for the killed walk, from the spectral decomposition
/// of -Delta.
inline BoundCurve cep_killed_tail(const CepSpec& spec,
                                  const std::vector<double>& times) {
  const Matrix neg = -cep_laplacian(spec);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(neg);
  const Vector& lambda = solver.eigenvalues();
  require(lambda[0] > 1e-12, Errc::kSingularLaplacian,
          "killed-walk Laplacian is singular");
  const Matrix& phi = solver.eigenvectors();
  const Vector overlap = phi.transpose() * Vector::Ones(neg.rows());
  std::vector<double> values;
  for (double t : times) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < neg.rows(); ++i) {
      double tail = 0.0;
      for (Eigen::Index k = 0; k < lambda.size(); ++k) {
        tail += std::exp(-lambda[k] * t) * phi(i, k) * overlap[k];
      }
      worst = std::max(worst, tail);
    }
    values.push_back(std::clamp(worst, 0.0, 1.0));
  }
  return BoundCurve(times, std::move(values), BoundKind::kModelSpecific);
}

}  // namespace curvlab::models
