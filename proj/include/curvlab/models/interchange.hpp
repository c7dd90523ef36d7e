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

// Interchange process on the symmetric group: each block A of a weighted
// hypergraph rings at rate c(A) and shuffles its positions uniformly.

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "curvlab/bounds.hpp"
#include "curvlab/models/common.hpp"

namespace curvlab::models {

inline constexpr std::size_t kMaxInterchangeSites = 6;

struct InterchangeBlock {
  std::vector<std::size_t> sites;  // 0-based, distinct
  double rate = 0.0;
};

struct InterchangeSpec {
  std::size_t n = 0;
  std::vector<InterchangeBlock> blocks;
};

/// Random transpositions: every pair {i, j} at rate `rate`.
inline InterchangeSpec random_transpositions(std::size_t n, double rate) {
  InterchangeSpec spec{n, {}};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) spec.blocks.push_back({{i, j}, rate});
  }
  return spec;
}

inline void validate(const InterchangeSpec& spec) {
  require(spec.n >= 1, Errc::kInvalidArgument, "need at least one site");
  for (const auto& b : spec.blocks) {
    require(std::isfinite(b.rate) && b.rate >= 0.0, Errc::kBadRates,
            "block rates must be nonnegative");
    auto sorted = b.sites;
    std::sort(sorted.begin(), sorted.end());
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
            Errc::kInvalidArgument, "block lists a site twice");
    for (std::size_t i : sorted) {
      require(i < spec.n, Errc::kInvalidArgument, "block site out of range");
    }
  }
}

/// c_hat(i, j) = sum over blocks A containing i and j of c(A) / |A|.
inline Matrix single_particle_conductances(const InterchangeSpec& spec) {
  validate(spec);
  Matrix c = Matrix::Zero(spec.n, spec.n);
  for (const auto& b : spec.blocks) {
    const double w = b.rate / static_cast<double>(b.sites.size());
    for (std::size_t i : b.sites) {
      for (std::size_t j : b.sites) {
        if (i != j) c(i, j) += w;
      }
    }
  }
  return c;
}

/// Transposition distance: n minus the number of cycles of x^{-1} y.
inline int transposition_distance(const std::vector<int>& x,
                                  const std::vector<int>& y) {
  const std::size_t n = x.size();
  std::vector<int> inv(n);
  for (std::size_t i = 0; i < n; ++i) inv[x[i]] = static_cast<int>(i);
  std::vector<char> seen(n, 0);
  int cycles = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++cycles;
    for (std::size_t k = s; !seen[k]; k = inv[y[k]]) seen[k] = 1;
  }
  return static_cast<int>(n) - cycles;
}

namespace detail {

inline std::size_t perm_code(const std::vector<int>& x) {
  std::size_t code = 0;
  for (int v : x) code = code * x.size() + static_cast<std::size_t>(v);
  return code;
}

}  // namespace detail

/// Generator on S_n (lexicographic order, labels 1-based one-line notation),
/// uniform law, transposition metric and one-transposition pairs.
inline ModelInstance build_interchange(const InterchangeSpec& spec) {
  validate(spec);
  require(spec.n <= kMaxInterchangeSites, Errc::kTooLarge,
          "interchange process limited to n <= 6");
  const Matrix chat = single_particle_conductances(spec);
  require(spec.n == 1 || curvlab::detail::strongly_connected(chat), Errc::kNotConnected,
          "single-particle conductance graph is disconnected");
  const std::size_t n = spec.n;

  std::vector<std::vector<int>> perms;
  std::vector<int> x(n);
  std::iota(x.begin(), x.end(), 0);
  do {
    perms.push_back(x);
  } while (std::next_permutation(x.begin(), x.end()));
  const std::size_t total = perms.size();
  require_within_cap(static_cast<double>(total), "interchange process");

  std::size_t codes = 1;
  for (std::size_t i = 0; i < n; ++i) codes *= n;
  std::vector<std::size_t> index(codes, 0);
  std::vector<std::string> labels;
  for (std::size_t a = 0; a < total; ++a) {
    index[detail::perm_code(perms[a])] = a;
    labels.push_back(tuple_label(perms[a], 1));
  }
  const StateSpace space(std::move(labels));

  Matrix rates = Matrix::Zero(total, total);
  for (const auto& b : spec.blocks) {
    if (b.rate <= 0.0 || b.sites.size() < 2) continue;
    std::vector<std::size_t> order = b.sites;
    std::sort(order.begin(), order.end());
    double factorial = 1.0;
    for (std::size_t k = 2; k <= order.size(); ++k) factorial *= k;
    const double w = b.rate / factorial;
    std::vector<std::size_t> image = order;
    while (std::next_permutation(image.begin(), image.end())) {
      // sigma maps order[k] to image[k]; the target is (x sigma)(i) = x(sigma(i)).
      for (std::size_t a = 0; a < total; ++a) {
        std::vector<int> y = perms[a];
        for (std::size_t k = 0; k < order.size(); ++k) {
          y[order[k]] = perms[a][image[k]];
        }
        rates(a, index[detail::perm_code(y)]) += w;
      }
    }
  }
  for (std::size_t a = 0; a < total; ++a) {
    rates(a, a) = 0.0;
    rates(a, a) = -rates.row(a).sum();
  }

  Matrix d(total, total);
  std::vector<StatePair> pairs;
  for (std::size_t a = 0; a < total; ++a) {
    for (std::size_t b = 0; b < total; ++b) {
      d(a, b) = transposition_distance(perms[a], perms[b]);
      if (a < b && d(a, b) == 1.0) pairs.emplace_back(a, b);
    }
  }
  Generator l(space, std::move(rates));
  Vector pi = Vector::Constant(total, 1.0 / static_cast<double>(total));
  require_stationary(l, pi, "interchange process");
  return {std::move(l), ProbabilityVector(space, std::move(pi)),
          MetricSpace(space, std::move(d), MetricSpace::TrustedTag{}),
          GeneratingSet(std::move(pairs))};
}

/// max over i != j of P_{i,j}(T > t), T the meeting time of two independent
/// walks with conductances c_hat, from the product chain on [n]^2 with an
/// absorbing diagonal.
inline BoundCurve interchange_meeting_tail(const InterchangeSpec& spec,
                                           const std::vector<double>& times) {
  const Matrix chat = single_particle_conductances(spec);
  const std::size_t n = spec.n;
  std::vector<double> values;
  if (n < 2) {
    values.assign(times.size(), 0.0);
    return BoundCurve(times, std::move(values), BoundKind::kModelSpecific);
  }
  const std::size_t total = n * n;
  Matrix rates = Matrix::Zero(total, total);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t s = i * n + j;
      if (i == j) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i) continue;
        rates(s, k * n + j) += chat(i, k);
      }
      for (std::size_t k = 0; k < n; ++k) {
        if (k == j) continue;
        rates(s, i * n + k) += chat(j, k);
      }
      rates(s, s) = -rates.row(s).sum();
    }
  }
  std::vector<std::string> labels;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      labels.push_back(std::to_string(i) + "," + std::to_string(j));
    }
  }
  const Generator l(StateSpace(std::move(labels)), std::move(rates));
  for (double t : times) {
    const StochasticMatrix pt = semigroup_at(l, t);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        double met = 0.0;
        for (std::size_t k = 0; k < n; ++k) met += pt(i * n + j, k * n + k);
        worst = std::max(worst, 1.0 - met);
      }
    }
    values.push_back(std::clamp(worst, 0.0, 1.0));
  }
  return BoundCurve(times, std::move(values), BoundKind::kModelSpecific);
}

}  // namespace curvlab::models
