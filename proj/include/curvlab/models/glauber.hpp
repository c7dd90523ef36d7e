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

// Glauber dynamics for a law on S^n, and pairwise spin systems.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "curvlab/models/common.hpp"
#include "curvlab/models/exclusion.hpp"

namespace curvlab::models {

/// Target law on S^n given by nonnegative weights, indexed with site 0 most
/// significant (same order as the exclusion process). Weights need not be
/// normalized.
struct GlauberSpec {
  std::size_t n = 0;
  std::size_t q = 0;
  Vector weights;
};

/// psi(sigma, tau) is the interaction between x_i = sigma and x_j = tau.
struct PairInteraction {
  std::size_t i = 0;
  std::size_t j = 0;
  Matrix psi;
};

/// pi(x) proportional to exp(sum_{i<j} psi_ij(x_i, x_j)).
struct SpinSystem {
  std::size_t n = 0;
  std::size_t q = 0;
  std::vector<PairInteraction> pairs;
};

struct SpinInfluences {
  Matrix j;
  double norm = 0.0;  // (q - 1) max_i sum_j J_ij
};

namespace detail {

/// Dense psi_ij for all ordered pairs, extended by psi_ji(tau, sigma) =
/// psi_ij(sigma, tau); zero where no interaction is given.
inline std::vector<Matrix> interaction_table(const SpinSystem& sys) {
  require(sys.n >= 1 && sys.q >= 1, Errc::kInvalidArgument,
          "spin system needs n >= 1 sites and q >= 1 values");
  const std::size_t n = sys.n;
  const auto q = static_cast<Eigen::Index>(sys.q);
  std::vector<Matrix> table(n * n, Matrix::Zero(q, q));
  std::vector<char> given(n * n, 0);
  for (const auto& p : sys.pairs) {
    require(p.i < n && p.j < n, Errc::kInvalidArgument,
            "interaction site out of range");
    require(p.psi.rows() == q && p.psi.cols() == q, Errc::kDimensionMismatch,
            "interaction must be q x q");
    require(p.psi.allFinite(), Errc::kInvalidArgument,
            "interaction is not finite");
    if (p.i == p.j) {
      require(p.psi.isZero(0.0), Errc::kAsymmetricInteraction,
              "self-interaction psi_ii must vanish");
      continue;
    }
    const Matrix& fwd = p.psi;
    const Matrix back = p.psi.transpose();
    if (given[p.i * n + p.j]) {
      require((table[p.i * n + p.j] - fwd).cwiseAbs().maxCoeff() <= 1e-12,
              Errc::kAsymmetricInteraction,
              "inconsistent interactions for sites " + std::to_string(p.i) +
                  " and " + std::to_string(p.j));
      continue;
    }
    table[p.i * n + p.j] = fwd;
    table[p.j * n + p.i] = back;
    given[p.i * n + p.j] = given[p.j * n + p.i] = 1;
  }
  return table;
}

}  // namespace detail

inline SpinInfluences spin_influences(const SpinSystem& sys) {
  const auto table = detail::interaction_table(sys);
  const std::size_t n = sys.n;
  const auto q = static_cast<Eigen::Index>(sys.q);
  SpinInfluences out{Matrix::Zero(n, n), 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Matrix& psi = table[i * n + j];
      double best = 0.0;
      for (Eigen::Index tau = 0; tau < q; ++tau) {
        const double spread = psi.col(tau).maxCoeff() - psi.col(tau).minCoeff();
        best = std::max(best, spread);
      }
      out.j(i, j) = 0.5 * best;
    }
  }
  out.norm = static_cast<double>(sys.q - 1) * out.j.rowwise().sum().maxCoeff();
  return out;
}

/// Gibbs weights of a spin system, normalized.
inline GlauberSpec glauber_from_spins(const SpinSystem& sys) {
  const auto table = detail::interaction_table(sys);
  const std::size_t n = sys.n;
  require_within_cap(std::pow(static_cast<double>(sys.q), static_cast<double>(n)),
                     "spin system");
  const auto configs = detail::color_configs(n, sys.q);
  Vector energy(configs.size());
  for (std::size_t a = 0; a < configs.size(); ++a) {
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        e += table[i * n + j](configs[a][i], configs[a][j]);
      }
    }
    energy[a] = e;
  }
  const Vector w = (energy.array() - energy.maxCoeff()).exp().matrix();
  return {n, sys.q, w / w.sum()};
}

/// Product law with the same single-site marginal nu at every site.
inline GlauberSpec glauber_product(std::size_t n, const std::vector<double>& nu) {
  const auto configs = detail::color_configs(n, nu.size());
  Vector w(configs.size());
  for (std::size_t a = 0; a < configs.size(); ++a) {
    double p = 1.0;
    for (int v : configs[a]) p *= nu[v];
    w[a] = p;
  }
  return {n, nu.size(), w};
}

/// Glauber chain materialized on supp(pi) (in configuration order).
struct GlauberChain {
  StochasticMatrix p;
  ProbabilityVector pi;
  MetricSpace metric;
  GeneratingSet pairs;
  std::vector<std::vector<int>> configs;
};

namespace detail {

class Conditionals {
 public:
  explicit Conditionals(const GlauberSpec& spec) : spec_(spec) {
    const double expected =
        std::pow(static_cast<double>(spec.q), static_cast<double>(spec.n));
    require(spec.n >= 1 && spec.q >= 1, Errc::kInvalidArgument,
            "Glauber target needs n >= 1 and q >= 1");
    require(static_cast<double>(spec.weights.size()) == expected,
            Errc::kDimensionMismatch, "weights must have q^n entries");
    for (Eigen::Index a = 0; a < spec.weights.size(); ++a) {
      require(std::isfinite(spec.weights[a]) && spec.weights[a] >= 0.0,
              Errc::kInvalidArgument, "weights must be nonnegative");
    }
    require(spec.weights.sum() > 0.0, Errc::kInvalidArgument,
            "weights vanish identically");
    configs_ = color_configs(spec.n, spec.q);
  }

  const std::vector<std::vector<int>>& configs() const { return configs_; }

  std::size_t flip(std::size_t a, std::size_t i, int sigma) const {
    auto y = configs_[a];
    y[i] = sigma;
    return config_index(y, spec_.q);
  }

  /// pi_i(sigma | x) for configuration index a; x must have positive
  /// conditional mass at i.
  double operator()(std::size_t i, int sigma, std::size_t a) const {
    double total = 0.0;
    for (std::size_t s = 0; s < spec_.q; ++s) {
      total += spec_.weights[flip(a, i, static_cast<int>(s))];
    }
    return total > 0.0 ? spec_.weights[flip(a, i, sigma)] / total : 0.0;
  }

 private:
  const GlauberSpec& spec_;
  std::vector<std::vector<int>> configs_;
};

}  // namespace detail

inline GlauberChain build_glauber(const GlauberSpec& spec) {
  const detail::Conditionals cond(spec);
  const auto& configs = cond.configs();
  const std::size_t n = spec.n;
  const std::size_t total = configs.size();
  require_within_cap(static_cast<double>(total), "Glauber dynamics");

  std::vector<long> where(total, -1);
  std::vector<std::size_t> support;
  for (std::size_t a = 0; a < total; ++a) {
    if (spec.weights[a] > 0.0) {
      where[a] = static_cast<long>(support.size());
      support.push_back(a);
    }
  }
  const std::size_t m = support.size();
  std::vector<std::string> labels;
  std::vector<std::vector<int>> kept;
  for (std::size_t a : support) {
    labels.push_back(tuple_label(configs[a]));
    kept.push_back(configs[a]);
  }
  const StateSpace space(std::move(labels));

  Matrix p = Matrix::Zero(m, m);
  std::vector<StatePair> pairs;
  for (std::size_t u = 0; u < m; ++u) {
    const std::size_t a = support[u];
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t s = 0; s < spec.q; ++s) {
        const std::size_t b = cond.flip(a, i, static_cast<int>(s));
        if (where[b] < 0) continue;
        const auto v = static_cast<std::size_t>(where[b]);
        p(u, v) += cond(i, static_cast<int>(s), a) / static_cast<double>(n);
        if (u < v) pairs.emplace_back(u, v);
      }
    }
  }
  Matrix adj = p;
  require(curvlab::detail::strongly_connected(adj), Errc::kDisconnectedSupport,
          "support is not connected under single-coordinate changes");
  StochasticMatrix kernel(space, std::move(p));
  Vector pi(m);
  for (std::size_t u = 0; u < m; ++u) pi[u] = spec.weights[support[u]];
  pi /= pi.sum();
  MetricSpace metric = combinatorial_distance(kernel);
  return {std::move(kernel), ProbabilityVector(space, std::move(pi)),
          std::move(metric), GeneratingSet(std::move(pairs)), std::move(kept)};
}

struct WeakDependency {
  bool holds = true;
  double kappa = 0.0;
};

/// Checks pi_i(y_i | x) >= sum_{j != i} sum_{sigma != x_j}
/// (pi_j(sigma | y) - pi_j(sigma | x))_+ over every i and every ordered pair
/// x, y in the support differing exactly at i, and returns
/// (1/n) min {1 - sum_{j != i} sum_{sigma != x_j} |pi_j(sigma | y) - pi_j(sigma | x)|}.
inline WeakDependency glauber_weakdep(const GlauberSpec& spec) {
  const detail::Conditionals cond(spec);
  const std::size_t n = spec.n;
  const std::size_t total = cond.configs().size();
  WeakDependency out;
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < total; ++a) {
    if (spec.weights[a] <= 0.0) continue;
    const auto& x = cond.configs()[a];
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t s = 0; s < spec.q; ++s) {
        if (static_cast<int>(s) == x[i]) continue;
        const std::size_t b = cond.flip(a, i, static_cast<int>(s));
        if (spec.weights[b] <= 0.0) continue;
        double pos = 0.0;
        double abs = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i) continue;
          for (std::size_t sig = 0; sig < spec.q; ++sig) {
            if (static_cast<int>(sig) == x[j]) continue;
            const double diff = cond(j, static_cast<int>(sig), b) -
                                cond(j, static_cast<int>(sig), a);
            pos += std::max(diff, 0.0);
            abs += std::abs(diff);
          }
        }
        if (cond(i, static_cast<int>(s), a) < pos - 1e-12) out.holds = false;
        worst = std::min(worst, 1.0 - abs);
      }
    }
  }
  if (!std::isfinite(worst)) worst = 1.0;
  out.kappa = worst / static_cast<double>(n);
  return out;
}

/// Root in (0, 1) of eps = 1 / (1 + exp(2 eps / q)), by bisection to 1e-12.
inline double solve_epsilon_q(int q) {
  require(q >= 1, Errc::kInvalidArgument, "q must be a positive integer");
  auto f = [q](double e) {
    return e - 1.0 / (1.0 + std::exp(2.0 * e / static_cast<double>(q)));
  };
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace curvlab::models
