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

// Relative entropy, one-step entropy contraction and its optimal constant.

#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "curvlab/chain.hpp"

namespace curvlab {

namespace tol {
inline constexpr double kAtStationarity = 1e-14;
inline constexpr double kLogFloor = 1e-300;
}  // namespace tol

namespace detail {

/// r log r - r + 1, by its Taylor series around r = 1 where the closed form
/// cancels.
inline double kl_term(double r) {
  const double u = r - 1.0;
  if (std::abs(u) < 1e-2) {
    double power = u * u;
    double sum = 0.0;
    for (int k = 2; k < 10; ++k) {
      sum += power / static_cast<double>(k * (k - 1));
      power *= -u;
    }
    return sum;
  }
  return r > 0.0 ? r * std::log(r) - u : 1.0;
}

}  // namespace detail

/// sum_x mu(x) log(mu(x) / pi(x)) with 0 log 0 = 0, evaluated as
/// sum_x pi(x) phi(mu(x) / pi(x)), phi(r) = r log r - r + 1, whose terms are
/// nonnegative; near pi this keeps full relative accuracy.
inline double relative_entropy(const Vector& mu, const Vector& pi) {
  require(mu.size() == pi.size(), Errc::kDimensionMismatch,
          "relative entropy of vectors of different length");
  double h = 0.0;
  for (Eigen::Index x = 0; x < mu.size(); ++x) {
    if (pi[x] <= 0.0) {
      require(mu[x] <= 0.0, Errc::kSupportViolation,
              "reference law vanishes where the measure does not");
      continue;
    }
    h += pi[x] * detail::kl_term(std::max(mu[x], 0.0) / pi[x]);
  }
  return h;
}

inline double relative_entropy(const ProbabilityVector& mu,
                               const ProbabilityVector& pi) {
  require(mu.space() == pi.space(), Errc::kDimensionMismatch,
          "laws live on different state spaces");
  return relative_entropy(mu.weights(), pi.weights());
}

/// H(mu P | pi) / H(mu | pi).
inline double contraction_ratio(const ProbabilityVector& mu,
                                const StochasticMatrix& p,
                                const ProbabilityVector& pi) {
  const double h0 = relative_entropy(mu, pi);
  require(h0 >= tol::kAtStationarity, Errc::kAtStationarity,
          "measure is at stationarity");
  return relative_entropy(p.push(mu), pi) / h0;
}

/// Second-largest eigenvalue of P P* on L^2(pi), read off the symmetric
/// matrix A A^T with A = D^{1/2} P D^{-1/2}. Returns 0 on a single state.
inline double lambda2_ppstar(const StochasticMatrix& p) {
  const ProbabilityVector pi = stationary_distribution(p);
  const auto n = static_cast<Eigen::Index>(p.size());
  if (n == 1) return 0.0;
  const Vector root = pi.weights().cwiseSqrt();
  const Matrix a = root.asDiagonal() * p.entries() * root.cwiseInverse().asDiagonal();
  const Matrix sym = a * a.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  double l2 = solver.eigenvalues()[n - 2];  // ascending order
  if (l2 < 0.0 && l2 > -1e-10) l2 = 0.0;
  if (l2 > 1.0 && l2 < 1.0 + 1e-10) l2 = 1.0;
  return l2;
}

struct AlphaEstimate {
  /// 1 - max(best ratio found, lambda2). Ascent can miss the global
  /// maximum of the ratio, so this is an upper estimate of the optimal
  /// constant up to local maxima.
  double alpha_hat = 1.0;
  /// Best measure found; empty when the near-pi value lambda2 dominates.
  std::optional<ProbabilityVector> maximizer;
  double best_ratio = 0.0;
  double lambda2 = 0.0;
  int n_starts = 0;
  /// Fixed-point condition (P log P* f)(x) = (1 - alpha) log f(x) at the
  /// maximizer, within tol on its support and as -inf off it.
  bool converged = false;
  double first_order_residual = 0.0;
};

namespace detail {

/// Euclidean projection onto the probability simplex (sort-based).
inline Vector project_to_simplex(const Vector& y) {
  const Eigen::Index n = y.size();
  std::vector<double> u(y.data(), y.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0;
  double shift = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    cum += u[j];
    const double candidate = (1.0 - cum) / static_cast<double>(j + 1);
    if (u[j] + candidate > 0.0) shift = candidate;
  }
  Vector x = (y.array() + shift).max(0.0).matrix();
  return x / x.sum();
}

class RatioAscent {
 public:
  RatioAscent(const StochasticMatrix& p, const Vector& pi)
      : p_(p.entries()), pi_(pi) {}

  struct Eval {
    double h0 = 0.0;
    double ratio = 0.0;
  };

  Eval eval(const Vector& mu) const {
    Eval e;
    e.h0 = relative_entropy(mu, pi_);
    if (e.h0 < tol::kAtStationarity) return e;
    const Vector pushed = p_.transpose() * mu;
    e.ratio = relative_entropy(pushed, pi_) / e.h0;
    return e;
  }

  /// Unnormalized ascent direction (P log P* f) - ratio * log f, the
  /// numerator of the directional derivative toward each Dirac mass.
  Vector direction(const Vector& mu, double ratio) const {
    const Vector pushed = p_.transpose() * mu;
    Vector log_g(mu.size()), log_f(mu.size());
    for (Eigen::Index y = 0; y < mu.size(); ++y) {
      log_g[y] = std::log(std::max(pushed[y], tol::kLogFloor) / pi_[y]);
      log_f[y] = std::log(std::max(mu[y], tol::kLogFloor) / pi_[y]);
    }
    return p_ * log_g - ratio * log_f;
  }

  struct Run {
    Vector mu;
    double ratio = 0.0;
    bool near_pi = false;
  };

  Run climb(Vector mu, int max_iters) const {
    Eval cur = eval(mu);
    if (cur.h0 < tol::kAtStationarity) return {mu, 0.0, true};
    double step = -1.0;
    int flat = 0;
    for (int it = 0; it < max_iters; ++it) {
      Vector g = direction(mu, cur.ratio) / cur.h0;
      g.array() -= g.mean();
      const double gmax = g.cwiseAbs().maxCoeff();
      if (!(gmax > 0.0) || !std::isfinite(gmax)) break;
      if (step <= 0.0) step = 0.25 / gmax;
      step = std::min(step * 2.0, 1.0 / gmax);
      bool moved = false;
      for (int bt = 0; bt < 80; ++bt, step *= 0.5) {
        const Vector cand = project_to_simplex(mu + step * g);
        const Eval next = eval(cand);
        if (next.h0 < tol::kAtStationarity) continue;
        const double gain = g.dot(cand - mu);
        if (next.ratio >= cur.ratio + 1e-4 * gain && next.ratio >= cur.ratio) {
          const double delta = (cand - mu).cwiseAbs().maxCoeff();
          const double improvement = next.ratio - cur.ratio;
          mu = cand;
          cur = next;
          moved = true;
          flat = (improvement < 1e-15 && delta < 1e-13) ? flat + 1 : 0;
          break;
        }
      }
      if (!moved || flat >= 3) break;
      if (cur.h0 < 1e-12) return {mu, cur.ratio, true};
    }
    return {mu, cur.ratio, false};
  }

 private:
  const Matrix& p_;
  const Vector& pi_;
};

}  // namespace detail

/// Multi-start projected-gradient ascent of mu -> H(mu P | pi) / H(mu | pi)
/// over the simplex. Starts are every Dirac mass plus max(starts - N, 8)
/// Dirichlet(1, ..., 1) draws seeded by `seed`; the near-pi regime is
/// covered analytically by lambda2_ppstar.
inline AlphaEstimate estimate_alpha(const StochasticMatrix& p, int starts,
                                    double tol,
                                    std::uint64_t seed = 0x9e3779b97f4a7c15ULL,
                                    int max_iters = 4000) {
  require(starts >= 1, Errc::kInvalidArgument, "need at least one start");
  const ProbabilityVector pi = stationary_distribution(p);
  const auto n = static_cast<Eigen::Index>(p.size());
  AlphaEstimate est;
  est.lambda2 = lambda2_ppstar(p);
  if (n == 1) {
    est.alpha_hat = 1.0;
    est.converged = true;
    return est;
  }

  std::vector<Vector> seeds;
  for (Eigen::Index x = 0; x < n; ++x) {
    Vector dirac = Vector::Zero(n);
    dirac[x] = 1.0;
    seeds.push_back(std::move(dirac));
  }
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  const int draws = std::max(starts - static_cast<int>(n), 8);
  for (int k = 0; k < draws; ++k) {
    Vector w(n);
    for (Eigen::Index x = 0; x < n; ++x) w[x] = expo(rng);
    seeds.push_back(w / w.sum());
  }
  est.n_starts = static_cast<int>(seeds.size());

  detail::RatioAscent ascent(p, pi.weights());
  Vector best_mu;
  double best = -1.0;
  for (const Vector& start : seeds) {
    auto run = ascent.climb(start, max_iters);
    if (run.near_pi) continue;
    // Re-launch from the face the run ended on, lifted off the boundary.
    if (run.mu.minCoeff() < 1e-12) {
      Vector lifted = run.mu.cwiseMax(1e-6);
      auto again = ascent.climb(lifted / lifted.sum(), max_iters);
      if (!again.near_pi && again.ratio > run.ratio) run = std::move(again);
    }
    if (run.ratio > best) {
      best = run.ratio;
      best_mu = run.mu;
    }
  }

  est.best_ratio = std::max(best, 0.0);
  est.alpha_hat = 1.0 - std::max(est.best_ratio, est.lambda2);
  if (best < 0.0 || est.lambda2 >= est.best_ratio) {
    est.converged = true;
    return est;
  }

  // First-order check at the maximizer.
  const Vector& w = pi.weights();
  const Vector pushed = p.entries().transpose() * best_mu;
  double residual = 0.0;
  bool off_support_ok = true;
  Vector lhs(n);
  for (Eigen::Index x = 0; x < n; ++x) {
    double acc = 0.0;
    bool minus_inf = false;
    for (Eigen::Index y = 0; y < n; ++y) {
      if (p(x, y) <= 0.0) continue;
      if (pushed[y] <= 0.0) {
        minus_inf = true;
        break;
      }
      acc += p(x, y) * std::log(pushed[y] / w[y]);
    }
    if (best_mu[x] > 1e-12) {
      if (minus_inf) {
        residual = std::numeric_limits<double>::infinity();
      } else {
        residual = std::max(
            residual, std::abs(acc - est.best_ratio * std::log(best_mu[x] / w[x])));
      }
    } else if (!minus_inf) {
      off_support_ok = false;
    }
  }
  est.first_order_residual = residual;
  est.converged = off_support_ok && residual <= tol;
  est.maximizer = ProbabilityVector(p.space(), best_mu);
  return est;
}

struct EntropyCurve {
  std::vector<double> times;
  std::vector<double> values;  // H(mu0 P_t | pi)
};

/// Exact H(mu0 P_t | pi) along the semigroup of an irreducible generator.
inline EntropyCurve entropy_decay_curve(const Generator& l,
                                        const ProbabilityVector& mu0,
                                        const std::vector<double>& times) {
  require(std::is_sorted(times.begin(), times.end()), Errc::kInvalidArgument,
          "times must be sorted");
  const ProbabilityVector pi = stationary_distribution(l);
  EntropyCurve curve;
  curve.times = times;
  curve.values.reserve(times.size());
  for (double t : times) {
    const StochasticMatrix pt = semigroup_at(l, t);
    curve.values.push_back(relative_entropy(pt.push(mu0), pi));
  }
  return curve;
}

}  // namespace curvlab
