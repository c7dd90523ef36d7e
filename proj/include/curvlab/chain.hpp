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

// Finite Markov kernels: state spaces, stochastic matrices, generators,
// stationary laws, time reversal and the continuous-time semigroup.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "curvlab/error.hpp"

namespace curvlab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace tol {
inline constexpr double kRowSum = 1e-12;
inline constexpr double kRenormalize = 1e-9;
inline constexpr double kGeneratorRowSum = 1e-10;
inline constexpr double kStationary = 1e-10;
inline constexpr double kSemigroupTail = 1e-13;
}  // namespace tol

/// Labeled finite state space. Copies share the label table.
class StateSpace {
 public:
  explicit StateSpace(std::vector<std::string> labels) {
    require(!labels.empty(), Errc::kInvalidArgument,
            "state space must contain at least one state");
    auto table = std::make_shared<Table>();
    table->labels = std::move(labels);
    for (std::size_t i = 0; i < table->labels.size(); ++i) {
      const bool fresh = table->index.emplace(table->labels[i], i).second;
      require(fresh, Errc::kInvalidArgument,
              "duplicate state label '" + table->labels[i] + "'");
    }
    table_ = std::move(table);
  }

  /// States labeled "0", "1", ..., "n-1".
  static StateSpace indexed(std::size_t n) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    return StateSpace(std::move(labels));
  }

  std::size_t size() const { return table_->labels.size(); }
  const std::string& label(std::size_t i) const { return table_->labels.at(i); }
  const std::vector<std::string>& labels() const { return table_->labels; }

  std::optional<std::size_t> index_of(std::string_view label) const {
    auto it = table_->index.find(std::string(label));
    if (it == table_->index.end()) return std::nullopt;
    return it->second;
  }

  friend bool operator==(const StateSpace& a, const StateSpace& b) {
    return a.table_ == b.table_ || a.table_->labels == b.table_->labels;
  }

 private:
  struct Table {
    std::vector<std::string> labels;
    std::unordered_map<std::string, std::size_t> index;
  };
  std::shared_ptr<const Table> table_;
};

namespace detail {

inline void require_square(const Matrix& m, std::size_t n, const char* what) {
  require(m.rows() == static_cast<Eigen::Index>(n) &&
              m.cols() == static_cast<Eigen::Index>(n),
          Errc::kDimensionMismatch,
          std::string(what) + " must be " + std::to_string(n) + "x" +
              std::to_string(n));
}

/// Strong connectivity of the directed graph x -> y iff adj(x, y) > 0,
/// ignoring the diagonal.
inline bool strongly_connected(const Matrix& adj) {
  const Eigen::Index n = adj.rows();
  if (n <= 1) return true;
  auto reaches_all = [&](bool transpose) {
    std::vector<char> seen(n, 0);
    std::vector<Eigen::Index> stack{0};
    seen[0] = 1;
    Eigen::Index count = 1;
    while (!stack.empty()) {
      const Eigen::Index x = stack.back();
      stack.pop_back();
      for (Eigen::Index y = 0; y < n; ++y) {
        const double w = transpose ? adj(y, x) : adj(x, y);
        if (y != x && w > 0.0 && !seen[y]) {
          seen[y] = 1;
          ++count;
          stack.push_back(y);
        }
      }
    }
    return count == n;
  };
  return reaches_all(false) && reaches_all(true);
}

}  // namespace detail

/// Probability law on a StateSpace.
class ProbabilityVector {
 public:
  ProbabilityVector(StateSpace space, Vector weights)
      : space_(std::move(space)), weights_(std::move(weights)) {
    require(weights_.size() == static_cast<Eigen::Index>(space_.size()),
            Errc::kDimensionMismatch, "probability vector length mismatch");
    for (Eigen::Index i = 0; i < weights_.size(); ++i) {
      require(std::isfinite(weights_[i]) && weights_[i] >= 0.0,
              Errc::kInvalidArgument,
              "probability weight at '" + space_.label(i) +
                  "' is negative or not finite");
    }
    const double total = weights_.sum();
    const double dev = std::abs(total - 1.0);
    require(dev <= tol::kRenormalize, Errc::kInvalidArgument,
            "probability weights sum to " + std::to_string(total));
    if (dev > 0.0) weights_ /= total;
  }

  static ProbabilityVector dirac(const StateSpace& space, std::size_t x) {
    Vector w = Vector::Zero(space.size());
    w[x] = 1.0;
    return ProbabilityVector(space, std::move(w));
  }

  static ProbabilityVector uniform(const StateSpace& space) {
    const auto n = static_cast<Eigen::Index>(space.size());
    return ProbabilityVector(space, Vector::Constant(n, 1.0 / n));
  }

  const StateSpace& space() const { return space_; }
  const Vector& weights() const { return weights_; }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::size_t size() const { return space_.size(); }

 private:
  StateSpace space_;
  Vector weights_;
};

/// Row-stochastic kernel. Rows deviating from 1 by at most 1e-9 are
/// renormalized; anything further is rejected.
class StochasticMatrix {
 public:
  StochasticMatrix(StateSpace space, Matrix entries)
      : space_(std::move(space)), entries_(std::move(entries)) {
    const std::size_t n = space_.size();
    detail::require_square(entries_, n, "stochastic matrix");
    for (std::size_t x = 0; x < n; ++x) {
      double total = 0.0;
      for (std::size_t y = 0; y < n; ++y) {
        double& v = entries_(x, y);
        require(std::isfinite(v), Errc::kNotStochastic,
                "entry (" + space_.label(x) + "," + space_.label(y) +
                    ") is not finite");
        if (v < 0.0 && v > -1e-15) v = 0.0;
        require(v >= 0.0, Errc::kNotStochastic,
                "entry (" + space_.label(x) + "," + space_.label(y) +
                    ") is negative");
        total += v;
      }
      const double dev = std::abs(total - 1.0);
      require(dev <= tol::kRenormalize, Errc::kNotStochastic,
              "row '" + space_.label(x) + "' sums to " +
                  std::to_string(total));
      if (dev > 0.0) entries_.row(x) /= total;
    }
    irreducible_ = detail::strongly_connected(entries_);
  }

  static StochasticMatrix identity(const StateSpace& space) {
    const auto n = static_cast<Eigen::Index>(space.size());
    return StochasticMatrix(space, Matrix::Identity(n, n));
  }

  /// Every row equal to `law`.
  static StochasticMatrix rank_one(const ProbabilityVector& law) {
    const auto n = static_cast<Eigen::Index>(law.size());
    Matrix m(n, n);
    for (Eigen::Index x = 0; x < n; ++x) m.row(x) = law.weights().transpose();
    return StochasticMatrix(law.space(), std::move(m));
  }

  const StateSpace& space() const { return space_; }
  const Matrix& entries() const { return entries_; }
  double operator()(std::size_t x, std::size_t y) const {
    return entries_(x, y);
  }
  std::size_t size() const { return space_.size(); }
  bool irreducible() const { return irreducible_; }

  ProbabilityVector row(std::size_t x) const {
    return ProbabilityVector(space_, entries_.row(x).transpose());
  }

  /// Pushforward mu P.
  ProbabilityVector push(const ProbabilityVector& mu) const {
    require(mu.space() == space_, Errc::kDimensionMismatch,
            "measure lives on a different state space");
    return ProbabilityVector(space_, entries_.transpose() * mu.weights());
  }

  /// (P f)(x) = sum_y P(x, y) f(y).
  Vector apply(const Vector& f) const {
    require(f.size() == entries_.rows(), Errc::kDimensionMismatch,
            "function length mismatch");
    return entries_ * f;
  }

  friend StochasticMatrix operator*(const StochasticMatrix& a,
                                    const StochasticMatrix& b) {
    require(a.space_ == b.space_, Errc::kDimensionMismatch,
            "kernels live on different state spaces");
    return StochasticMatrix(a.space_, a.entries_ * b.entries_);
  }

 private:
  StateSpace space_;
  Matrix entries_;
  bool irreducible_ = false;
};

/// Continuous-time generator: nonnegative off-diagonal rates, zero row sums.
class Generator {
 public:
  Generator(StateSpace space, Matrix rates)
      : space_(std::move(space)), rates_(std::move(rates)) {
    const std::size_t n = space_.size();
    detail::require_square(rates_, n, "generator");
    for (std::size_t x = 0; x < n; ++x) {
      double off = 0.0;
      for (std::size_t y = 0; y < n; ++y) {
        require(std::isfinite(rates_(x, y)), Errc::kInvalidArgument,
                "generator entry is not finite");
        if (y == x) continue;
        require(rates_(x, y) >= 0.0, Errc::kInvalidArgument,
                "negative rate from '" + space_.label(x) + "' to '" +
                    space_.label(y) + "'");
        off += rates_(x, y);
      }
      const double dev = std::abs(off + rates_(x, x));
      require(dev <= tol::kGeneratorRowSum * std::max(1.0, off),
              Errc::kInvalidArgument,
              "generator row '" + space_.label(x) + "' does not sum to 0");
      rates_(x, x) = -off;
    }
  }

  /// L = P - I.
  static Generator from_kernel(const StochasticMatrix& p) {
    const auto n = static_cast<Eigen::Index>(p.size());
    return Generator(p.space(), p.entries() - Matrix::Identity(n, n));
  }

  const StateSpace& space() const { return space_; }
  const Matrix& rates() const { return rates_; }
  std::size_t size() const { return space_.size(); }

  /// Largest total jump rate, max_x |L(x, x)|.
  double max_rate() const {
    return rates_.size() == 0 ? 0.0 : (-rates_.diagonal()).maxCoeff();
  }

  bool irreducible() const { return detail::strongly_connected(rates_); }

  /// Uniformized kernel I + L / q, stochastic whenever q >= max_rate().
  StochasticMatrix uniformized(double q) const {
    require(q > 0.0 && q >= max_rate(), Errc::kInvalidArgument,
            "uniformization rate below the maximal jump rate");
    const auto n = static_cast<Eigen::Index>(size());
    return StochasticMatrix(space_, Matrix::Identity(n, n) + rates_ / q);
  }

 private:
  StateSpace space_;
  Matrix rates_;
};

namespace detail {

/// Solves pi A = 0, sum(pi) = 1 for a rank-(n-1) matrix A whose rows sum
/// to zero (A = P - I or a generator).
inline Vector solve_left_null(const Matrix& a) {
  const Eigen::Index n = a.rows();
  Matrix system = a.transpose();
  system.row(n - 1).setOnes();
  Vector rhs = Vector::Zero(n);
  rhs[n - 1] = 1.0;
  Vector pi = system.fullPivLu().solve(rhs);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (pi[i] < 0.0 && pi[i] > -1e-14) pi[i] = 0.0;
  }
  return pi / pi.sum();
}

}  // namespace detail

/// Unique invariant law of an irreducible kernel, by a dense linear solve.
inline ProbabilityVector stationary_distribution(const StochasticMatrix& p) {
  require(p.irreducible(), Errc::kNotIrreducible,
          "support graph is not strongly connected");
  const auto n = static_cast<Eigen::Index>(p.size());
  Vector pi = detail::solve_left_null(p.entries() - Matrix::Identity(n, n));
  for (Eigen::Index i = 0; i < n; ++i) {
    require(pi[i] > 0.0, Errc::kInvariantViolation,
            "stationary solve produced a non-positive weight");
  }
  const double residual = (pi.transpose() * p.entries() - pi.transpose())
                              .cwiseAbs()
                              .maxCoeff();
  require(residual <= tol::kStationary, Errc::kInvariantViolation,
          "stationary residual " + std::to_string(residual));
  return ProbabilityVector(p.space(), std::move(pi));
}

/// Invariant law of an irreducible generator (pi L = 0).
inline ProbabilityVector stationary_distribution(const Generator& l) {
  require(l.irreducible(), Errc::kNotIrreducible,
          "generator support graph is not strongly connected");
  Vector pi = detail::solve_left_null(l.rates());
  for (Eigen::Index i = 0; i < pi.size(); ++i) {
    require(pi[i] > 0.0, Errc::kInvariantViolation,
            "stationary solve produced a non-positive weight");
  }
  const double scale = std::max(1.0, l.max_rate());
  const double residual =
      (pi.transpose() * l.rates()).cwiseAbs().maxCoeff() / scale;
  require(residual <= tol::kStationary, Errc::kInvariantViolation,
          "stationary residual " + std::to_string(residual));
  return ProbabilityVector(l.space(), std::move(pi));
}

/// Time reversal in L^2(pi): P*(x, y) = pi(y) P(y, x) / pi(x).
inline StochasticMatrix adjoint(const StochasticMatrix& p,
                                const ProbabilityVector& pi) {
  require(pi.space() == p.space(), Errc::kDimensionMismatch,
          "stationary law lives on a different state space");
  const Vector& w = pi.weights();
  const double residual =
      (w.transpose() * p.entries() - w.transpose()).cwiseAbs().maxCoeff();
  require(residual <= tol::kStationary, Errc::kStationaryMismatch,
          "pi P differs from pi by " + std::to_string(residual));
  const auto n = static_cast<Eigen::Index>(p.size());
  Matrix star(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    require(w[x] > 0.0, Errc::kStationaryMismatch,
            "stationary law must be strictly positive");
    for (Eigen::Index y = 0; y < n; ++y) {
      star(x, y) = w[y] * p.entries()(y, x) / w[x];
    }
  }
  return StochasticMatrix(p.space(), std::move(star));
}

/// Time reversal of a generator: L*(x, y) = pi(y) L(y, x) / pi(x).
inline Generator adjoint(const Generator& l, const ProbabilityVector& pi) {
  require(pi.space() == l.space(), Errc::kDimensionMismatch,
          "stationary law lives on a different state space");
  const Vector& w = pi.weights();
  const double scale = std::max(1.0, l.max_rate());
  const double residual =
      (w.transpose() * l.rates()).cwiseAbs().maxCoeff() / scale;
  require(residual <= tol::kStationary, Errc::kStationaryMismatch,
          "pi L differs from 0 by " + std::to_string(residual));
  const auto n = static_cast<Eigen::Index>(l.size());
  Matrix star(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    require(w[x] > 0.0, Errc::kStationaryMismatch,
            "stationary law must be strictly positive");
    for (Eigen::Index y = 0; y < n; ++y) {
      star(x, y) = w[y] * l.rates()(y, x) / w[x];
    }
  }
  return Generator(l.space(), std::move(star));
}

/// e^{tL} by uniformization. The horizon is split into 2^k pieces of
/// Poisson mean at most 8; each piece sums Poisson-weighted powers of the
/// uniformized kernel until the neglected mass drops below 1e-13, then the
/// pieces are squared back together. All arithmetic stays nonnegative.
inline StochasticMatrix semigroup_at(const Generator& l, double t) {
  require(std::isfinite(t), Errc::kNonFiniteTime, "time must be finite");
  require(t >= 0.0, Errc::kInvalidArgument, "time must be nonnegative");
  const auto n = static_cast<Eigen::Index>(l.size());
  const double q = l.max_rate();
  if (t == 0.0 || q == 0.0) return StochasticMatrix::identity(l.space());

  const Matrix k = Matrix::Identity(n, n) + l.rates() / q;
  Matrix kernel = k.cwiseMax(0.0);

  int squarings = 0;
  double mean = q * t;
  while (mean > 8.0) {
    mean /= 2.0;
    ++squarings;
  }

  Matrix power = Matrix::Identity(n, n);
  double weight = std::exp(-mean);
  Matrix acc = weight * power;
  double mass = weight;
  for (int j = 1; 1.0 - mass >= tol::kSemigroupTail && j < 10000; ++j) {
    power = power * kernel;
    weight *= mean / j;
    acc += weight * power;
    mass += weight;
  }
  acc /= mass;
  for (int s = 0; s < squarings; ++s) acc = acc * acc;
  return StochasticMatrix(l.space(), std::move(acc));
}

/// P_eps(x, y) = (1 - eps) P(x, y) + eps pi(y).
inline StochasticMatrix perturb(const StochasticMatrix& p,
                                const ProbabilityVector& pi, double eps) {
  require(eps > 0.0 && eps < 1.0, Errc::kBadEpsilon,
          "epsilon must lie in (0, 1)");
  require(pi.space() == p.space(), Errc::kDimensionMismatch,
          "law lives on a different state space");
  const auto n = static_cast<Eigen::Index>(p.size());
  Matrix out = (1.0 - eps) * p.entries();
  for (Eigen::Index x = 0; x < n; ++x) {
    out.row(x) += eps * pi.weights().transpose();
  }
  return StochasticMatrix(p.space(), std::move(out));
}

}  // namespace curvlab
