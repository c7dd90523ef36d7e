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

// Transportation simplex (the network simplex specialized to the complete
// bipartite network) on a dense cost matrix.
//
// The basis is a spanning tree of m + n - 1 cells over the row and column
// nodes, seeded by the north-west corner rule. Each iteration prices every
// non-basic cell against the tree potentials (u_i + v_j = c_ij on basic
// cells), enters the most negative reduced cost and pivots around the unique
// tree cycle. After a long run of degenerate pivots the entering rule falls
// back to the first negative cell in row-major order (Bland), which rules
// out cycling. Optimality is cross-checked against the final potentials.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "curvlab/chain.hpp"

namespace curvlab {

struct TransportSolution {
  double cost = 0.0;
  Matrix plan;       // supply.size() x demand.size()
  Vector row_dual;   // u
  Vector col_dual;   // v, with u_i + v_j <= c_ij everywhere
  int pivots = 0;
};

namespace detail {

class TransportationSimplex {
 public:
  TransportationSimplex(const Vector& supply, const Vector& demand,
                        const Matrix& cost)
      : supply_(supply), demand_(demand), cost_(cost) {}

  TransportSolution solve() {
    collect_support();
    seed_northwest();

    const int m = static_cast<int>(rows_.size());
    const int n = static_cast<int>(cols_.size());
    const long cap = 50L * (m + n) * (m + n) + 1000;
    const double scale = std::max(1.0, cost_.cwiseAbs().maxCoeff());
    const double eps = 1e-12 * scale;

    int degenerate_run = 0;
    bool bland = false;
    for (long iter = 0;; ++iter) {
      require(iter < 4 * cap, Errc::kInvariantViolation,
              "transportation simplex failed to converge");
      compute_potentials();
      int er = -1, ec = -1;
      double best = -eps;
      for (int i = 0; i < m && !(bland && er >= 0); ++i) {
        for (int j = 0; j < n; ++j) {
          if (in_basis_[i * n + j]) continue;
          const double rc = c(i, j) - u_[i] - v_[j];
          if (rc < best) {
            best = rc;
            er = i;
            ec = j;
            if (bland) break;
          }
        }
      }
      if (er < 0) break;
      const double theta = pivot(er, ec);
      ++pivots_;
      degenerate_run = theta > 0.0 ? 0 : degenerate_run + 1;
      if (degenerate_run > m + n) bland = true;
      if (iter > cap) bland = true;
    }
    return finish(eps);
  }

 private:
  struct Cell {
    int row;
    int col;
    double flow;
  };

  double c(int i, int j) const { return cost_(rows_[i], cols_[j]); }

  void collect_support() {
    for (Eigen::Index i = 0; i < supply_.size(); ++i) {
      if (supply_[i] > 0.0) rows_.push_back(static_cast<int>(i));
    }
    for (Eigen::Index j = 0; j < demand_.size(); ++j) {
      if (demand_[j] > 0.0) cols_.push_back(static_cast<int>(j));
    }
    require(!rows_.empty() && !cols_.empty(), Errc::kInvalidArgument,
            "transport marginals carry no mass");
  }

  // Staircase of m + n - 1 cells from (0, 0) to (m - 1, n - 1); every step
  // advances exactly one index, so the cells form a spanning tree.
  void seed_northwest() {
    const int m = static_cast<int>(rows_.size());
    const int n = static_cast<int>(cols_.size());
    std::vector<double> rs(m), rd(n);
    for (int i = 0; i < m; ++i) rs[i] = supply_[rows_[i]];
    for (int j = 0; j < n; ++j) rd[j] = demand_[cols_[j]];
    in_basis_.assign(static_cast<std::size_t>(m) * n, 0);
    int i = 0, j = 0;
    while (true) {
      const double x = std::max(0.0, std::min(rs[i], rd[j]));
      basis_.push_back({i, j, x});
      in_basis_[i * n + j] = 1;
      rs[i] -= x;
      rd[j] -= x;
      if (i == m - 1 && j == n - 1) break;
      if (i == m - 1) {
        ++j;
      } else if (j == n - 1) {
        ++i;
      } else if (rs[i] <= rd[j]) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  // Node ids: rows 0..m-1, columns m..m+n-1.
  void build_adjacency() {
    const int m = static_cast<int>(rows_.size());
    const int n = static_cast<int>(cols_.size());
    adj_.assign(m + n, {});
    for (int k = 0; k < static_cast<int>(basis_.size()); ++k) {
      adj_[basis_[k].row].push_back(k);
      adj_[m + basis_[k].col].push_back(k);
    }
  }

  void compute_potentials() {
    const int m = static_cast<int>(rows_.size());
    const int n = static_cast<int>(cols_.size());
    build_adjacency();
    u_.assign(m, 0.0);
    v_.assign(n, 0.0);
    std::vector<char> seen(m + n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const int node = stack.back();
      stack.pop_back();
      for (int k : adj_[node]) {
        const Cell& cell = basis_[k];
        const int other = node < m ? m + cell.col : cell.row;
        if (seen[other]) continue;
        seen[other] = 1;
        if (node < m) {
          v_[cell.col] = c(cell.row, cell.col) - u_[cell.row];
        } else {
          u_[cell.row] = c(cell.row, cell.col) - v_[cell.col];
        }
        stack.push_back(other);
      }
    }
  }

  // Returns the step length theta.
  double pivot(int er, int ec) {
    const int m = static_cast<int>(rows_.size());
    const int n = static_cast<int>(cols_.size());
    // Tree path from row node er to column node m + ec.
    std::vector<int> parent_cell(m + n, -1);
    std::vector<int> parent_node(m + n, -1);
    std::vector<char> seen(m + n, 0);
    std::vector<int> queue{er};
    seen[er] = 1;
    const int target = m + ec;
    for (std::size_t head = 0; head < queue.size() && !seen[target]; ++head) {
      const int node = queue[head];
      for (int k : adj_[node]) {
        const Cell& cell = basis_[k];
        const int other = node < m ? m + cell.col : cell.row;
        if (seen[other]) continue;
        seen[other] = 1;
        parent_cell[other] = k;
        parent_node[other] = node;
        queue.push_back(other);
      }
    }
    require(seen[target], Errc::kInvariantViolation,
            "transportation basis is not a spanning tree");
    std::vector<int> path;  // basis cells from er towards the column
    for (int node = target; node != er; node = parent_node[node]) {
      path.push_back(parent_cell[node]);
    }
    std::reverse(path.begin(), path.end());

    // Entering cell gains theta; path cells alternate -, +, -, ...
    double theta = std::numeric_limits<double>::infinity();
    int leaving = -1;
    for (std::size_t p = 0; p < path.size(); p += 2) {
      const double f = basis_[path[p]].flow;
      if (f < theta) {
        theta = f;
        leaving = path[p];
      }
    }
    for (std::size_t p = 0; p < path.size(); ++p) {
      Cell& cell = basis_[path[p]];
      cell.flow += (p % 2 == 0) ? -theta : theta;
      if (cell.flow < 0.0) cell.flow = 0.0;
    }
    Cell& out = basis_[leaving];
    in_basis_[out.row * n + out.col] = 0;
    out = {er, ec, theta};
    in_basis_[er * n + ec] = 1;
    return theta;
  }

  TransportSolution finish(double eps) {
    const int m = static_cast<int>(rows_.size());
    const int n = static_cast<int>(cols_.size());
    compute_potentials();

    TransportSolution out;
    out.pivots = pivots_;
    out.plan = Matrix::Zero(supply_.size(), demand_.size());
    for (const Cell& cell : basis_) {
      out.plan(rows_[cell.row], cols_[cell.col]) += cell.flow;
      out.cost += cell.flow * c(cell.row, cell.col);
      require(std::abs(c(cell.row, cell.col) - u_[cell.row] - v_[cell.col]) <=
                  1e-9 * std::max(1.0, std::abs(c(cell.row, cell.col))),
              Errc::kInvariantViolation, "complementary slackness violated");
    }

    // Extend the duals to zero-mass rows and columns so that
    // u_i + v_j <= c_ij holds on the full matrix.
    const double inf = std::numeric_limits<double>::infinity();
    out.row_dual = Vector::Constant(supply_.size(), inf);
    out.col_dual = Vector::Constant(demand_.size(), inf);
    for (int i = 0; i < m; ++i) out.row_dual[rows_[i]] = u_[i];
    for (int j = 0; j < n; ++j) out.col_dual[cols_[j]] = v_[j];
    for (Eigen::Index i = 0; i < supply_.size(); ++i) {
      if (supply_[i] > 0.0) continue;
      double best = inf;
      for (int j = 0; j < n; ++j) best = std::min(best, cost_(i, cols_[j]) - v_[j]);
      out.row_dual[i] = best;
    }
    for (Eigen::Index j = 0; j < demand_.size(); ++j) {
      if (demand_[j] > 0.0) continue;
      double best = inf;
      for (Eigen::Index i = 0; i < supply_.size(); ++i)
        best = std::min(best, cost_(i, j) - out.row_dual[i]);
      out.col_dual[j] = best;
    }
    for (Eigen::Index i = 0; i < supply_.size(); ++i) {
      for (Eigen::Index j = 0; j < demand_.size(); ++j) {
        require(cost_(i, j) - out.row_dual[i] - out.col_dual[j] >= -10 * eps -
                    1e-9 * std::abs(cost_(i, j)),
                Errc::kInvariantViolation, "dual infeasible at optimum");
      }
    }
    return out;
  }

  const Vector& supply_;
  const Vector& demand_;
  const Matrix& cost_;
  std::vector<int> rows_;
  std::vector<int> cols_;
  std::vector<Cell> basis_;
  std::vector<char> in_basis_;
  std::vector<std::vector<int>> adj_;
  std::vector<double> u_;
  std::vector<double> v_;
  int pivots_ = 0;
};

}  // namespace detail

/// Minimum-cost plan moving `supply` onto `demand` (equal totals) under
/// `cost`. Only cells with positive supply and demand enter the basis.
inline TransportSolution solve_transportation(const Vector& supply,
                                              const Vector& demand,
                                              const Matrix& cost) {
  require(cost.rows() == supply.size() && cost.cols() == demand.size(),
          Errc::kDimensionMismatch, "cost matrix shape mismatch");
  require(std::abs(supply.sum() - demand.sum()) <=
              1e-9 * std::max(1.0, supply.sum()),
          Errc::kInvalidArgument, "supply and demand totals differ");
  return detail::TransportationSimplex(supply, demand, cost).solve();
}

}  // namespace curvlab
