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

#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

#include "curvlab/error.hpp"

namespace curvlab {

/// Dinic's blocking-flow algorithm on real capacities. Residuals at or
/// below `kResidualFloor` are treated as saturated.
class MaxFlow {
 public:
  static constexpr double kResidualFloor = 1e-15;

  explicit MaxFlow(std::size_t nodes) : head_(nodes, -1) {}

  /// Returns the arc id; the paired reverse arc is id ^ 1.
  int add_arc(std::size_t from, std::size_t to, double capacity) {
    require(from < head_.size() && to < head_.size(), Errc::kInvalidArgument,
            "arc endpoint out of range");
    require(capacity >= 0.0, Errc::kInvalidArgument,
            "arc capacity must be nonnegative");
    const int id = static_cast<int>(arcs_.size());
    arcs_.push_back({static_cast<int>(to), head_[from], capacity, capacity});
    head_[from] = id;
    arcs_.push_back({static_cast<int>(from), head_[to], 0.0, 0.0});
    head_[to] = id + 1;
    return id;
  }

  double solve(std::size_t source, std::size_t sink) {
    require(source != sink, Errc::kInvalidArgument, "source equals sink");
    double total = 0.0;
    while (build_levels(static_cast<int>(source), static_cast<int>(sink))) {
      cursor_ = head_;
      while (true) {
        const double pushed =
            augment(static_cast<int>(source), static_cast<int>(sink),
                    std::numeric_limits<double>::infinity());
        if (pushed <= kResidualFloor) break;
        total += pushed;
      }
    }
    return total;
  }

  /// Flow currently carried by a forward arc.
  double flow(int arc) const {
    return std::max(0.0, arcs_[arc].capacity - arcs_[arc].residual);
  }

 private:
  struct Arc {
    int to;
    int next;
    double residual;
    double capacity;
  };

  bool build_levels(int source, int sink) {
    level_.assign(head_.size(), -1);
    std::vector<int> queue{source};
    level_[source] = 0;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const int x = queue[h];
      for (int a = head_[x]; a >= 0; a = arcs_[a].next) {
        if (arcs_[a].residual > kResidualFloor && level_[arcs_[a].to] < 0) {
          level_[arcs_[a].to] = level_[x] + 1;
          queue.push_back(arcs_[a].to);
        }
      }
    }
    return level_[sink] >= 0;
  }

  double augment(int x, int sink, double limit) {
    if (x == sink) return limit;
    for (int& a = cursor_[x]; a >= 0; a = arcs_[a].next) {
      Arc& arc = arcs_[a];
      if (arc.residual <= kResidualFloor || level_[arc.to] != level_[x] + 1)
        continue;
      const double pushed =
          augment(arc.to, sink, std::min(limit, arc.residual));
      if (pushed > kResidualFloor) {
        arc.residual -= pushed;
        arcs_[a ^ 1].residual += pushed;
        return pushed;
      }
    }
    return 0.0;
  }

  std::vector<int> head_;
  std::vector<int> cursor_;
  std::vector<int> level_;
  std::vector<Arc> arcs_;
};

}  // namespace curvlab
