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

#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <vector>

#include "curvlab/chain.hpp"
#include "curvlab/metric.hpp"

namespace curvlab::models {

inline constexpr std::size_t kDefaultStateCap = 20000;

/// Dense state-count limit; CURVLAB_STATE_CAP overrides the default.
inline std::size_t state_cap() {
  if (const char* env = std::getenv("CURVLAB_STATE_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultStateCap;
}

inline void require_within_cap(double states, const std::string& what) {
  const std::size_t cap = state_cap();
  require(states <= static_cast<double>(cap), Errc::kTooLarge,
          what + " has " + std::to_string(static_cast<long long>(states)) +
              " states, above the cap of " + std::to_string(cap));
}

/// A continuous-time model materialized densely, with the metric and the
/// generating pairs under which its coupling arguments are made.
struct ModelInstance {
  Generator generator;
  ProbabilityVector pi;
  MetricSpace metric;
  GeneratingSet pairs;
};

/// Compact label for a tuple of small integers: "012" when every entry is a
/// single digit, "0,10,2" otherwise.
inline std::string tuple_label(const std::vector<int>& values, int offset = 0) {
  bool digits = true;
  for (int v : values) digits = digits && (v + offset) >= 0 && (v + offset) <= 9;
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!digits && i > 0) out += ',';
    out += std::to_string(values[i] + offset);
  }
  return out;
}

/// Checks pi L = 0 within 1e-10 (scaled by the largest rate).
inline void require_stationary(const Generator& l, const Vector& pi,
                               const std::string& what) {
  const double scale = std::max(1.0, l.max_rate());
  const double residual =
      (pi.transpose() * l.rates()).cwiseAbs().maxCoeff() / scale;
  require(residual <= tol::kStationary, Errc::kInvariantViolation,
          what + ": closed-form law is not stationary (residual " +
              std::to_string(residual) + ")");
}

}  // namespace curvlab::models
