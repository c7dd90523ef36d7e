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

#include <stdexcept>
#include <string>
#include <string_view>

namespace curvlab {

/// Failure categories raised by the library. Each operation documents which
/// of these it may raise.
enum class Errc {
  kInvalidArgument,
  kDimensionMismatch,
  kNotStochastic,
  kNotIrreducible,
  kStationaryMismatch,
  kNonFiniteTime,
  kBadEpsilon,
  kNotMetric,
  kNotConnected,
  kNonpositiveWeight,
  kEmptyGeneratingSet,
  kSupportViolation,
  kAtStationarity,
  kBadRates,
  kMonotonicityViolated,
  kSingularLaplacian,
  kTooLarge,
  kDisconnectedSupport,
  kAsymmetricInteraction,
  kInvariantViolation,
  kSchema,
};

inline constexpr std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kDimensionMismatch: return "DimensionMismatch";
    case Errc::kNotStochastic: return "NotStochastic";
    case Errc::kNotIrreducible: return "NotIrreducible";
    case Errc::kStationaryMismatch: return "StationaryMismatch";
    case Errc::kNonFiniteTime: return "NonFiniteTime";
    case Errc::kBadEpsilon: return "BadEpsilon";
    case Errc::kNotMetric: return "NotMetric";
    case Errc::kNotConnected: return "NotConnected";
    case Errc::kNonpositiveWeight: return "NonpositiveWeight";
    case Errc::kEmptyGeneratingSet: return "EmptyGeneratingSet";
    case Errc::kSupportViolation: return "SupportViolation";
    case Errc::kAtStationarity: return "AtStationarity";
    case Errc::kBadRates: return "BadRates";
    case Errc::kMonotonicityViolated: return "MonotonicityViolated";
    case Errc::kSingularLaplacian: return "SingularLaplacian";
    case Errc::kTooLarge: return "TooLarge";
    case Errc::kDisconnectedSupport: return "DisconnectedSupport";
    case Errc::kAsymmetricInteraction: return "AsymmetricInteraction";
    case Errc::kInvariantViolation: return "InvariantViolation";
    case Errc::kSchema: return "Schema";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, Errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace curvlab
