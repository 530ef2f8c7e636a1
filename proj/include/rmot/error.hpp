// Copyright 2026 The rmot Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RMOT_ERROR_HPP
#define RMOT_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace rmot {

enum class ErrorCode {
  EmptySupport,
  NonPositiveWeight,
  LengthMismatch,
  WeightSumMismatch,
  DimensionMismatch,
  IndexOutOfRange,
  NegativeCost,
  RejectionLimit,
  NonPositiveEpsilon,
  NegativeEpsilon,
  PositiveEpsilon,
  ZeroIteration,
  InsufficientSamples,
  ConfigInconsistent,
  NotConverged,
  WrongSize,
  EmptyInput,
  NotAtOptimum,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base exception for every failure raised by the library. The code lets
/// callers branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the iterative baselines when the iteration budget runs out.
class NotConverged : public Error {
 public:
  NotConverged(const std::string& what, double last_violation)
      : Error(ErrorCode::NotConverged, what), last_violation_(last_violation) {}

  double last_violation() const noexcept { return last_violation_; }

 private:
  double last_violation_;
};

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

}  // namespace rmot

#endif  // RMOT_ERROR_HPP
