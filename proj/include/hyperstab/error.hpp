/*
 * Copyright 2026 The Hyperstab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hyperstab {

enum class ErrorCode {
  kZeroDenominator,
  kImproperTransferFunction,
  kDegenerateInput,
  kEvaluationAtPole,
  kRepeatedAxisPole,
  kZeroNumerator,
  kPoleOnGrid,
  kPreconditionNotPR,
  kInvalidGrid,
  kInvalidSignal,
  kGridMismatch,
  kTimeOutOfRange,
  kDimensionMismatch,
  kInvalidParams,
  kDeclarationViolated,
  kAlgebraicLoopNoConvergence,
  kGradeUnsupported,
  kInvalidScenario,
  kSchemaError,
  kParseError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kZeroDenominator: return "ZeroDenominator";
    case ErrorCode::kImproperTransferFunction: return "ImproperTransferFunction";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kEvaluationAtPole: return "EvaluationAtPole";
    case ErrorCode::kRepeatedAxisPole: return "RepeatedAxisPole";
    case ErrorCode::kZeroNumerator: return "ZeroNumerator";
    case ErrorCode::kPoleOnGrid: return "PoleOnGrid";
    case ErrorCode::kPreconditionNotPR: return "PreconditionNotPR";
    case ErrorCode::kInvalidGrid: return "InvalidGrid";
    case ErrorCode::kInvalidSignal: return "InvalidSignal";
    case ErrorCode::kGridMismatch: return "GridMismatch";
    case ErrorCode::kTimeOutOfRange: return "TimeOutOfRange";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kDeclarationViolated: return "DeclarationViolated";
    case ErrorCode::kAlgebraicLoopNoConvergence: return "AlgebraicLoopNoConvergence";
    case ErrorCode::kGradeUnsupported: return "GradeUnsupported";
    case ErrorCode::kInvalidScenario: return "InvalidScenario";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure in the library surfaces as this exception; `code()` is the
/// machine-readable category, `what()` carries the human context.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hyperstab
