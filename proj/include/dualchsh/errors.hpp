// Copyright 2026 The dualchsh Authors
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

/**
 * @file
 * Error type shared by every dualchsh module.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dualchsh {

enum class ErrorCode {
    NotHermitian,
    DimMismatch,
    MissingSplit,
    NotSquare,
    NotQubit,
    NotTwoQubit,
    BlochNormExceeded,
    ProbabilityOutOfRange,
    InvalidState,
    InvalidEffect,
    InvalidObservable,
    InvalidPovm,
    DimTooSmall,
    TraceConditionViolated,
    NoConvergence,
    BudgetExceeded,
    UnsupportedMeasurement,
    EmptyCounts,
    WrongOutcomeCount,
    NotUnitary,
    InvalidArgument,
    ParseError,
};

constexpr auto to_string(ErrorCode code) -> std::string_view {
    switch (code) {
    case ErrorCode::NotHermitian:
        return "NotHermitian";
    case ErrorCode::DimMismatch:
        return "DimMismatch";
    case ErrorCode::MissingSplit:
        return "MissingSplit";
    case ErrorCode::NotSquare:
        return "NotSquare";
    case ErrorCode::NotQubit:
        return "NotQubit";
    case ErrorCode::NotTwoQubit:
        return "NotTwoQubit";
    case ErrorCode::BlochNormExceeded:
        return "BlochNormExceeded";
    case ErrorCode::ProbabilityOutOfRange:
        return "ProbabilityOutOfRange";
    case ErrorCode::InvalidState:
        return "InvalidState";
    case ErrorCode::InvalidEffect:
        return "InvalidEffect";
    case ErrorCode::InvalidObservable:
        return "InvalidObservable";
    case ErrorCode::InvalidPovm:
        return "InvalidPovm";
    case ErrorCode::DimTooSmall:
        return "DimTooSmall";
    case ErrorCode::TraceConditionViolated:
        return "TraceConditionViolated";
    case ErrorCode::NoConvergence:
        return "NoConvergence";
    case ErrorCode::BudgetExceeded:
        return "BudgetExceeded";
    case ErrorCode::UnsupportedMeasurement:
        return "UnsupportedMeasurement";
    case ErrorCode::EmptyCounts:
        return "EmptyCounts";
    case ErrorCode::WrongOutcomeCount:
        return "WrongOutcomeCount";
    case ErrorCode::NotUnitary:
        return "NotUnitary";
    case ErrorCode::InvalidArgument:
        return "InvalidArgument";
    case ErrorCode::ParseError:
        return "ParseError";
    }
    return "Unknown";
}

/// Exception carrying a machine-readable code next to the message.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message),
          code_(code) {}

    [[nodiscard]] auto code() const noexcept -> ErrorCode { return code_; }

  private:
    ErrorCode code_;
};

} // namespace dualchsh
