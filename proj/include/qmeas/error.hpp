// Copyright 2026 The qmeas Authors.
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

namespace qmeas {

enum class ErrorCode {
    // linear algebra
    NotHermitian,
    NumericalFailure,
    // object validation
    ZeroVector,
    NotNormalized,
    DimensionMismatch,
    NegativeProbability,
    IndexOutOfRange,
    NotPsd,
    NotComplete,
    // joint weights
    MarginalMismatch,
    StepTooSmall,
    DegenerateTarget,
    NotCommuting,
    // error analysis
    ShapeMismatch,
    AllOutcomesZero,
    // error-free analysis
    VanishingOverlap,
    NotRankOne,
    NotErrorFree,
    ZeroMarginal,
    // correlations
    PreconditionViolated,
    EstimateIdentityViolated,
    // scenarios and I/O
    DegenerateDraw,
    ParseError,
    ValidationError,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-readable code. `field()` names the scenario
/// field or report block the failure is attributed to, when known.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::string field = {})
        : std::runtime_error(std::string(to_string(code)) + ": " + message),
          code_(code), field_(std::move(field)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& field() const noexcept { return field_; }

private:
    ErrorCode code_;
    std::string field_;
};

} // namespace qmeas
