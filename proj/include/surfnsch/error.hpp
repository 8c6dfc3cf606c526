// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace surfnsch {

enum class ErrorCode {
    DegenerateGradient,
    NoConvergence,
    GammaTooLarge,
    LevelOutOfRange,
    MeshQualityDegraded,
    ProjectionFailed,
    DegenerateElement,
    MeshMismatch,
    ViscosityNonPositive,
    DomainViolation,
    IncompatibleData,
    SolverFailure,
    NonZeroMean,
    EigenSolverFailure,
    InadmissibleInitialData,
    NewtonDivergence,
    PhaseBoundViolation,
    LinearSolverFailure,
    MeanMismatch,
    OutOfDomain,
    ZeroDenominator,
    ParseError,
    ValidationError,
    FormatError,
    IoError,
    InvalidArgument,
};

const char* to_string(ErrorCode code);

/// Numerical failures map to CLI exit code 2, input problems to 1.
bool is_numerical(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

} // namespace surfnsch
