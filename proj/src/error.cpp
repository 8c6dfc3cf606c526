// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#include "surfnsch/error.hpp"

namespace surfnsch {

const char* to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::DegenerateGradient: return "DegenerateGradient";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::GammaTooLarge: return "GammaTooLarge";
    case ErrorCode::LevelOutOfRange: return "LevelOutOfRange";
    case ErrorCode::MeshQualityDegraded: return "MeshQualityDegraded";
    case ErrorCode::ProjectionFailed: return "ProjectionFailed";
    case ErrorCode::DegenerateElement: return "DegenerateElement";
    case ErrorCode::MeshMismatch: return "MeshMismatch";
    case ErrorCode::ViscosityNonPositive: return "ViscosityNonPositive";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::IncompatibleData: return "IncompatibleData";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::NonZeroMean: return "NonZeroMean";
    case ErrorCode::EigenSolverFailure: return "EigenSolverFailure";
    case ErrorCode::InadmissibleInitialData: return "InadmissibleInitialData";
    case ErrorCode::NewtonDivergence: return "NewtonDivergence";
    case ErrorCode::PhaseBoundViolation: return "PhaseBoundViolation";
    case ErrorCode::LinearSolverFailure: return "LinearSolverFailure";
    case ErrorCode::MeanMismatch: return "MeanMismatch";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

bool is_numerical(ErrorCode code)
{
    switch (code) {
    case ErrorCode::LevelOutOfRange:
    case ErrorCode::ParseError:
    case ErrorCode::ValidationError:
    case ErrorCode::FormatError:
    case ErrorCode::IoError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::InadmissibleInitialData:
    case ErrorCode::MeshMismatch:
    case ErrorCode::MeanMismatch:
        return false;
    default:
        return true;
    }
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what)
    , code_(code)
{}

void fail(ErrorCode code, const std::string& what)
{
    throw Error(code, what);
}

} // namespace surfnsch
