// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the vegloss authors

#include "vegloss/errors.hpp"

namespace vegloss {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotFound: return "not found";
        case ErrorCode::InvalidGeometry: return "invalid geometry";
        case ErrorCode::InvalidInput: return "invalid input";
        case ErrorCode::GridMismatch: return "frequency grid mismatch";
        case ErrorCode::DegenerateCalibration: return "degenerate calibration";
        case ErrorCode::OutOfBand: return "out of band";
        case ErrorCode::InsufficientData: return "insufficient data";
        case ErrorCode::InvalidGate: return "invalid delay gate";
        case ErrorCode::LosNotFound: return "line of sight not found";
        case ErrorCode::NoAlignment: return "no alignment";
        case ErrorCode::DegenerateFit: return "degenerate fit";
        case ErrorCode::BandCoverageError: return "band coverage error";
        case ErrorCode::ParseError: return "parse error";
        case ErrorCode::IoError: return "io error";
    }
    return "unknown error";
}

} // namespace vegloss
