// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the vegloss authors

#pragma once

#include <stdexcept>
#include <string>

namespace vegloss {

enum class ErrorCode {
    NotFound,
    InvalidGeometry,
    InvalidInput,
    GridMismatch,
    DegenerateCalibration,
    OutOfBand,
    InsufficientData,
    InvalidGate,
    LosNotFound,
    NoAlignment,
    DegenerateFit,
    BandCoverageError,
    ParseError,
    IoError,
};

const char* to_string(ErrorCode code);

// Single exception type for all domain and I/O failures; the code drives
// CLI exit status mapping.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace vegloss
