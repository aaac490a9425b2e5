#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vegidx {

enum class ErrorCode {
    // raster-core
    BadMagic,
    HeaderMismatch,
    UnsupportedDtype,
    IoFailure,
    RaggedRows,
    NonNumericToken,
    DimensionMismatch,
    InvalidGrid,
    // preprocess
    NonPositiveScale,
    // indices
    MissingBand,
    NegativeL,
    InvalidBandSet,
    // classify
    InvalidThresholds,
    ParseError,
    ValueOutOfRange,
    // stats
    AllNodata,
    NoOverlap,
    // report
    EmptyStats,
    // synth
    UninvertibleTarget,
    CountMismatch,
    // pipeline / cli
    InvalidConfig,
};

std::string_view to_string(ErrorCode code);

/// Failure category used by the command-line front-end to pick an exit status.
enum class FailureClass { Config, Io, Data };

FailureClass failure_class(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace vegidx
