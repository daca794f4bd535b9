#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace inp2cpa {

enum class ErrorCode {
    MalformedSection,
    MalformedControl,
    MalformedRow,
    DanglingReference,
    DuplicateId,
    DuplicateLink,
    UnknownEndpoint,
    SensorNotAtSource,
    InUse,
    NotFound,
    UnknownTarget,
    IncompleteParams,
    InvalidWindow,
    UnknownAttackKind,
    ValidationFailed,
    EndpointMismatch,
    UnknownVertex,
    EnumerationBudgetExceeded,
    GraphTooSmall,
    InvalidParams,
    BadCommand,
    Io,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library. `line` is 1-based and only set for
// errors tied to a position in an input document.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::optional<int> line = std::nullopt);

    ErrorCode code() const noexcept { return code_; }
    std::optional<int> line() const noexcept { return line_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::optional<int> line_;
    std::string detail_;
};

}  // namespace inp2cpa
