#include "inp2cpa/error.hpp"

namespace inp2cpa {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::MalformedSection: return "MalformedSection";
    case ErrorCode::MalformedControl: return "MalformedControl";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::DuplicateLink: return "DuplicateLink";
    case ErrorCode::UnknownEndpoint: return "UnknownEndpoint";
    case ErrorCode::SensorNotAtSource: return "SensorNotAtSource";
    case ErrorCode::InUse: return "InUse";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::UnknownTarget: return "UnknownTarget";
    case ErrorCode::IncompleteParams: return "IncompleteParams";
    case ErrorCode::InvalidWindow: return "InvalidWindow";
    case ErrorCode::UnknownAttackKind: return "UnknownAttackKind";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::EndpointMismatch: return "EndpointMismatch";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::EnumerationBudgetExceeded: return "EnumerationBudgetExceeded";
    case ErrorCode::GraphTooSmall: return "GraphTooSmall";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::BadCommand: return "BadCommand";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

namespace {

std::string format_what(ErrorCode code, const std::string& message, std::optional<int> line) {
    std::string out(to_string(code));
    if (line) {
        out += " (line " + std::to_string(*line) + ")";
    }
    out += ": ";
    out += message;
    return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::optional<int> line)
    : std::runtime_error(format_what(code, message, line)), code_(code), line_(line), detail_(message) {}

}  // namespace inp2cpa
