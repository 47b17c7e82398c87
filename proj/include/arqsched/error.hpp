#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace arqsched {

enum class ErrorCode {
    NotStochastic,
    OrderingViolation,
    DegenerateChain,
    InvalidReward,
    NotTypeI,
    NotTypeII,
    CapTooSmall,
    ConditionAFailed,
    Prop12ConditionsFailed,
    InvalidConfig,
    InvalidInstance,
    UnknownCommand,
    Usage,
};

std::string_view to_string(ErrorCode code);

/// Every recoverable failure in the library is an Error carrying a code that
/// the CLI maps onto its machine-readable error document.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace arqsched
