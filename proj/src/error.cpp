#include "arqsched/error.hpp"

namespace arqsched {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotStochastic: return "NotStochastic";
        case ErrorCode::OrderingViolation: return "OrderingViolation";
        case ErrorCode::DegenerateChain: return "DegenerateChain";
        case ErrorCode::InvalidReward: return "InvalidReward";
        case ErrorCode::NotTypeI: return "NotTypeI";
        case ErrorCode::NotTypeII: return "NotTypeII";
        case ErrorCode::CapTooSmall: return "CapTooSmall";
        case ErrorCode::ConditionAFailed: return "ConditionAFailed";
        case ErrorCode::Prop12ConditionsFailed: return "Prop12ConditionsFailed";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::InvalidInstance: return "InvalidInstance";
        case ErrorCode::UnknownCommand: return "UnknownCommand";
        case ErrorCode::Usage: return "Usage";
    }
    return "Unknown";
}

}  // namespace arqsched
