#include "curvegraph/error.hpp"

namespace curvegraph {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::NonPositiveMeasure: return "NonPositiveMeasure";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::InvalidVertex: return "InvalidVertex";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::DegenerateVertex: return "DegenerateVertex";
    case ErrorCode::NegativeTime: return "NegativeTime";
    case ErrorCode::PreconditionNotCertified: return "PreconditionNotCertified";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::SetsNotDisjoint: return "SetsNotDisjoint";
    case ErrorCode::DistanceTooSmall: return "DistanceTooSmall";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::KOutOfRange: return "KOutOfRange";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace curvegraph
