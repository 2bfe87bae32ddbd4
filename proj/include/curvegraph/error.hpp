#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace curvegraph {

enum class ErrorCode {
  DuplicateEdge,
  NonPositiveWeight,
  NonPositiveMeasure,
  SelfLoop,
  Disconnected,
  InvalidVertex,
  InvalidParameter,
  DegenerateVertex,
  NegativeTime,
  PreconditionNotCertified,
  EmptySet,
  SetsNotDisjoint,
  DistanceTooSmall,
  BudgetExceeded,
  KOutOfRange,
  TooLarge,
  Parse,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every validation failure in the library is reported through this type;
/// `code()` lets callers (and the CLI exit-code mapping) branch on the kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace curvegraph
