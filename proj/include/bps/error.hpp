#pragma once

#include <stdexcept>
#include <string>

namespace bps {

enum class ErrorCode {
  MissingColumn,
  UnparseableTimestamp,
  OutOfOrderEvent,
  SpanTooShort,
  EmptyInput,
  StateSpaceBudgetExceeded,
  TargetTypeMismatch,
  NoCapableResource,
  EmptyLog,
  EmptySample,
  NoSharedResources,
  InconsistentModel,
  HorizonZero,
  MissingBranchModel,
  NoCompleteTraces,
  PlanError,
  IoError,
};

const char* to_string(ErrorCode c);

/// Exception carrying a machine-checkable error code next to the message.
class BpsError : public std::runtime_error {
public:
  BpsError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw BpsError(code, what);
}

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::UnparseableTimestamp: return "UnparseableTimestamp";
    case ErrorCode::OutOfOrderEvent: return "OutOfOrderEvent";
    case ErrorCode::SpanTooShort: return "SpanTooShort";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::StateSpaceBudgetExceeded: return "StateSpaceBudgetExceeded";
    case ErrorCode::TargetTypeMismatch: return "TargetTypeMismatch";
    case ErrorCode::NoCapableResource: return "NoCapableResource";
    case ErrorCode::EmptyLog: return "EmptyLog";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::NoSharedResources: return "NoSharedResources";
    case ErrorCode::InconsistentModel: return "InconsistentModel";
    case ErrorCode::HorizonZero: return "HorizonZero";
    case ErrorCode::MissingBranchModel: return "MissingBranchModel";
    case ErrorCode::NoCompleteTraces: return "NoCompleteTraces";
    case ErrorCode::PlanError: return "PlanError";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace bps
