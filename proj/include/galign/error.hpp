#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace galign {

enum class ErrorCode {
  MalformedDocument,
  InvariantViolation,
  UnknownPlace,
  NotEnabled,
  StateCapExceeded,
  MalformedRow,
  EmptyLog,
  DuplicateAbbreviation,
  DuplicateActivity,
  UnknownActivity,
  UnknownStage,
  MissingTimestamp,
  BothGaps,
  ReservedSymbol,
  EmptyAlignment,
  EmptyNormativeLog,
  MissingRound,
  InvalidArgument,
  Io,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this type. `subject` names the
// offending element (place id, row number, activity, ...) when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string subject, const std::string& detail = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& subject() const noexcept { return subject_; }

 private:
  ErrorCode code_;
  std::string subject_;
};

}  // namespace galign
