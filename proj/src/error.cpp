#include "galign/error.hpp"

namespace galign {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedDocument: return "MalformedDocument";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::UnknownPlace: return "UnknownPlace";
    case ErrorCode::NotEnabled: return "NotEnabled";
    case ErrorCode::StateCapExceeded: return "StateCapExceeded";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::EmptyLog: return "EmptyLog";
    case ErrorCode::DuplicateAbbreviation: return "DuplicateAbbreviation";
    case ErrorCode::DuplicateActivity: return "DuplicateActivity";
    case ErrorCode::UnknownActivity: return "UnknownActivity";
    case ErrorCode::UnknownStage: return "UnknownStage";
    case ErrorCode::MissingTimestamp: return "MissingTimestamp";
    case ErrorCode::BothGaps: return "BothGaps";
    case ErrorCode::ReservedSymbol: return "ReservedSymbol";
    case ErrorCode::EmptyAlignment: return "EmptyAlignment";
    case ErrorCode::EmptyNormativeLog: return "EmptyNormativeLog";
    case ErrorCode::MissingRound: return "MissingRound";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

namespace {

std::string compose(ErrorCode code, const std::string& subject,
                    const std::string& detail) {
  std::string msg(to_string(code));
  if (!subject.empty()) msg += "(" + subject + ")";
  if (!detail.empty()) msg += ": " + detail;
  return msg;
}

}  // namespace

Error::Error(ErrorCode code, std::string subject, const std::string& detail)
    : std::runtime_error(compose(code, subject, detail)),
      code_(code),
      subject_(std::move(subject)) {}

}  // namespace galign
