#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace berkskel {

enum class ErrorKind {
  NegativeLogValue,
  InvalidFunction,
  TerminalSlopeNotOne,
  InvalidGraph,
  OutOfRange,
  UnknownId,
  NotTame,
  MissingSkeletonBranch,
  InfiniteSlope,
  InvalidFiltration,
  InvalidField,
  DiscontinuousField,
  InvalidArgument,
  ParseError,
  DanglingReference,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NegativeLogValue: return "NegativeLogValue";
    case ErrorKind::InvalidFunction: return "InvalidFunction";
    case ErrorKind::TerminalSlopeNotOne: return "TerminalSlopeNotOne";
    case ErrorKind::InvalidGraph: return "InvalidGraph";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::UnknownId: return "UnknownId";
    case ErrorKind::NotTame: return "NotTame";
    case ErrorKind::MissingSkeletonBranch: return "MissingSkeletonBranch";
    case ErrorKind::InfiniteSlope: return "InfiniteSlope";
    case ErrorKind::InvalidFiltration: return "InvalidFiltration";
    case ErrorKind::InvalidField: return "InvalidField";
    case ErrorKind::DiscontinuousField: return "DiscontinuousField";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DanglingReference: return "DanglingReference";
  }
  return "Unknown";
}

// All library failures are reported through this one exception type; callers
// branch on kind() rather than on a class hierarchy.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace berkskel
