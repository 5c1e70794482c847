#pragma once

#include <stdexcept>
#include <string>

namespace globular {

enum class ErrorKind {
  MalformedTable,
  MalformedInput,
  UnknownCell,
  DimensionMismatch,
  NotParallel,
  BoundaryMismatch,
  NotComposable,
  NotLMap,
  NotAnRMap,
  SquareDoesNotCommute,
  TruncationExceeded,
  UnknownOperation,
  MissingPrerequisite,
  NotUnderA0,
  BackendLawFailure,
  OutOfRange,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::MalformedTable: return "MalformedTable";
    case ErrorKind::MalformedInput: return "MalformedInput";
    case ErrorKind::UnknownCell: return "UnknownCell";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotParallel: return "NotParallel";
    case ErrorKind::BoundaryMismatch: return "BoundaryMismatch";
    case ErrorKind::NotComposable: return "NotComposable";
    case ErrorKind::NotLMap: return "NotLMap";
    case ErrorKind::NotAnRMap: return "NotAnRMap";
    case ErrorKind::SquareDoesNotCommute: return "SquareDoesNotCommute";
    case ErrorKind::TruncationExceeded: return "TruncationExceeded";
    case ErrorKind::UnknownOperation: return "UnknownOperation";
    case ErrorKind::MissingPrerequisite: return "MissingPrerequisite";
    case ErrorKind::NotUnderA0: return "NotUnderA0";
    case ErrorKind::BackendLawFailure: return "BackendLawFailure";
    case ErrorKind::OutOfRange: return "OutOfRange";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

inline void require(bool cond, ErrorKind kind, const std::string& msg) {
  if (!cond) fail(kind, msg);
}

inline void require(bool cond, ErrorKind kind, const char* msg) {
  if (!cond) fail(kind, msg);
}

}  // namespace globular
