#pragma once

#include <stdexcept>
#include <string>

namespace fairassign {

enum class ErrorKind {
  kInvalidParameter,
  kIncompleteInstance,
  kTooLarge,
  kUncoveredTask,
  kInvalidAugmentation,
  kInfeasibleInstance,
  kDisconnected,
  kParse,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library; callers switch on kind() when they
// need to map failures onto exit codes or fallbacks.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidParameter: return "invalid parameter";
    case ErrorKind::kIncompleteInstance: return "incomplete instance";
    case ErrorKind::kTooLarge: return "too large";
    case ErrorKind::kUncoveredTask: return "uncovered task";
    case ErrorKind::kInvalidAugmentation: return "invalid augmentation";
    case ErrorKind::kInfeasibleInstance: return "infeasible instance";
    case ErrorKind::kDisconnected: return "disconnected";
    case ErrorKind::kParse: return "parse error";
  }
  return "error";
}

}  // namespace fairassign
