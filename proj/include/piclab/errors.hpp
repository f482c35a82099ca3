#pragma once

#include <stdexcept>
#include <string>

namespace piclab {

enum class ErrorKind {
  DimensionMismatch,
  ZeroMassRow,
  SupportMismatch,
  EmptyInput,
  DomainError,
  NumericalFailure,
  InconsistentDecomposition,
  IndexOutOfRange,
  UnsortedInput,
  NotConforming,
  TooLarge,
  UniformityRequired,
  InvalidPmf,
  NotPowerOfTwo,
  TOutOfRange,
  InfeasibleMass,
  NonConvergence,
  DegenerateFunction,
  ParseError,
  IoError,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + msg),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

  // Failures of the numerics themselves, as opposed to bad input.
  bool numerical() const {
    return kind_ == ErrorKind::NumericalFailure ||
           kind_ == ErrorKind::InconsistentDecomposition ||
           kind_ == ErrorKind::NonConvergence;
  }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

inline void require(bool cond, ErrorKind kind, const std::string& msg) {
  if (!cond) fail(kind, msg);
}

}  // namespace piclab
