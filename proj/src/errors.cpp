#include "piclab/errors.hpp"

namespace piclab {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ZeroMassRow: return "ZeroMassRow";
    case ErrorKind::SupportMismatch: return "SupportMismatch";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::InconsistentDecomposition: return "InconsistentDecomposition";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::UnsortedInput: return "UnsortedInput";
    case ErrorKind::NotConforming: return "NotConforming";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::UniformityRequired: return "UniformityRequired";
    case ErrorKind::InvalidPmf: return "InvalidPmf";
    case ErrorKind::NotPowerOfTwo: return "NotPowerOfTwo";
    case ErrorKind::TOutOfRange: return "TOutOfRange";
    case ErrorKind::InfeasibleMass: return "InfeasibleMass";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::DegenerateFunction: return "DegenerateFunction";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace piclab
