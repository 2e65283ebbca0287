#include "schemefactor/error.hpp"

namespace sf {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::NoNonresidue: return "NoNonresidue";
    case ErrorKind::ScanCapExceeded: return "ScanCapExceeded";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotAScheme: return "NotAScheme";
    case ErrorKind::EDoesNotDivide: return "EDoesNotDivide";
    case ErrorKind::BadEll: return "BadEll";
    case ErrorKind::TheoremContradiction: return "TheoremContradiction";
    case ErrorKind::TooSmall: return "TooSmall";
    case ErrorKind::NotHomogeneous: return "NotHomogeneous";
    case ErrorKind::Not3Scheme: return "Not3Scheme";
    case ErrorKind::WorkCapExceeded: return "WorkCapExceeded";
    case ErrorKind::NotAProjection: return "NotAProjection";
    case ErrorKind::NonIntegral: return "NonIntegral";
    case ErrorKind::NotAntisymmetric: return "NotAntisymmetric";
    case ErrorKind::DepthExhausted: return "DepthExhausted";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::NotSplit: return "NotSplit";
    case ErrorKind::ZeroAlgebra: return "ZeroAlgebra";
    case ErrorKind::DimCapExceeded: return "DimCapExceeded";
    case ErrorKind::InvalidSystem: return "InvalidSystem";
    case ErrorKind::TrivialAutomorphism: return "TrivialAutomorphism";
    case ErrorKind::MissingRootOfUnity: return "MissingRootOfUnity";
    case ErrorKind::NotAMatching: return "NotAMatching";
    case ErrorKind::NotAPartition: return "NotAPartition";
    case ErrorKind::NotPrimeDegree: return "NotPrimeDegree";
    case ErrorKind::SmoothDivisorTooSmall: return "SmoothDivisorTooSmall";
  }
  return "Unknown";
}

}  // namespace sf
