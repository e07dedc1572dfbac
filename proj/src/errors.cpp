#include "dgfem/errors.hpp"

namespace dgfem {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidTopology: return "InvalidTopology";
    case ErrorCode::InvalidBoundarySpec: return "InvalidBoundarySpec";
    case ErrorCode::NonManifold: return "NonManifold";
    case ErrorCode::DegenerateElement: return "DegenerateElement";
    case ErrorCode::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorCode::InvalidIndex: return "InvalidIndex";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::SolveAccuracy: return "SolveAccuracy";
    case ErrorCode::InflowOnNeumann: return "InflowOnNeumann";
    case ErrorCode::NonPositiveDiffusion: return "NonPositiveDiffusion";
    case ErrorCode::InvalidReaction: return "InvalidReaction";
    case ErrorCode::NoExactSolution: return "NoExactSolution";
    case ErrorCode::UnknownProblem: return "UnknownProblem";
    case ErrorCode::UnknownMethod: return "UnknownMethod";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

} // namespace dgfem
