#ifndef DGFEM_ERRORS_HPP
#define DGFEM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dgfem {

enum class ErrorCode {
  InvalidTopology,
  InvalidBoundarySpec,
  NonManifold,
  DegenerateElement,
  UnsupportedDegree,
  InvalidIndex,
  DimensionMismatch,
  SingularMatrix,
  SolveAccuracy,
  InflowOnNeumann,
  NonPositiveDiffusion,
  InvalidReaction,
  NoExactSolution,
  UnknownProblem,
  UnknownMethod,
  IoFailure,
  InvalidArgument,
};

const char* to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-checkable code plus a human-readable message.
/// `detail` holds an error-specific index when one exists (e.g. the pivot
/// position for SingularMatrix, the offending element for InvalidTopology);
/// it is -1 otherwise.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message, long detail = -1)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  long detail() const noexcept { return detail_; }

private:
  ErrorCode code_;
  long detail_;
};

} // namespace dgfem

#endif
