#include "cqm/error.hpp"

#include <sstream>

namespace cqm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::NotCommuting: return "NotCommuting";
    case ErrorCode::FamilyTooLarge: return "FamilyTooLarge";
    case ErrorCode::NotInContext: return "NotInContext";
    case ErrorCode::UnassignedContext: return "UnassignedContext";
    case ErrorCode::NoContainingContext: return "NoContainingContext";
    case ErrorCode::InconsistentIntersection: return "InconsistentIntersection";
    case ErrorCode::ContextMismatch: return "ContextMismatch";
    case ErrorCode::DegenerateGround: return "DegenerateGround";
    case ErrorCode::NotGroundState: return "NotGroundState";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::TruncationInsufficient: return "TruncationInsufficient";
    case ErrorCode::InvalidInstance: return "InvalidInstance";
  }
  return "Unknown";
}

bool is_numerical_failure(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConvergenceFailure:
    case ErrorCode::NotPositive:
    case ErrorCode::TruncationInsufficient:
    case ErrorCode::InconsistentIntersection:
      return true;
    default:
      return false;
  }
}

namespace {
std::string describe(std::size_t i, std::size_t j, double residual) {
  std::ostringstream os;
  os << "observables " << i << " and " << j << " do not commute (||[A_i, A_j]|| = "
     << residual << ")";
  return os.str();
}
}  // namespace

NotCommutingError::NotCommutingError(std::size_t i, std::size_t j, double residual)
    : Error(ErrorCode::NotCommuting, describe(i, j, residual)),
      i_(i),
      j_(j),
      residual_(residual) {}

}  // namespace cqm
