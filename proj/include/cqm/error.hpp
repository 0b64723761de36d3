#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cqm {

enum class ErrorCode {
  InvalidArgument,
  NotHermitian,
  NonFinite,
  DimMismatch,
  ConvergenceFailure,
  NotCommuting,
  FamilyTooLarge,
  NotInContext,
  UnassignedContext,
  NoContainingContext,
  InconsistentIntersection,
  ContextMismatch,
  DegenerateGround,
  NotGroundState,
  NotPositive,
  TruncationInsufficient,
  InvalidInstance,
};

std::string_view to_string(ErrorCode code);

// Numerical failures (as opposed to rejected input) map to CLI exit code 2.
bool is_numerical_failure(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class NotCommutingError : public Error {
 public:
  NotCommutingError(std::size_t i, std::size_t j, double residual);

  std::size_t first() const noexcept { return i_; }
  std::size_t second() const noexcept { return j_; }
  double residual() const noexcept { return residual_; }

 private:
  std::size_t i_;
  std::size_t j_;
  double residual_;
};

}  // namespace cqm
