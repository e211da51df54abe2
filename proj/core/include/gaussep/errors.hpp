#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gaussep {

enum class ErrorCode {
  NotPositiveDefinite,
  DimensionMismatch,
  NotBonaFide,
  NotSymplectic,
  NotInLieAlgebra,
  ReconstructionMismatch,
  QuadratureNotConverged,
  NonzeroMean,
  NonConvergence,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  Error(ErrorCode code, const std::string& what, double value)
      : Error(code, what) {
    value_ = value;
  }

  ErrorCode code() const noexcept { return code_; }
  /// Offending quantity (eigenvalue, residual, ...) when one exists; NaN otherwise.
  double value() const noexcept { return value_; }

 private:
  ErrorCode code_;
  double value_ = std::numeric_limits<double>::quiet_NaN();
};

}  // namespace gaussep
