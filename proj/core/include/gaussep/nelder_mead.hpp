#pragma once

#include <functional>

#include "gaussep/matrix_kernel.hpp"

namespace gaussep {

struct NelderMeadOptions {
  double initial_step = 0.25;
  int max_evaluations = 4000;
  double f_tol = 1e-13;  // stop when the simplex value spread falls below this
  double x_tol = 1e-10;  // ... and its diameter below this
  /// Optional early exit: stop as soon as the best value satisfies this.
  std::function<bool(double)> good_enough;
};

struct NelderMeadResult {
  Vector x;
  double value = 0.0;
  int evaluations = 0;
};

/// Derivative-free minimization with the standard reflect/expand/contract/
/// shrink coefficients (1, 2, 1/2, 1/2).
NelderMeadResult nelder_mead(const std::function<double(const Vector&)>& f, const Vector& x0,
                             const NelderMeadOptions& opts = {});

}  // namespace gaussep
