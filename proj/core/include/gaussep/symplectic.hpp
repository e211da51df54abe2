#pragma once

// Symplectic form, group predicates, Williamson normal form and the
// quantum-blob bound used to turn a feasible local covariance into a positive
// definite symplectic certificate.
//
// Phase-space vectors of one subsystem are ordered (x_1..x_n, p_1..p_n).

#include <cstdint>

#include "gaussep/matrix_kernel.hpp"

namespace gaussep {

/// J = [[0, I_n], [-I_n, 0]], or a direct sum of such blocks.
class SymplecticForm {
 public:
  SymplecticForm(int modes, Matrix j) : modes_(modes), j_(std::move(j)) {}

  int modes() const noexcept { return modes_; }
  Index dim() const noexcept { return 2 * modes_; }
  const Matrix& matrix() const noexcept { return j_; }
  /// True for the single-block form of standard_J(modes()).
  bool is_standard() const;

 private:
  int modes_;
  Matrix j_;
};

SymplecticForm standard_J(int modes);
SymplecticForm direct_sum(const SymplecticForm& a, const SymplecticForm& b);

/// A matrix S with S^T J S = J for the standard form, checked on construction.
class SymplecticMatrix {
 public:
  explicit SymplecticMatrix(const Matrix& m, double tol = kDefaultTolerances.symplectic);

  int modes() const noexcept { return static_cast<int>(m_.rows() / 2); }
  const Matrix& matrix() const noexcept { return m_; }
  /// S^T S, the Gram matrix that drives the pure-state formulas.
  SymMatrix gram() const { return SymMatrix(m_.transpose() * m_); }

 private:
  Matrix m_;
};

/// ||M^T J M - J||_F. Throws DimensionMismatch for odd or non-square input.
double symplectic_residual(const Matrix& m, const SymplecticForm& j);
double symplectic_residual(const Matrix& m);

bool is_symplectic(const Matrix& m, double tol = kDefaultTolerances.symplectic);
bool is_symplectic(const Matrix& m, const SymplecticForm& j, double tol);
bool is_posdef_symplectic(const Matrix& m, double tol = kDefaultTolerances.symplectic);

/// Moduli of the eigenvalues of J*Sigma, each reported once, descending.
Vector symplectic_eigenvalues(const SymMatrix& sigma, const SymplecticForm& j,
                              const Tolerances& tol = kDefaultTolerances);

struct WilliamsonDecomposition {
  Matrix S;    // symplectic
  Vector nu;   // descending, all > 0
  bool degenerate = false;  // two nu closer than tol.degenerate_spectrum

  /// diag(nu, nu) in (x.., p..) order.
  SymMatrix normal_form() const;
};

/// Sigma = S diag(nu, nu) S^T with S symplectic. The form must be standard.
WilliamsonDecomposition williamson(const SymMatrix& sigma, const SymplecticForm& j,
                                   const Tolerances& tol = kDefaultTolerances);

/// Positive definite symplectic P = S S^T from the Williamson factor of sigma_x,
/// so that sigma_x - (hbar/2) P = S (D - hbar/2) S^T is positive semidefinite.
/// Throws NotBonaFide when the smallest symplectic eigenvalue is below hbar/2.
SymMatrix blob_extract(const SymMatrix& sigma_x, double hbar, const SymplecticForm& j,
                       const Tolerances& tol = kDefaultTolerances);

/// Deterministic per seed. spread = 0 yields the identity.
SymplecticMatrix random_symplectic(int modes, std::uint64_t seed, double spread);

/// Symmetric element [[A, B], [B, -A]] of the symplectic Lie algebra.
SymMatrix lie_symmetric_element(const SymMatrix& a, const SymMatrix& b);

/// ||X J + J X||_F for symmetric X (the X^T J + J X = 0 constraint).
double lie_algebra_residual(const SymMatrix& x);

/// exp(X) for X symmetric in the symplectic Lie algebra; throws NotInLieAlgebra.
SymMatrix posdef_symplectic_from_param(const SymMatrix& x, const Tolerances& tol = kDefaultTolerances);

}  // namespace gaussep
