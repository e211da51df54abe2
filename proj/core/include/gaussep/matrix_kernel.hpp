#pragma once

// Dense real-symmetric and Hermitian primitives. Storage and arithmetic are
// Eigen's; eigendecompositions go through a cyclic Jacobi solver so that every
// spectral quantity in the library comes from one tested kernel.

#include <Eigen/Core>

#include <complex>

#include "gaussep/tolerances.hpp"

namespace gaussep {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

/// Real symmetric matrix. Symmetrized exactly on construction: (M + M^T) / 2.
class SymMatrix {
 public:
  explicit SymMatrix(const Matrix& m);

  static SymMatrix identity(Index dim);
  static SymMatrix diagonal(const Vector& d);
  static SymMatrix zero(Index dim);

  Index dim() const noexcept { return m_.rows(); }
  const Matrix& matrix() const noexcept { return m_; }
  double operator()(Index i, Index j) const { return m_(i, j); }
  double max_abs() const noexcept;

  friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
  friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
  friend SymMatrix operator*(double s, const SymMatrix& a);

 private:
  Matrix m_;
};

/// Complex Hermitian matrix. Hermitized exactly on construction: (H + H^*) / 2.
class HermMatrix {
 public:
  explicit HermMatrix(const CMatrix& h);
  /// Re + i Im, with Re symmetric and Im antisymmetric.
  HermMatrix(const SymMatrix& re, const Matrix& im);

  Index dim() const noexcept { return h_.rows(); }
  const CMatrix& matrix() const noexcept { return h_; }
  double max_abs() const noexcept;

 private:
  CMatrix h_;
};

struct SymEigen {
  Vector values;   // ascending
  Matrix vectors;  // orthogonal, column k pairs with values(k)
  int sweeps = 0;
};

struct HermEigen {
  Vector values;    // ascending
  CMatrix vectors;  // unitary
};

SymEigen sym_eig(const SymMatrix& m, const Tolerances& tol = kDefaultTolerances);

/// Solved through the real embedding [[Re H, -Im H], [Im H, Re H]], whose
/// spectrum is that of H with every eigenvalue doubled.
HermEigen herm_eig(const HermMatrix& h, const Tolerances& tol = kDefaultTolerances);

double min_eigenvalue(const SymMatrix& m, const Tolerances& tol = kDefaultTolerances);
double min_eigenvalue(const HermMatrix& h, const Tolerances& tol = kDefaultTolerances);

/// Frobenius-nearest positive semidefinite matrix (negative eigenvalues clipped).
SymMatrix psd_project(const SymMatrix& m, const Tolerances& tol = kDefaultTolerances);
HermMatrix psd_project(const HermMatrix& h, const Tolerances& tol = kDefaultTolerances);

SymMatrix sqrtm_spd(const SymMatrix& m, const Tolerances& tol = kDefaultTolerances);
SymMatrix inv_sqrtm_spd(const SymMatrix& m, const Tolerances& tol = kDefaultTolerances);
SymMatrix expm_sym(const SymMatrix& m, const Tolerances& tol = kDefaultTolerances);
SymMatrix logm_spd(const SymMatrix& m, const Tolerances& tol = kDefaultTolerances);

Vector solve_spd(const SymMatrix& m, const Vector& b, const Tolerances& tol = kDefaultTolerances);
SymMatrix inverse_spd(const SymMatrix& m, const Tolerances& tol = kDefaultTolerances);

/// Throws NotPositiveDefinite unless min eigenvalue > tol.positive_definite * max|entry|.
void require_positive_definite(const SymMatrix& m, const Tolerances& tol = kDefaultTolerances);

double max_abs(const Matrix& m) noexcept;
bool is_symmetric(const Matrix& m, double tol);

Matrix direct_sum(const Matrix& a, const Matrix& b);
SymMatrix direct_sum(const SymMatrix& a, const SymMatrix& b);

}  // namespace gaussep
