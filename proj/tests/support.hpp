#pragma once

#include <Eigen/Eigenvalues>

#include "gaussep/matrix_kernel.hpp"
#include "gaussep/random.hpp"

namespace gaussep::testing {

inline Matrix random_matrix(Index rows, Index cols, SplitMix64& rng) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

inline SymMatrix random_symmetric(Index n, SplitMix64& rng) { return SymMatrix(random_matrix(n, n, rng)); }

/// G G^T + shift I.
inline SymMatrix random_spd(Index n, SplitMix64& rng, double shift = 0.1) {
  const Matrix g = random_matrix(n, n, rng);
  return SymMatrix(g * g.transpose() + shift * Matrix::Identity(n, n));
}

/// Independent eigenvalue oracle.
inline Vector oracle_eigenvalues(const Matrix& m) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(m, Eigen::EigenvaluesOnly).eigenvalues();
}

inline Vector oracle_eigenvalues(const CMatrix& h) {
  return Eigen::SelfAdjointEigenSolver<CMatrix>(h, Eigen::EigenvaluesOnly).eigenvalues();
}

inline double rel_frobenius(const Matrix& a, const Matrix& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

}  // namespace gaussep::testing
