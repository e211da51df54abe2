#pragma once

// Gaussian states described by their covariance matrix, plus the pure-state
// (X, Y) parametrization and a numerical Wigner transform for one mode.

#include <functional>

#include "gaussep/matrix_kernel.hpp"
#include "gaussep/symplectic.hpp"

namespace gaussep {

/// Bipartition into n_A + n_B modes. Global vectors are z = z_A (+) z_B with
/// each z_X laid out as (x_1..x_nX, p_1..p_nX).
class Partition {
 public:
  Partition(int n_a, int n_b);

  int n_a() const noexcept { return n_a_; }
  int n_b() const noexcept { return n_b_; }
  int modes() const noexcept { return n_a_ + n_b_; }
  Index dim() const noexcept { return 2 * modes(); }

  /// J_AB = J_A (+) J_B.
  SymplecticForm form() const;
  SymplecticForm form_a() const { return standard_J(n_a_); }
  SymplecticForm form_b() const { return standard_J(n_b_); }

  /// Permutation Pi with z_layout = Pi z_global, where z_global is ordered
  /// (x_1..x_n, p_1..p_n) over all n modes (A's modes first). Then
  /// J_AB = Pi J_n Pi^T.
  Matrix layout_permutation() const;
  /// Pi Sigma Pi^T for a covariance given in global ordering.
  SymMatrix from_global_ordering(const SymMatrix& sigma_global) const;

  SymMatrix block_a(const SymMatrix& sigma) const;
  SymMatrix block_b(const SymMatrix& sigma) const;
  Vector z_a(const Vector& z) const { return z.head(2 * n_a_); }
  Vector z_b(const Vector& z) const { return z.tail(2 * n_b_); }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  int n_a_;
  int n_b_;
};

class GaussianState {
 public:
  const SymMatrix& sigma() const noexcept { return sigma_; }
  const Vector& mean() const noexcept { return mean_; }
  double hbar() const noexcept { return hbar_; }
  const Partition& partition() const noexcept { return partition_; }
  int modes() const noexcept { return partition_.modes(); }

  /// Smallest eigenvalue of Sigma + (i hbar/2) J_AB.
  double hermitian_margin() const noexcept { return hermitian_margin_; }
  /// Symplectic eigenvalues of Sigma, descending.
  const Vector& symplectic_eigenvalues() const noexcept { return nu_; }

 private:
  friend GaussianState make_state(SymMatrix, Vector, double, Partition, const Tolerances&);
  GaussianState(SymMatrix sigma, Vector mean, double hbar, Partition partition)
      : sigma_(std::move(sigma)), mean_(std::move(mean)), hbar_(hbar), partition_(partition) {}

  SymMatrix sigma_;
  Vector mean_;
  double hbar_;
  Partition partition_;
  double hermitian_margin_ = 0.0;
  Vector nu_;
};

/// Validates dimensions, positive definiteness and the quantum condition
/// Sigma + (i hbar/2) J_AB >= 0 (checked both through the Hermitian spectrum
/// and through nu_min >= hbar/2). An empty mean means the origin.
GaussianState make_state(SymMatrix sigma, Vector mean, double hbar, Partition partition,
                         const Tolerances& tol = kDefaultTolerances);

/// Min eigenvalue of Sigma + (i hbar/2) J.
double hermitian_bona_fide_margin(const SymMatrix& sigma, double hbar, const SymplecticForm& j,
                                  const Tolerances& tol = kDefaultTolerances);
/// nu_min(Sigma) - hbar/2.
double symplectic_bona_fide_margin(const SymMatrix& sigma, double hbar, const SymplecticForm& j,
                                   const Tolerances& tol = kDefaultTolerances);

/// (1/2pi)^n det(Sigma)^{-1/2} exp(-1/2 Sigma^{-1} (z-m).(z-m)).
double wigner_density(const GaussianState& state, const Vector& z);
double log_wigner_density(const GaussianState& state, const Vector& z);

/// (hbar/2)^n det(Sigma)^{-1/2}.
double purity(const GaussianState& state);

/// Wigner function of the standard coherent state: (pi hbar)^{-n} exp(-|z|^2/hbar).
double standard_coherent_wigner(const Vector& z, int modes, double hbar);
double log_standard_coherent_wigner(const Vector& z, int modes, double hbar);

/// psi(x) = (pi hbar)^{-n/4} det(X)^{1/4} exp(-(X + iY) x.x / 2hbar).
struct PureGaussian {
  SymMatrix x;
  SymMatrix y;
  double hbar;

  int modes() const noexcept { return static_cast<int>(x.dim()); }
};

/// Solves S^T S = [[X + Y X^{-1} Y, Y X^{-1}], [X^{-1} Y, X^{-1}]] for (X, Y).
PureGaussian pure_gaussian_from_symplectic(const SymplecticMatrix& s, double hbar);

Complex pure_gaussian_wavefunction(const PureGaussian& pg, const Vector& x);

/// (pi hbar)^{-n} exp(-(S^T S z.z) / hbar).
double pure_gaussian_wigner_closed(const SymplecticMatrix& s, const Vector& z, double hbar);

struct QuadratureConfig {
  double cutoff = 12.0;  // integrate y over [-cutoff, cutoff]
  int nodes = 2048;
  double tol = 1e-10;    // allowed change when the node count doubles
};

/// Cutoff 12 sqrt(hbar * max(eig(S^T S), 1/eig(S^T S))), 2048 nodes.
QuadratureConfig default_quadrature(const SymplecticMatrix& s, double hbar);

using Wavefunction1D = std::function<Complex(double)>;

/// (1/2pi hbar) int exp(-i p y / hbar) psi(x + y/2) conj(psi(x - y/2)) dy by the
/// trapezoid rule. Throws QuadratureNotConverged when doubling the node count
/// moves the result by more than cfg.tol.
double wigner_transform_numeric_1d(const Wavefunction1D& psi, double x, double p, double hbar,
                                   const QuadratureConfig& cfg = {});

}  // namespace gaussep
