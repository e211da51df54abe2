#include "gaussep/gaussian_state.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <numbers>
#include <sstream>

#include "gaussep/errors.hpp"

namespace gaussep {

namespace {

constexpr double kPi = std::numbers::pi;

double log_det_spd(const Matrix& m) {
  const Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveDefinite, "log determinant of a matrix that is not positive definite");
  }
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

}  // namespace

// ---------------------------------------------------------------------------
// Partition

Partition::Partition(int n_a, int n_b) : n_a_(n_a), n_b_(n_b) {
  if (n_a < 1 || n_b < 1) {
    std::ostringstream os;
    os << "partition needs n_A >= 1 and n_B >= 1, got " << n_a << "+" << n_b;
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
}

SymplecticForm Partition::form() const { return direct_sum(form_a(), form_b()); }

Matrix Partition::layout_permutation() const {
  const int n = modes();
  Matrix pi = Matrix::Zero(dim(), dim());
  for (int i = 0; i < n; ++i) {
    const bool in_a = i < n_a_;
    const int local = in_a ? i : i - n_a_;
    const int offset = in_a ? 0 : 2 * n_a_;
    const int local_modes = in_a ? n_a_ : n_b_;
    pi(offset + local, i) = 1.0;
    pi(offset + local_modes + local, n + i) = 1.0;
  }
  return pi;
}

SymMatrix Partition::from_global_ordering(const SymMatrix& sigma_global) const {
  if (sigma_global.dim() != dim()) throw Error(ErrorCode::DimensionMismatch, "covariance size differs from partition");
  const Matrix pi = layout_permutation();
  return SymMatrix(pi * sigma_global.matrix() * pi.transpose());
}

SymMatrix Partition::block_a(const SymMatrix& sigma) const {
  if (sigma.dim() != dim()) throw Error(ErrorCode::DimensionMismatch, "block_a: covariance size differs from partition");
  return SymMatrix(sigma.matrix().topLeftCorner(2 * n_a_, 2 * n_a_));
}

SymMatrix Partition::block_b(const SymMatrix& sigma) const {
  if (sigma.dim() != dim()) throw Error(ErrorCode::DimensionMismatch, "block_b: covariance size differs from partition");
  return SymMatrix(sigma.matrix().bottomRightCorner(2 * n_b_, 2 * n_b_));
}

// ---------------------------------------------------------------------------
// Bona-fide checks and construction

double hermitian_bona_fide_margin(const SymMatrix& sigma, double hbar, const SymplecticForm& j,
                                  const Tolerances& tol) {
  if (sigma.dim() != j.dim()) throw Error(ErrorCode::DimensionMismatch, "covariance and form differ in size");
  return min_eigenvalue(HermMatrix(sigma, 0.5 * hbar * j.matrix()), tol);
}

double symplectic_bona_fide_margin(const SymMatrix& sigma, double hbar, const SymplecticForm& j,
                                   const Tolerances& tol) {
  return symplectic_eigenvalues(sigma, j, tol).minCoeff() - 0.5 * hbar;
}

GaussianState make_state(SymMatrix sigma, Vector mean, double hbar, Partition partition, const Tolerances& tol) {
  if (sigma.dim() != partition.dim()) {
    std::ostringstream os;
    os << "covariance is " << sigma.dim() << "x" << sigma.dim() << " but partition " << partition.n_a() << "+"
       << partition.n_b() << " needs " << partition.dim();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  if (mean.size() == 0) mean = Vector::Zero(partition.dim());
  if (mean.size() != partition.dim()) throw Error(ErrorCode::DimensionMismatch, "mean vector has wrong length");
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw Error(ErrorCode::InvalidArgument, "hbar must be positive");
  if (!sigma.matrix().allFinite()) throw Error(ErrorCode::InvalidArgument, "covariance has non-finite entries");

  const SymEigen spectrum = sym_eig(sigma, tol);
  if (!(spectrum.values(0) > tol.positive_definite * sigma.max_abs())) {
    std::ostringstream os;
    os << "covariance is not positive definite (min eigenvalue " << spectrum.values(0) << ")";
    throw Error(ErrorCode::NotBonaFide, os.str(), spectrum.values(0));
  }

  const SymplecticForm j = partition.form();
  const double band = tol.bona_fide * std::max(1.0, sigma.max_abs());
  const double herm = hermitian_bona_fide_margin(sigma, hbar, j, tol);
  const Vector nu = symplectic_eigenvalues(sigma, j, tol);
  if (herm < -band) {
    std::ostringstream os;
    os << "Sigma + (i hbar/2) J has eigenvalue " << herm << " < 0 (nu_min " << nu.minCoeff() << ", hbar/2 "
       << 0.5 * hbar << ")";
    throw Error(ErrorCode::NotBonaFide, os.str(), herm);
  }
  if (nu.minCoeff() < 0.5 * hbar - band) {
    std::ostringstream os;
    os << "smallest symplectic eigenvalue " << nu.minCoeff() << " < hbar/2 = " << 0.5 * hbar;
    throw Error(ErrorCode::NotBonaFide, os.str(), nu.minCoeff());
  }

  GaussianState state(std::move(sigma), std::move(mean), hbar, partition);
  state.hermitian_margin_ = herm;
  state.nu_ = nu;
  return state;
}

// ---------------------------------------------------------------------------
// Densities

double log_wigner_density(const GaussianState& state, const Vector& z) {
  if (z.size() != state.partition().dim()) throw Error(ErrorCode::DimensionMismatch, "phase-space point has wrong length");
  const Eigen::LLT<Matrix> llt(state.sigma().matrix());
  const Vector dz = z - state.mean();
  const double quad = dz.dot(llt.solve(dz));
  const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return -state.modes() * std::log(2.0 * kPi) - 0.5 * log_det - 0.5 * quad;
}

double wigner_density(const GaussianState& state, const Vector& z) { return std::exp(log_wigner_density(state, z)); }

double purity(const GaussianState& state) {
  return std::exp(state.modes() * std::log(0.5 * state.hbar()) - 0.5 * log_det_spd(state.sigma().matrix()));
}

double log_standard_coherent_wigner(const Vector& z, int modes, double hbar) {
  if (z.size() != 2 * modes) throw Error(ErrorCode::DimensionMismatch, "phase-space point has wrong length");
  return -modes * std::log(kPi * hbar) - z.squaredNorm() / hbar;
}

double standard_coherent_wigner(const Vector& z, int modes, double hbar) {
  return std::exp(log_standard_coherent_wigner(z, modes, hbar));
}

// ---------------------------------------------------------------------------
// Pure Gaussians

PureGaussian pure_gaussian_from_symplectic(const SymplecticMatrix& s, double hbar) {
  const int n = s.modes();
  const Matrix g = s.matrix().transpose() * s.matrix();
  const SymMatrix x = inverse_spd(SymMatrix(g.bottomRightCorner(n, n)));
  const Matrix y = x.matrix() * g.bottomLeftCorner(n, n);

  const double y_asym = (y - y.transpose()).norm();
  if (y_asym > 1e-9 * std::max(1.0, y.norm())) {
    throw Error(ErrorCode::ReconstructionMismatch, "Y = G22^{-1} G21 is not symmetric", y_asym);
  }
  const SymMatrix ys(y);
  const Matrix g11 = x.matrix() + ys.matrix() * inverse_spd(x).matrix() * ys.matrix();
  const double mismatch = (g.topLeftCorner(n, n) - g11).norm();
  if (mismatch > 1e-9 * std::max(1.0, g.norm())) {
    throw Error(ErrorCode::ReconstructionMismatch, "G11 differs from X + Y X^{-1} Y", mismatch);
  }
  return PureGaussian{x, ys, hbar};
}

Complex pure_gaussian_wavefunction(const PureGaussian& pg, const Vector& x) {
  const int n = pg.modes();
  if (x.size() != n) throw Error(ErrorCode::DimensionMismatch, "configuration point has wrong length");
  const double log_det_x = log_det_spd(pg.x.matrix());
  const double log_norm = -0.25 * n * std::log(kPi * pg.hbar) + 0.25 * log_det_x;
  const double re = x.dot(pg.x.matrix() * x);
  const double im = x.dot(pg.y.matrix() * x);
  // Positive real branch of det(X)^{1/4}; the metaplectic sign is global.
  return std::exp(Complex(log_norm - re / (2.0 * pg.hbar), -im / (2.0 * pg.hbar)));
}

double pure_gaussian_wigner_closed(const SymplecticMatrix& s, const Vector& z, double hbar) {
  const int n = s.modes();
  if (z.size() != 2 * n) throw Error(ErrorCode::DimensionMismatch, "phase-space point has wrong length");
  const Vector sz = s.matrix() * z;
  return std::exp(-n * std::log(kPi * hbar) - sz.squaredNorm() / hbar);
}

QuadratureConfig default_quadrature(const SymplecticMatrix& s, double hbar) {
  const SymEigen e = sym_eig(s.gram());
  const double widest = std::max(e.values(e.values.size() - 1), 1.0 / e.values(0));
  QuadratureConfig cfg;
  cfg.cutoff = 12.0 * std::sqrt(hbar * widest);
  return cfg;
}

namespace {

Complex trapezoid_wigner(const Wavefunction1D& psi, double x, double p, double hbar, double cutoff, int nodes) {
  const double h = 2.0 * cutoff / (nodes - 1);
  Complex sum = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double y = -cutoff + k * h;
    const double weight = (k == 0 || k == nodes - 1) ? 0.5 : 1.0;
    sum += weight * std::polar(1.0, -p * y / hbar) * psi(x + 0.5 * y) * std::conj(psi(x - 0.5 * y));
  }
  return sum * h / (2.0 * kPi * hbar);
}

}  // namespace

double wigner_transform_numeric_1d(const Wavefunction1D& psi, double x, double p, double hbar,
                                   const QuadratureConfig& cfg) {
  if (cfg.nodes < 3 || !(cfg.cutoff > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "quadrature needs >= 3 nodes and a positive cutoff");
  }
  const Complex coarse = trapezoid_wigner(psi, x, p, hbar, cfg.cutoff, cfg.nodes);
  const Complex fine = trapezoid_wigner(psi, x, p, hbar, cfg.cutoff, 2 * cfg.nodes - 1);
  const double change = std::abs(fine - coarse);
  if (change > cfg.tol) {
    std::ostringstream os;
    os << "node doubling changed the Wigner value by " << change;
    throw Error(ErrorCode::QuadratureNotConverged, os.str(), change);
  }
  return fine.real();
}

}  // namespace gaussep
