#include "gaussep/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "gaussep/errors.hpp"
#include "gaussep/random.hpp"

namespace gaussep {

namespace {

void require_even_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0 || m.rows() % 2 != 0) {
    std::ostringstream os;
    os << what << ": expected a square matrix of even dimension, got " << m.rows() << "x" << m.cols();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

Matrix random_symmetric(int n, SplitMix64& rng) {
  Matrix g(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) g(i, j) = rng.normal();
  return 0.5 * (g + g.transpose());
}

// Passive (orthogonal and symplectic) transformation exp(i*angle*H) embedded as
// [[Re U, -Im U], [Im U, Re U]] for a random Hermitian H.
Matrix random_passive(int n, double angle, SplitMix64& rng) {
  const Matrix re = random_symmetric(n, rng);
  Matrix im(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) im(i, j) = rng.normal();
  const HermEigen e = herm_eig(HermMatrix(SymMatrix(re), im - im.transpose()));
  CVector phases(n);
  for (Index k = 0; k < n; ++k) phases(k) = std::polar(1.0, angle * e.values(k));
  const CMatrix u = e.vectors * phases.asDiagonal() * e.vectors.adjoint();
  Matrix out(2 * n, 2 * n);
  out << u.real(), -u.imag(), u.imag(), u.real();
  return out;
}

}  // namespace

bool SymplecticForm::is_standard() const {
  return j_.rows() == dim() && j_ == standard_J(modes_).matrix();
}

SymplecticForm standard_J(int modes) {
  if (modes < 1) throw Error(ErrorCode::InvalidArgument, "standard_J: mode count must be >= 1");
  Matrix j = Matrix::Zero(2 * modes, 2 * modes);
  j.topRightCorner(modes, modes) = Matrix::Identity(modes, modes);
  j.bottomLeftCorner(modes, modes) = -Matrix::Identity(modes, modes);
  return SymplecticForm(modes, std::move(j));
}

SymplecticForm direct_sum(const SymplecticForm& a, const SymplecticForm& b) {
  return SymplecticForm(a.modes() + b.modes(), direct_sum(a.matrix(), b.matrix()));
}

SymplecticMatrix::SymplecticMatrix(const Matrix& m, double tol) : m_(m) {
  const double residual = symplectic_residual(m);
  if (!(residual <= tol)) {
    std::ostringstream os;
    os << "||S^T J S - J||_F = " << residual << " exceeds " << tol;
    throw Error(ErrorCode::NotSymplectic, os.str(), residual);
  }
}

double symplectic_residual(const Matrix& m, const SymplecticForm& j) {
  require_even_square(m, "symplectic_residual");
  if (m.rows() != j.dim()) throw Error(ErrorCode::DimensionMismatch, "symplectic_residual: form size differs");
  return (m.transpose() * j.matrix() * m - j.matrix()).norm();
}

double symplectic_residual(const Matrix& m) {
  require_even_square(m, "symplectic_residual");
  return symplectic_residual(m, standard_J(static_cast<int>(m.rows() / 2)));
}

bool is_symplectic(const Matrix& m, double tol) { return symplectic_residual(m) <= tol; }

bool is_symplectic(const Matrix& m, const SymplecticForm& j, double tol) {
  return symplectic_residual(m, j) <= tol;
}

bool is_posdef_symplectic(const Matrix& m, double tol) {
  require_even_square(m, "is_posdef_symplectic");
  if (!is_symmetric(m, tol)) return false;
  if (!(min_eigenvalue(SymMatrix(m)) > 0.0)) return false;
  return is_symplectic(m, tol);
}

Vector symplectic_eigenvalues(const SymMatrix& sigma, const SymplecticForm& j, const Tolerances& tol) {
  if (sigma.dim() != j.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "symplectic_eigenvalues: covariance and form differ in size");
  }
  // J*Sigma is similar to K = R J R with R = Sigma^{1/2}; K is antisymmetric
  // and -K^2 = K^T K carries each nu^2 twice.
  const SymMatrix root = sqrtm_spd(sigma, tol);
  const Matrix k = root.matrix() * j.matrix() * root.matrix();
  const SymEigen e = sym_eig(SymMatrix(k.transpose() * k), tol);
  const int n = j.modes();
  Vector nu(n);
  for (int i = 0; i < n; ++i) {
    const Index hi = 2 * n - 1 - 2 * i;
    nu(i) = std::sqrt(std::max(0.0, 0.5 * (e.values(hi) + e.values(hi - 1))));
  }
  return nu;
}

SymMatrix WilliamsonDecomposition::normal_form() const {
  Vector d(2 * nu.size());
  d << nu, nu;
  return SymMatrix::diagonal(d);
}

WilliamsonDecomposition williamson(const SymMatrix& sigma, const SymplecticForm& j, const Tolerances& tol) {
  if (!j.is_standard()) {
    throw Error(ErrorCode::InvalidArgument, "williamson: requires the standard symplectic form");
  }
  if (sigma.dim() != j.dim()) throw Error(ErrorCode::DimensionMismatch, "williamson: size mismatch");
  const int n = j.modes();
  const Index d = j.dim();

  const SymMatrix root = sqrtm_spd(sigma, tol);
  const Matrix k = root.matrix() * j.matrix() * root.matrix();
  const SymEigen e = sym_eig(SymMatrix(k.transpose() * k), tol);

  // Walk eigenvectors of -K^2 from the largest eigenvalue down. Each accepted
  // u pairs with w = -K u / |K u|, giving u^T K w = nu. Inside a cluster of
  // equal eigenvalues the vector with the largest residual is taken first.
  Matrix us(d, n);
  Matrix ws(d, n);
  Vector nu(n);
  int found = 0;
  const double cluster_tol = 1e-9 * std::max(e.values(d - 1), 1e-300);

  auto residual_of = [&](Vector v) {
    for (int c = 0; c < found; ++c) {
      v -= us.col(c) * us.col(c).dot(v);
      v -= ws.col(c) * ws.col(c).dot(v);
    }
    return v;
  };

  Index hi = d - 1;
  while (found < n && hi >= 0) {
    Index lo = hi;
    while (lo > 0 && e.values(hi) - e.values(lo - 1) <= cluster_tol) --lo;
    const int pairs = std::min<int>(static_cast<int>((hi - lo + 2) / 2), n - found);
    for (int p = 0; p < pairs; ++p) {
      double best = -1.0;
      Vector best_vec;
      for (Index c = hi; c >= lo; --c) {
        Vector r = residual_of(e.vectors.col(c));
        const double nrm = r.norm();
        if (nrm > best) {
          best = nrm;
          best_vec = std::move(r);
        }
      }
      Vector u = best_vec / best;
      Vector ku = k * u;
      Vector w = -ku / ku.norm();
      us.col(found) = u;
      ws.col(found) = w;
      nu(found) = u.dot(k * w);
      ++found;
    }
    hi = lo - 1;
  }
  if (found != n) {
    throw Error(ErrorCode::NonConvergence, "williamson: failed to assemble a symplectic basis");
  }

  Matrix o(d, d);
  o << us, ws;
  Vector inv_sqrt_d(d);
  inv_sqrt_d << nu.cwiseSqrt().cwiseInverse(), nu.cwiseSqrt().cwiseInverse();

  WilliamsonDecomposition out;
  out.S = root.matrix() * o * inv_sqrt_d.asDiagonal();
  out.nu = nu;
  const double gap_tol = tol.degenerate_spectrum * std::max(1.0, nu.maxCoeff());
  for (int i = 0; i + 1 < n; ++i) {
    if (std::abs(nu(i) - nu(i + 1)) < gap_tol) out.degenerate = true;
  }
  return out;
}

SymMatrix blob_extract(const SymMatrix& sigma_x, double hbar, const SymplecticForm& j, const Tolerances& tol) {
  const WilliamsonDecomposition w = williamson(sigma_x, j, tol);
  const double nu_min = w.nu.minCoeff();
  const double threshold = 0.5 * hbar - tol.bona_fide * std::max(1.0, sigma_x.max_abs());
  if (nu_min < threshold) {
    std::ostringstream os;
    os << "smallest symplectic eigenvalue " << nu_min << " is below hbar/2 = " << 0.5 * hbar;
    throw Error(ErrorCode::NotBonaFide, os.str(), nu_min);
  }
  return SymMatrix(w.S * w.S.transpose());
}

SymplecticMatrix random_symplectic(int modes, std::uint64_t seed, double spread) {
  if (modes < 1) throw Error(ErrorCode::InvalidArgument, "random_symplectic: mode count must be >= 1");
  if (spread < 0.0) throw Error(ErrorCode::InvalidArgument, "random_symplectic: spread must be >= 0");
  const Index d = 2 * modes;
  if (spread == 0.0) return SymplecticMatrix(Matrix::Identity(d, d));

  SplitMix64 rng(seed);
  // [[A, B], [B, -A]] with Gaussian A, B has norm ~ 2 sqrt(n); normalize so the
  // squeezing per factor is about exp(spread) whatever the mode count.
  const double scale = spread / (2.0 * std::sqrt(static_cast<double>(modes)));
  Matrix s = random_passive(modes, spread, rng);
  for (int k = 0; k < 3; ++k) {
    const SymMatrix a(random_symmetric(modes, rng));
    const SymMatrix b(random_symmetric(modes, rng));
    const SymMatrix x = scale * lie_symmetric_element(a, b);
    s = s * expm_sym(x).matrix();
    s = s * random_passive(modes, spread, rng);
  }
  return SymplecticMatrix(s, 1e-9);
}

SymMatrix lie_symmetric_element(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "lie_symmetric_element: block sizes differ");
  const Index n = a.dim();
  Matrix x(2 * n, 2 * n);
  x << a.matrix(), b.matrix(), b.matrix(), -a.matrix();
  return SymMatrix(x);
}

double lie_algebra_residual(const SymMatrix& x) {
  require_even_square(x.matrix(), "lie_algebra_residual");
  const Matrix j = standard_J(static_cast<int>(x.dim() / 2)).matrix();
  return (x.matrix() * j + j * x.matrix()).norm();
}

SymMatrix posdef_symplectic_from_param(const SymMatrix& x, const Tolerances& tol) {
  const double residual = lie_algebra_residual(x);
  if (residual > tol.lie_algebra * std::max(1.0, x.max_abs())) {
    std::ostringstream os;
    os << "||X J + J X||_F = " << residual;
    throw Error(ErrorCode::NotInLieAlgebra, os.str(), residual);
  }
  return expm_sym(x, tol);
}

}  // namespace gaussep
