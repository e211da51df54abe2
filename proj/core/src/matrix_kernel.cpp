#include "gaussep/matrix_kernel.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "gaussep/errors.hpp"

namespace gaussep {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotBonaFide: return "NotBonaFide";
    case ErrorCode::NotSymplectic: return "NotSymplectic";
    case ErrorCode::NotInLieAlgebra: return "NotInLieAlgebra";
    case ErrorCode::ReconstructionMismatch: return "ReconstructionMismatch";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::NonzeroMean: return "NonzeroMean";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

void require_square(const auto& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    std::ostringstream os;
    os << what << " must be square with dim >= 1, got " << m.rows() << "x" << m.cols();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

// Flip each column so its first significant component is positive. Makes the
// eigenvector basis deterministic across runs and inputs that differ by sign.
void canonicalize_signs(Matrix& v) {
  for (Index k = 0; k < v.cols(); ++k) {
    const double scale = v.col(k).cwiseAbs().maxCoeff();
    for (Index i = 0; i < v.rows(); ++i) {
      if (std::abs(v(i, k)) > 1e-8 * scale) {
        if (v(i, k) < 0) v.col(k) = -v.col(k);
        break;
      }
    }
  }
}

SymMatrix from_spectrum(const SymEigen& e, auto&& f) {
  const Vector mapped = e.values.unaryExpr(f);
  return SymMatrix(e.vectors * mapped.asDiagonal() * e.vectors.transpose());
}

}  // namespace

// ---------------------------------------------------------------------------
// SymMatrix / HermMatrix

SymMatrix::SymMatrix(const Matrix& m) {
  require_square(m, "SymMatrix");
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::identity(Index dim) { return SymMatrix(Matrix::Identity(dim, dim)); }
SymMatrix SymMatrix::diagonal(const Vector& d) { return SymMatrix(Matrix(d.asDiagonal())); }
SymMatrix SymMatrix::zero(Index dim) { return SymMatrix(Matrix::Zero(dim, dim)); }

double SymMatrix::max_abs() const noexcept { return gaussep::max_abs(m_); }

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) { return SymMatrix(a.m_ + b.m_); }
SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) { return SymMatrix(a.m_ - b.m_); }
SymMatrix operator*(double s, const SymMatrix& a) { return SymMatrix(s * a.m_); }

HermMatrix::HermMatrix(const CMatrix& h) {
  require_square(h, "HermMatrix");
  h_ = 0.5 * (h + h.adjoint());
}

HermMatrix::HermMatrix(const SymMatrix& re, const Matrix& im) {
  if (im.rows() != re.dim() || im.cols() != re.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "HermMatrix: real and imaginary parts differ in size");
  }
  CMatrix h(re.dim(), re.dim());
  h.real() = re.matrix();
  h.imag() = 0.5 * (im - im.transpose());
  h_ = std::move(h);
}

double HermMatrix::max_abs() const noexcept {
  return h_.size() == 0 ? 0.0 : h_.cwiseAbs().maxCoeff();
}

double max_abs(const Matrix& m) noexcept { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool is_symmetric(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, max_abs(m));
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

SymMatrix direct_sum(const SymMatrix& a, const SymMatrix& b) {
  return SymMatrix(direct_sum(a.matrix(), b.matrix()));
}

// ---------------------------------------------------------------------------
// Eigensolvers

SymEigen sym_eig(const SymMatrix& m, const Tolerances& tol) {
  const Index n = m.dim();
  Matrix a = m.matrix();
  Matrix v = Matrix::Identity(n, n);
  const double norm = a.norm();
  const double target = tol.jacobi_offdiag * norm;

  auto off_norm = [&] {
    double s = 0.0;
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  if (norm > 0.0) {
    while (off_norm() > target) {
      if (sweep == tol.jacobi_max_sweeps) {
        throw Error(ErrorCode::NonConvergence,
                    "Jacobi eigensolver did not converge within the sweep cap", off_norm());
      }
      ++sweep;
      for (Index p = 0; p < n - 1; ++p) {
        for (Index q = p + 1; q < n; ++q) {
          const double apq = a(p, q);
          if (apq == 0.0) continue;
          const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
          const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          const double c = 1.0 / std::sqrt(t * t + 1.0);
          const double s = t * c;

          const Vector colp = a.col(p);
          const Vector colq = a.col(q);
          a.col(p) = c * colp - s * colq;
          a.col(q) = s * colp + c * colq;
          const Eigen::RowVectorXd rowp = a.row(p);
          const Eigen::RowVectorXd rowq = a.row(q);
          a.row(p) = c * rowp - s * rowq;
          a.row(q) = s * rowp + c * rowq;
          a(p, q) = 0.0;
          a(q, p) = 0.0;

          const Vector vp = v.col(p);
          const Vector vq = v.col(q);
          v.col(p) = c * vp - s * vq;
          v.col(q) = s * vp + c * vq;
        }
      }
    }
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return a(i, i) < a(j, j); });

  SymEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]);
    out.vectors.col(k) = v.col(order[k]);
  }
  canonicalize_signs(out.vectors);
  out.sweeps = sweep;
  return out;
}

HermEigen herm_eig(const HermMatrix& h, const Tolerances& tol) {
  const Index d = h.dim();
  const Matrix re = h.matrix().real();
  const Matrix im = h.matrix().imag();
  Matrix embed(2 * d, 2 * d);
  embed << re, -im, im, re;
  const SymEigen e = sym_eig(SymMatrix(embed), tol);

  // Real eigenvector (u; v) corresponds to complex u + iv. Each complex
  // eigenvector shows up twice, as w and i*w, so within each cluster of equal
  // eigenvalues we keep a maximal complex-orthonormal subset by pivoting on
  // the largest residual after projecting out what has been kept.
  std::vector<CVector> kept;
  std::vector<double> kept_values;
  const double cluster_tol = 1e-10 * std::max(1.0, h.max_abs());

  Index start = 0;
  while (start < 2 * d) {
    Index end = start + 1;
    while (end < 2 * d && e.values(end) - e.values(end - 1) <= cluster_tol) ++end;
    const Index size = end - start;
    const Index take = std::min<Index>((size + 1) / 2, d - static_cast<Index>(kept.size()));

    std::vector<CVector> candidates;
    for (Index k = start; k < end; ++k) {
      CVector w(d);
      w.real() = e.vectors.col(k).head(d);
      w.imag() = e.vectors.col(k).tail(d);
      candidates.push_back(std::move(w));
    }
    for (Index t = 0; t < take; ++t) {
      double best = -1.0;
      CVector best_vec;
      for (const CVector& w : candidates) {
        CVector r = w;
        for (const CVector& q : kept) r -= q * q.dot(r);
        const double nrm = r.norm();
        if (nrm > best) {
          best = nrm;
          best_vec = std::move(r);
        }
      }
      best_vec /= best;
      kept_values.push_back((best_vec.dot(h.matrix() * best_vec)).real());
      kept.push_back(std::move(best_vec));
    }
    start = end;
  }

  std::vector<Index> order(kept.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return kept_values[i] < kept_values[j]; });

  HermEigen out;
  out.values.resize(d);
  out.vectors.resize(d, d);
  for (Index k = 0; k < d; ++k) {
    out.values(k) = kept_values[order[k]];
    out.vectors.col(k) = kept[order[k]];
  }
  return out;
}

double min_eigenvalue(const SymMatrix& m, const Tolerances& tol) { return sym_eig(m, tol).values(0); }
double min_eigenvalue(const HermMatrix& h, const Tolerances& tol) { return herm_eig(h, tol).values(0); }

// ---------------------------------------------------------------------------
// Spectral functions

SymMatrix psd_project(const SymMatrix& m, const Tolerances& tol) {
  return from_spectrum(sym_eig(m, tol), [](double x) { return std::max(x, 0.0); });
}

HermMatrix psd_project(const HermMatrix& h, const Tolerances& tol) {
  const HermEigen e = herm_eig(h, tol);
  const Vector clipped = e.values.cwiseMax(0.0);
  return HermMatrix(CMatrix(e.vectors * clipped.cast<Complex>().asDiagonal() * e.vectors.adjoint()));
}

namespace {

SymEigen checked_pd_eig(const SymMatrix& m, const Tolerances& tol) {
  SymEigen e = sym_eig(m, tol);
  const double threshold = tol.positive_definite * m.max_abs();
  if (!(e.values(0) > threshold)) {
    std::ostringstream os;
    os << "min eigenvalue " << e.values(0) << " <= " << threshold;
    throw Error(ErrorCode::NotPositiveDefinite, os.str(), e.values(0));
  }
  return e;
}

}  // namespace

void require_positive_definite(const SymMatrix& m, const Tolerances& tol) { checked_pd_eig(m, tol); }

SymMatrix sqrtm_spd(const SymMatrix& m, const Tolerances& tol) {
  return from_spectrum(checked_pd_eig(m, tol), [](double x) { return std::sqrt(x); });
}

SymMatrix inv_sqrtm_spd(const SymMatrix& m, const Tolerances& tol) {
  return from_spectrum(checked_pd_eig(m, tol), [](double x) { return 1.0 / std::sqrt(x); });
}

SymMatrix expm_sym(const SymMatrix& m, const Tolerances& tol) {
  return from_spectrum(sym_eig(m, tol), [](double x) { return std::exp(x); });
}

SymMatrix logm_spd(const SymMatrix& m, const Tolerances& tol) {
  return from_spectrum(checked_pd_eig(m, tol), [](double x) { return std::log(x); });
}

Vector solve_spd(const SymMatrix& m, const Vector& b, const Tolerances& tol) {
  if (b.size() != m.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "solve_spd: right-hand side has wrong length");
  }
  checked_pd_eig(m, tol);
  return m.matrix().llt().solve(b);
}

SymMatrix inverse_spd(const SymMatrix& m, const Tolerances& tol) {
  return from_spectrum(checked_pd_eig(m, tol), [](double x) { return 1.0 / x; });
}

}  // namespace gaussep
