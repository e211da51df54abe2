#include "doctest.h"

#include <cmath>
#include <complex>

#include "gaussep/errors.hpp"
#include "gaussep/matrix_kernel.hpp"
#include "support.hpp"

using namespace gaussep;
using namespace gaussep::testing;

TEST_SUITE("matrix_kernel") {

TEST_CASE("SymMatrix symmetrizes exactly on construction") {
  Matrix m(2, 2);
  m << 1.0, 2.0, 4.0, 3.0;
  const SymMatrix s(m);
  CHECK(s(0, 1) == s(1, 0));
  CHECK(s(0, 1) == 3.0);
  CHECK(s.max_abs() == 3.0);
}

TEST_CASE("sym_eig on diag(3,1) sorts ascending with a permutation basis") {
  Vector d(2);
  d << 3.0, 1.0;
  const SymEigen e = sym_eig(SymMatrix::diagonal(d));
  CHECK(e.values(0) == doctest::Approx(1.0));
  CHECK(e.values(1) == doctest::Approx(3.0));
  CHECK(std::abs(e.vectors(1, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(e.vectors(0, 1)) == doctest::Approx(1.0));
}

TEST_CASE("sym_eig on the swap matrix") {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  const SymEigen e = sym_eig(SymMatrix(m));
  CHECK(e.values(0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(e.values(1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("sym_eig reconstructs random matrices and agrees with an independent solver") {
  SplitMix64 rng(11);
  for (int n : {1, 2, 3, 6, 12}) {
    for (int trial = 0; trial < 5; ++trial) {
      const SymMatrix m = random_symmetric(n, rng);
      const SymEigen e = sym_eig(m);
      const Matrix recon = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
      const double tol = 1e-12 * n * std::max(1.0, m.max_abs());
      CHECK((recon - m.matrix()).cwiseAbs().maxCoeff() < tol);
      CHECK((e.vectors.transpose() * e.vectors - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() < tol);
      CHECK((e.values - oracle_eigenvalues(m.matrix())).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, m.max_abs()));
      for (Index k = 1; k < n; ++k) CHECK(e.values(k - 1) <= e.values(k));
    }
  }
}

TEST_CASE("sym_eig is deterministic and reports sweeps") {
  SplitMix64 rng(5);
  const SymMatrix m = random_symmetric(6, rng);
  const SymEigen a = sym_eig(m);
  const SymEigen b = sym_eig(m);
  CHECK(a.vectors == b.vectors);
  CHECK(a.sweeps > 0);
  CHECK(a.sweeps <= kDefaultTolerances.jacobi_max_sweeps);
}

TEST_CASE("sym_eig reports non-convergence at the sweep cap") {
  SplitMix64 rng(5);
  Tolerances tight;
  tight.jacobi_max_sweeps = 1;
  CHECK_THROWS_AS(sym_eig(random_symmetric(8, rng), tight), Error);
}

TEST_CASE("herm_eig on i*J has the Pauli-Y spectrum") {
  CMatrix h(2, 2);
  h << 0.0, Complex(0, 1), Complex(0, -1), 0.0;
  const HermEigen e = herm_eig(HermMatrix(h));
  REQUIRE(e.values.size() == 2);
  CHECK(e.values(0) == doctest::Approx(-1.0));
  CHECK(e.values(1) == doctest::Approx(1.0));
}

TEST_CASE("herm_eig on Sigma + (i/2) J for the one-mode vacuum") {
  Matrix j(2, 2);
  j << 0, 1, -1, 0;
  const SymMatrix sigma = 0.5 * SymMatrix::identity(2);
  const HermEigen v = herm_eig(HermMatrix(sigma, 0.5 * j));
  CHECK(std::abs(v.values(0)) < 1e-14);
  CHECK(v.values(1) == doctest::Approx(1.0));
}

TEST_CASE("herm_eig with zero imaginary part matches sym_eig") {
  SplitMix64 rng(3);
  const SymMatrix m = random_symmetric(5, rng);
  const HermEigen h = herm_eig(HermMatrix(m, Matrix::Zero(5, 5)));
  const SymEigen s = sym_eig(m);
  CHECK((h.values - s.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("herm_eig agrees with a direct complex computation on 2x2 and 4x4") {
  SplitMix64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    // 2x2 closed form: (a + d)/2 -+ sqrt(((a - d)/2)^2 + |b|^2).
    const double a = rng.normal(), d = rng.normal();
    const Complex b(rng.normal(), rng.normal());
    CMatrix h2(2, 2);
    h2 << a, b, std::conj(b), d;
    const double mid = 0.5 * (a + d);
    const double rad = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(b));
    const HermEigen e2 = herm_eig(HermMatrix(h2));
    CHECK(std::abs(e2.values(0) - (mid - rad)) < 1e-10);
    CHECK(std::abs(e2.values(1) - (mid + rad)) < 1e-10);

    CMatrix g(4, 4);
    for (Index i = 0; i < 4; ++i)
      for (Index k = 0; k < 4; ++k) g(i, k) = Complex(rng.normal(), rng.normal());
    const CMatrix h4 = 0.5 * (g + g.adjoint());
    const HermEigen e4 = herm_eig(HermMatrix(h4));
    CHECK((e4.values - oracle_eigenvalues(h4)).cwiseAbs().maxCoeff() < 1e-10);
    const CMatrix recon = e4.vectors * e4.values.cast<Complex>().asDiagonal() * e4.vectors.adjoint();
    CHECK((recon - h4).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((e4.vectors.adjoint() * e4.vectors - CMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("herm_eig handles degenerate spectra") {
  CMatrix h = CMatrix::Identity(3, 3);
  h(0, 1) = Complex(0, 1e-300);
  h(1, 0) = std::conj(h(0, 1));
  const HermEigen e = herm_eig(HermMatrix(h));
  CHECK((e.values - Vector::Ones(3)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((e.vectors.adjoint() * e.vectors - CMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("psd_project examples") {
  Vector d(2);
  d << 2.0, -1.0;
  const SymMatrix clipped = psd_project(SymMatrix::diagonal(d));
  CHECK(clipped(0, 0) == doctest::Approx(2.0));
  CHECK(std::abs(clipped(1, 1)) < 1e-15);

  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  const SymMatrix half = psd_project(SymMatrix(swap));
  CHECK((half.matrix() - Matrix::Constant(2, 2, 0.5)).cwiseAbs().maxCoeff() < 1e-14);

  SplitMix64 rng(8);
  const SymMatrix p = random_spd(4, rng);
  CHECK((psd_project(p).matrix() - p.matrix()).cwiseAbs().maxCoeff() < 1e-12 * p.max_abs());
}

TEST_CASE("psd_project is PSD and no farther than any sampled PSD matrix") {
  SplitMix64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const SymMatrix m = random_symmetric(5, rng);
    const SymMatrix p = psd_project(m);
    CHECK(min_eigenvalue(p) >= -1e-12 * std::max(1.0, m.max_abs()));
    const double dist = (p.matrix() - m.matrix()).norm();
    for (int q = 0; q < 10; ++q) {
      const SymMatrix other = random_spd(5, rng, 0.0);
      CHECK(dist <= (other.matrix() - m.matrix()).norm() + 1e-12);
    }
  }
}

TEST_CASE("psd_project on Hermitian input") {
  CMatrix h(2, 2);
  h << 0.0, Complex(0, 1), Complex(0, -1), 0.0;
  const HermMatrix p = psd_project(HermMatrix(h));
  CHECK(min_eigenvalue(p) > -1e-14);
  const CMatrix expected = 0.5 * (CMatrix::Identity(2, 2) + h);
  CHECK((p.matrix() - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("sqrtm_spd") {
  CHECK((sqrtm_spd(SymMatrix::identity(3)).matrix() - Matrix::Identity(3, 3)).norm() < 1e-15);
  Vector d(2);
  d << 4.0, 9.0;
  const SymMatrix r = sqrtm_spd(SymMatrix::diagonal(d));
  CHECK(r(0, 0) == doctest::Approx(2.0));
  CHECK(r(1, 1) == doctest::Approx(3.0));

  SplitMix64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const SymMatrix p = random_spd(6, rng);
    const SymMatrix root = sqrtm_spd(p);
    CHECK(rel_frobenius(root.matrix() * root.matrix(), p.matrix()) < 1e-10);
    CHECK(min_eigenvalue(root) > 0.0);
    const SymMatrix inv_root = inv_sqrtm_spd(p);
    CHECK((inv_root.matrix() * root.matrix() - Matrix::Identity(6, 6)).norm() < 1e-9);
  }
}

TEST_CASE("sqrtm_spd rejects matrices that are not positive definite") {
  Vector d(2);
  d << 1.0, 0.0;
  try {
    (void)sqrtm_spd(SymMatrix::diagonal(d));
    FAIL("expected NotPositiveDefinite");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPositiveDefinite);
  }
  d << 1.0, -1.0;
  CHECK_THROWS_AS(inverse_spd(SymMatrix::diagonal(d)), Error);
}

TEST_CASE("expm_sym") {
  CHECK((expm_sym(SymMatrix::zero(3)).matrix() - Matrix::Identity(3, 3)).norm() < 1e-15);
  Vector d(2);
  d << std::log(2.0), -std::log(2.0);
  const SymMatrix e = expm_sym(SymMatrix::diagonal(d));
  CHECK(e(0, 0) == doctest::Approx(2.0));
  CHECK(e(1, 1) == doctest::Approx(0.5));

  SplitMix64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const SymMatrix a = random_symmetric(5, rng);
    const Matrix ea = expm_sym(a).matrix();
    const Matrix ema = expm_sym(-1.0 * a).matrix();
    CHECK((ea * ema - Matrix::Identity(5, 5)).norm() < 1e-10);
    CHECK((ea * a.matrix() - a.matrix() * ea).norm() < 1e-10 * std::max(1.0, ea.norm()));
    CHECK(rel_frobenius(logm_spd(SymMatrix(ea)).matrix(), a.matrix()) < 1e-10);
  }
}

TEST_CASE("solve_spd and inverse_spd") {
  Vector b(3);
  b << 1.0, -2.0, 3.0;
  CHECK((solve_spd(SymMatrix::identity(3), b) - b).norm() < 1e-15);

  Vector d(2), rhs(2);
  d << 2.0, 4.0;
  rhs << 2.0, 4.0;
  const Vector x = solve_spd(SymMatrix::diagonal(d), rhs);
  CHECK(x(0) == doctest::Approx(1.0));
  CHECK(x(1) == doctest::Approx(1.0));

  SplitMix64 rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    const SymMatrix m = random_spd(6, rng);
    Vector v(6);
    for (Index i = 0; i < 6; ++i) v(i) = rng.normal();
    const Vector sol = solve_spd(m, v);
    CHECK((m.matrix() * sol - v).norm() / v.norm() < 1e-10);
    CHECK((m.matrix() * inverse_spd(m).matrix() - Matrix::Identity(6, 6)).norm() < 1e-9);
  }
}

TEST_CASE("direct_sum and is_symmetric") {
  const Matrix a = Matrix::Constant(1, 1, 2.0);
  const Matrix b = Matrix::Constant(2, 2, 3.0);
  const Matrix s = direct_sum(a, b);
  CHECK(s.rows() == 3);
  CHECK(s(0, 0) == 2.0);
  CHECK(s(0, 1) == 0.0);
  CHECK(s(2, 2) == 3.0);
  Matrix m(2, 2);
  m << 1, 2, 2.1, 1;
  CHECK_FALSE(is_symmetric(m, 1e-10));
  m(1, 0) = 2.0;
  CHECK(is_symmetric(m, 1e-10));
}

}  // TEST_SUITE
