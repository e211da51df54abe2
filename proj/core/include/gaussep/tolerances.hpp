#pragma once

namespace gaussep {

// Central tolerance defaults. Values marked "scaled" are multiplied by a
// magnitude of the matrix they apply to (max |entry| or Frobenius norm).
struct Tolerances {
  double jacobi_offdiag = 1e-14;  // scaled: off-diagonal Frobenius / ||M||_F
  int jacobi_max_sweeps = 100;
  double positive_definite = 1e-12;  // scaled by max |entry|
  double symplectic = 1e-10;         // ||M^T J M - J||_F
  double symmetric = 1e-10;          // scaled by max(1, max |entry|)
  double lie_algebra = 1e-10;        // ||X J + J X||_F, scaled
  double bona_fide = 1e-9;           // scaled by max(1, max |entry|)
  double degenerate_spectrum = 1e-12;
  double reconstruction = 1e-9;
};

inline constexpr Tolerances kDefaultTolerances{};

}  // namespace gaussep
