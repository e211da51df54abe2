#pragma once

// Reproducible covariance generators used by the CLI, tests and benchmarks.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gaussep/gaussian_state.hpp"

namespace gaussep {

/// Two-mode squeezed vacuum, (hbar/2)[[c I, s Z], [s Z, c I]] with c = cosh 2r,
/// s = sinh 2r and Z = diag(1, -1) per (x, p) block. `pairs` independent
/// copies give an n+n state with Z = diag(I_n, -I_n).
SymMatrix tmsv_covariance(double r, double hbar, int pairs = 1);

/// TMSV plus t * I.
SymMatrix tmsv_noisy_covariance(double r, double t, double hbar, int pairs = 1);

/// diag(nu, nu) for per-mode thermal occupations nu_j >= hbar/2.
SymMatrix thermal_covariance(const Vector& nu);

/// S diag(nu, nu) S^T with S = random_symplectic(n, seed, spread) and nu_j
/// uniform in [hbar/2, hbar/2 + spread], in global (x.., p..) ordering.
SymMatrix random_bonafide_covariance(int modes, std::uint64_t seed, double spread, double hbar);

/// The same draw re-laid out per subsystem for a bipartite state.
SymMatrix random_bonafide_covariance(const Partition& partition, std::uint64_t seed, double spread, double hbar);

enum class EnsembleKind { ThermalProduct, RandomBonafide, Tmsv, TmsvNoisy };

EnsembleKind parse_ensemble_kind(std::string_view name);
std::string_view to_string(EnsembleKind kind) noexcept;

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::RandomBonafide;
  int n_a = 1;
  int n_b = 1;
  std::uint64_t seed = 0;
  int count = 1;
  double spread = 0.5;
  double r = 0.5;
  double t = 0.0;
  double hbar = 1.0;

  /// Throws InvalidArgument for out-of-range parameters.
  void validate() const;
};

struct GeneratedState {
  SymMatrix sigma;
  std::string label;
};

/// Deterministic per spec. State k uses seed + k where randomness is involved.
std::vector<GeneratedState> generate_ensemble(const EnsembleSpec& spec);

}  // namespace gaussep
