#pragma once

// Separability of bipartite Gaussian states.
//
// A state is separable iff Sigma >= (hbar/2)(P_A (+) P_B) for some positive
// definite symplectic P_A, P_B. The decision procedure is one-sided:
//   * PPT violation                       -> Entangled, with the PPT witness;
//   * Werner-Wolf pair found, blob bound  -> Separable, with (P_A, P_B);
//   * anything else                       -> Undetermined.
// Every Separable verdict carries matrices that certificate_check re-verifies
// without trusting how they were found.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "gaussep/gaussian_state.hpp"

namespace gaussep {

struct SolverConfig {
  int max_iter = 20000;
  double residual_tol = 1e-9;
  int stall_window = 500;
  double stall_factor = 0.999;
  double cert_tol = 1e-9;
  int inner_max_iter = 200;
  /// Try the direct exp-parametrized search when the Werner-Wolf solver fails.
  bool direct_search_fallback = true;
  int direct_search_max_evaluations = 6000;
};

struct SeparabilityCertificate {
  SymMatrix p_a;
  SymMatrix p_b;
  SymMatrix s_a;  // (S_A^T S_A)^{-1} = P_A
  SymMatrix s_b;
  double slack = 0.0;  // min eig(Sigma - (hbar/2)(P_A (+) P_B))
  SymMatrix sigma_a;   // the local covariances that produced P_A, P_B
  SymMatrix sigma_b;
  std::string source;  // "werner-wolf" or "direct-search"
};

struct EntanglementWitness {
  double nu_tilde_min = 0.0;
  double threshold = 0.0;  // hbar / 2
};

struct Separable {
  SeparabilityCertificate certificate;
};
struct Entangled {
  EntanglementWitness witness;
};
struct Undetermined {
  double residual = 0.0;
  int iterations = 0;
};

using SeparabilityVerdict = std::variant<Separable, Entangled, Undetermined>;

std::string_view verdict_name(const SeparabilityVerdict& v) noexcept;

// ---------------------------------------------------------------------------
// PPT

/// Lambda Sigma Lambda with Lambda flipping the sign of p_B.
SymMatrix partial_transpose(const SymMatrix& sigma, const Partition& partition);

struct PptResult {
  bool pass = false;
  Vector nu_tilde;  // symplectic eigenvalues of the partial transpose, descending
  std::optional<EntanglementWitness> witness;
};

PptResult ppt_test(const GaussianState& state, const Tolerances& tol = kDefaultTolerances);

// ---------------------------------------------------------------------------
// Werner-Wolf feasibility

struct WernerWolfPair {
  SymMatrix sigma_a;
  SymMatrix sigma_b;
};

struct FeasibilityResult {
  std::optional<WernerWolfPair> pair;
  int iterations = 0;
  double residual = 0.0;  // final constraint residual (or inter-set gap on failure)
  bool stalled = false;
};

/// Finds Sigma_A, Sigma_B with Sigma >= Sigma_A (+) Sigma_B and both local
/// quantum conditions, by Dykstra alternating projections. Absent pair means
/// the search gave up, not that none exists.
FeasibilityResult werner_wolf_feasibility(const SymMatrix& sigma, const Partition& partition, double hbar,
                                          const SolverConfig& cfg = {});

// ---------------------------------------------------------------------------
// Certificates

/// min eig(Sigma - (hbar/2)(P_A (+) P_B)). Throws NotSymplectic unless both P
/// are symmetric positive definite symplectic.
double certificate_check(const SymMatrix& sigma, const Matrix& p_a, const Matrix& p_b, double hbar,
                         double symplectic_tol = 1e-9);

struct DirectSearchResult {
  SymMatrix p_a;
  SymMatrix p_b;
  double slack = 0.0;
  int evaluations = 0;
};

/// Maximizes min eig(Sigma - (hbar/2)(exp X_A (+) exp X_B)) over symmetric
/// Lie-algebra parameters. Returns a result only when slack >= -cert_tol.
std::optional<DirectSearchResult> direct_symplectic_search(const GaussianState& state, const SolverConfig& cfg = {});

struct CriterionReport {
  SeparabilityVerdict verdict;
  PptResult ppt;
  int solver_iterations = 0;
  double solver_residual = 0.0;
};

CriterionReport run_criterion(const GaussianState& state, const SolverConfig& cfg = {});
SeparabilityVerdict degosson_criterion(const GaussianState& state, const SolverConfig& cfg = {});

// ---------------------------------------------------------------------------
// Pure product states and domination

struct EqualityCase {
  GaussianState state;
  PureGaussian a;
  PureGaussian b;
};

/// Sigma = (hbar/2)[(S_A^T S_A)^{-1} (+) (S_B^T S_B)^{-1}]: the pure product state
/// attaining equality in the criterion.
EqualityCase equality_case_state(const SymplecticMatrix& s_a, const SymplecticMatrix& s_b, double hbar);

enum class DominationMode { Matrix, Sampled };

struct DominationResult {
  bool holds = false;
  /// Matrix mode: min eig(Sigma - (hbar/2)[(S_A^T S_A)^{-1} (+) (S_B^T S_B)^{-1}]).
  /// Sampled mode: min over samples of log rho(S^{-1} z) - log(mu W phi_A W phi_B).
  double worst_margin = 0.0;
};

struct DominationOptions {
  int samples = 10000;
  std::uint64_t seed = 0x5eed;
  double matrix_tol = 1e-9;
  double pointwise_tol = 1e-12;  // on log densities
};

DominationResult domination_check(const GaussianState& state, const SymplecticMatrix& s_a,
                                  const SymplecticMatrix& s_b, DominationMode mode,
                                  const DominationOptions& opts = {});

}  // namespace gaussep
