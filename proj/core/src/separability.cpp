#include "gaussep/separability.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <sstream>
#include <vector>

#include "gaussep/errors.hpp"
#include "gaussep/nelder_mead.hpp"
#include "gaussep/random.hpp"

namespace gaussep {

namespace {

// S^{-1} = -J S^T J for symplectic S.
Matrix symplectic_inverse(const SymplecticMatrix& s) {
  const Matrix j = standard_J(s.modes()).matrix();
  return -j * s.matrix().transpose() * j;
}

// Smallest eigenvalue of M + (i hbar/2) J.
double shifted_cone_margin(const SymMatrix& m, const SymplecticForm& j, double hbar) {
  return min_eigenvalue(HermMatrix(m, 0.5 * hbar * j.matrix()));
}

// Clip the spectrum of a Hermitian matrix from below at `floor`.
CMatrix clip_below(const CMatrix& h, double floor) {
  const HermEigen e = herm_eig(HermMatrix(h));
  const Vector clipped = e.values.cwiseMax(floor);
  return e.vectors * clipped.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

struct BlockResiduals {
  double outer = 0.0;  // max(0, -min eig(Sigma - M))
  double local = 0.0;  // worst shifted-cone violation of the diagonal blocks
};

BlockResiduals residuals_at(const SymMatrix& sigma, const SymMatrix& m, const Partition& partition, double hbar) {
  BlockResiduals r;
  r.outer = std::max(0.0, -min_eigenvalue(sigma - m));
  r.local = std::max({0.0, -shifted_cone_margin(partition.block_a(m), partition.form_a(), hbar),
                      -shifted_cone_margin(partition.block_b(m), partition.form_b(), hbar)});
  return r;
}

void require_bona_fide(const SymMatrix& sigma, double hbar, const SymplecticForm& j) {
  const double margin = hermitian_bona_fide_margin(sigma, hbar, j);
  if (margin < -kDefaultTolerances.bona_fide * std::max(1.0, sigma.max_abs())) {
    throw Error(ErrorCode::NotBonaFide, "covariance violates Sigma + (i hbar/2) J >= 0", margin);
  }
}

SymMatrix param_block(const Vector& params, Index offset, int modes) {
  Matrix a = Matrix::Zero(modes, modes);
  Matrix b = Matrix::Zero(modes, modes);
  Index k = offset;
  for (int i = 0; i < modes; ++i) {
    for (int j = i; j < modes; ++j) {
      a(i, j) = a(j, i) = params(k++);
      b(i, j) = b(j, i) = params(k++);
    }
  }
  return lie_symmetric_element(SymMatrix(a), SymMatrix(b));
}

void write_param_block(const SymMatrix& x, Vector& params, Index offset, int modes) {
  Index k = offset;
  for (int i = 0; i < modes; ++i) {
    for (int j = i; j < modes; ++j) {
      params(k++) = x(i, j);
      params(k++) = x(i, modes + j);
    }
  }
}

Index param_count(int modes) { return static_cast<Index>(modes) * (modes + 1); }

}  // namespace

std::string_view verdict_name(const SeparabilityVerdict& v) noexcept {
  switch (v.index()) {
    case 0: return "separable";
    case 1: return "entangled";
    default: return "undetermined";
  }
}

// ---------------------------------------------------------------------------
// PPT

SymMatrix partial_transpose(const SymMatrix& sigma, const Partition& partition) {
  if (sigma.dim() != partition.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "partial_transpose: covariance size differs from partition");
  }
  Vector flip = Vector::Ones(partition.dim());
  flip.tail(partition.n_b()).setConstant(-1.0);
  return SymMatrix(sigma.matrix().cwiseProduct(flip * flip.transpose()));
}

PptResult ppt_test(const GaussianState& state, const Tolerances& tol) {
  const SymMatrix flipped = partial_transpose(state.sigma(), state.partition());
  PptResult out;
  out.nu_tilde = symplectic_eigenvalues(flipped, state.partition().form(), tol);
  const double threshold = 0.5 * state.hbar();
  const double band = tol.bona_fide * std::max(1.0, state.sigma().max_abs());
  const double nu_min = out.nu_tilde.minCoeff();
  out.pass = nu_min >= threshold - band;
  if (!out.pass) out.witness = EntanglementWitness{nu_min, threshold};
  return out;
}

// ---------------------------------------------------------------------------
// Werner-Wolf feasibility

namespace {

FeasibilityResult dykstra_feasibility(const SymMatrix& sigma, const Partition& partition, double hbar,
                                      const SolverConfig& cfg) {
  const Index d = partition.dim();
  const Index da = 2 * partition.n_a();
  const Index db = 2 * partition.n_b();
  const Matrix k_a = 0.5 * hbar * partition.form_a().matrix();
  const Matrix k_b = 0.5 * hbar * partition.form_b().matrix();

  FeasibilityResult out;

  // A block-diagonal M is repairable iff min eig(Sigma - M) + min local margin
  // >= 0: shifting M by c = (outer - local) / 2 leaves both margins equal.
  auto try_accept = [&](const Matrix& m_a, const Matrix& m_b) {
    const double outer = min_eigenvalue(SymMatrix(sigma.matrix() - direct_sum(m_a, m_b)));
    const double local = std::min(shifted_cone_margin(SymMatrix(m_a), partition.form_a(), hbar),
                                  shifted_cone_margin(SymMatrix(m_b), partition.form_b(), hbar));
    out.residual = std::max(0.0, -(outer + local));
    if (outer + local < 0.0) return false;
    const double c = (outer >= 0.0 && local >= 0.0) ? 0.0 : 0.5 * (outer - local);
    const SymMatrix sa(m_a + c * Matrix::Identity(da, da));
    const SymMatrix sb(m_b + c * Matrix::Identity(db, db));
    const BlockResiduals r = residuals_at(sigma, direct_sum(sa, sb), partition, hbar);
    out.residual = std::max(r.outer, r.local);
    if (r.outer < cfg.residual_tol && r.local < cfg.residual_tol) {
      out.pair = WernerWolfPair{sa, sb};
      return true;
    }
    return false;
  };

  const Matrix start_a = sigma.matrix().topLeftCorner(da, da);
  const Matrix start_b = sigma.matrix().bottomRightCorner(db, db);
  if (try_accept(start_a, start_b)) return out;

  // Dykstra in the lifted space of triples (U, V_A, V_B) between the affine set
  // {(Sigma - M, M_A + iK_A, M_B + iK_B) : M = M_A (+) M_B} and the cones
  // {U >= eps I, V_A >= eps I, V_B >= eps I}, with K_X = (hbar/2) J_X. Both
  // projections are exact: the affine one averages the two estimates of each
  // diagonal block, the conic one clips eigenvalues. Positive eps aims at an
  // interior point so the shift repair succeeds after finitely many steps; the
  // schedule ends at eps = 0 for states on the boundary.
  struct Lifted {
    Matrix u;
    CMatrix v_a;
    CMatrix v_b;
  };
  auto affine_point = [&](const Matrix& m_a, const Matrix& m_b) {
    CMatrix v_a(da, da), v_b(db, db);
    v_a.real() = m_a;
    v_a.imag() = k_a;
    v_b.real() = m_b;
    v_b.imag() = k_b;
    return Lifted{sigma.matrix() - direct_sum(m_a, m_b), v_a, v_b};
  };
  auto affine_blocks = [&](const Lifted& z) {
    const Matrix m_a = 0.5 * (sigma.matrix().topLeftCorner(da, da) - z.u.topLeftCorner(da, da) + z.v_a.real());
    const Matrix m_b =
        0.5 * (sigma.matrix().bottomRightCorner(db, db) - z.u.bottomRightCorner(db, db) + z.v_b.real());
    return std::pair{Matrix(0.5 * (m_a + m_a.transpose())), Matrix(0.5 * (m_b + m_b.transpose()))};
  };
  auto distance = [](const Lifted& a, const Lifted& b) {
    return std::sqrt((a.u - b.u).squaredNorm() + (a.v_a - b.v_a).squaredNorm() + (a.v_b - b.v_b).squaredNorm());
  };
  const Matrix eye = Matrix::Identity(d, d);

  const std::array<double, 4> margins{5e-2 * hbar, 1e-3 * hbar, 1e-5 * hbar, 0.0};
  const int budget = std::max(1, cfg.max_iter / static_cast<int>(margins.size()));
  double best_residual = out.residual;

  for (double eps : margins) {
    Lifted x = affine_point(start_a, start_b);
    Lifted p{Matrix::Zero(d, d), CMatrix::Zero(da, da), CMatrix::Zero(db, db)};
    std::vector<double> gaps;
    for (int k = 1; k <= budget; ++k) {
      const Lifted in{x.u + p.u, x.v_a + p.v_a, x.v_b + p.v_b};
      const Lifted y{psd_project(SymMatrix(in.u - eps * eye)).matrix() + eps * eye, clip_below(in.v_a, eps),
                     clip_below(in.v_b, eps)};
      p = Lifted{in.u - y.u, in.v_a - y.v_a, in.v_b - y.v_b};
      const auto [m_a, m_b] = affine_blocks(y);
      x = affine_point(m_a, m_b);
      ++out.iterations;

      if (try_accept(m_a, m_b)) return out;
      best_residual = std::min(best_residual, out.residual);

      gaps.push_back(distance(x, y));
      if (static_cast<int>(gaps.size()) > cfg.stall_window) {
        const double before = gaps[gaps.size() - 1 - static_cast<std::size_t>(cfg.stall_window)];
        if (gaps.back() > cfg.stall_factor * before) {
          out.stalled = true;
          break;
        }
      }
    }
  }
  out.residual = best_residual;
  return out;
}

}  // namespace

FeasibilityResult werner_wolf_feasibility(const SymMatrix& sigma, const Partition& partition, double hbar,
                                          const SolverConfig& cfg) {
  if (sigma.dim() != partition.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "werner_wolf_feasibility: covariance size differs from partition");
  }
  require_bona_fide(sigma, hbar, partition.form());

  // The problem is invariant under local symplectic congruence T = T_A (+) T_B,
  // so solve it in the frame where both marginals are in Williamson normal
  // form. This removes most of the conditioning of strongly squeezed inputs.
  const WilliamsonDecomposition wa = williamson(partition.block_a(sigma), partition.form_a());
  const WilliamsonDecomposition wb = williamson(partition.block_b(sigma), partition.form_b());
  const Matrix j_a = partition.form_a().matrix();
  const Matrix j_b = partition.form_b().matrix();
  const Matrix t = direct_sum(Matrix(-j_a * wa.S.transpose() * j_a), Matrix(-j_b * wb.S.transpose() * j_b));
  const SymMatrix normalized(t * sigma.matrix() * t.transpose());

  FeasibilityResult out = dykstra_feasibility(normalized, partition, hbar, cfg);
  if (!out.pair) return out;

  const SymMatrix sa(wa.S * out.pair->sigma_a.matrix() * wa.S.transpose());
  const SymMatrix sb(wb.S * out.pair->sigma_b.matrix() * wb.S.transpose());
  const BlockResiduals r = residuals_at(sigma, direct_sum(sa, sb), partition, hbar);
  out.residual = std::max(r.outer, r.local);
  if (r.outer < cfg.residual_tol && r.local < cfg.residual_tol) {
    out.pair = WernerWolfPair{sa, sb};
  } else {
    out.pair.reset();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Certificates

double certificate_check(const SymMatrix& sigma, const Matrix& p_a, const Matrix& p_b, double hbar,
                         double symplectic_tol) {
  if (sigma.dim() != p_a.rows() + p_b.rows() || p_a.rows() != p_a.cols() || p_b.rows() != p_b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "certificate blocks do not match the covariance size");
  }
  if (!is_posdef_symplectic(p_a, symplectic_tol)) {
    throw Error(ErrorCode::NotSymplectic, "P_A is not a positive definite symplectic matrix");
  }
  if (!is_posdef_symplectic(p_b, symplectic_tol)) {
    throw Error(ErrorCode::NotSymplectic, "P_B is not a positive definite symplectic matrix");
  }
  return min_eigenvalue(SymMatrix(sigma.matrix() - 0.5 * hbar * direct_sum(p_a, p_b)));
}

std::optional<DirectSearchResult> direct_symplectic_search(const GaussianState& state, const SolverConfig& cfg) {
  const Partition& part = state.partition();
  const int na = part.n_a();
  const int nb = part.n_b();
  const double hbar = state.hbar();
  const Index np = param_count(na) + param_count(nb);

  auto unpack = [&](const Vector& v) {
    const SymMatrix pa = expm_sym(param_block(v, 0, na));
    const SymMatrix pb = expm_sym(param_block(v, param_count(na), nb));
    return std::pair{pa, pb};
  };
  auto slack_of = [&](const Vector& v) {
    const auto [pa, pb] = unpack(v);
    return min_eigenvalue(SymMatrix(state.sigma().matrix() - 0.5 * hbar * direct_sum(pa.matrix(), pb.matrix())));
  };

  std::vector<Vector> starts{Vector::Zero(np)};
  try {
    Vector w(np);
    write_param_block(logm_spd(blob_extract(part.block_a(state.sigma()), hbar, part.form_a())), w, 0, na);
    write_param_block(logm_spd(blob_extract(part.block_b(state.sigma()), hbar, part.form_b())), w,
                      param_count(na), nb);
    starts.push_back(w);
  } catch (const Error&) {
    // Marginals of a bona-fide state are bona fide; only the zero start is lost.
  }

  NelderMeadOptions opts;
  opts.max_evaluations = cfg.direct_search_max_evaluations;
  opts.good_enough = [](double v) { return v < 0.0; };

  std::optional<DirectSearchResult> best;
  int evaluations = 0;
  for (const Vector& x0 : starts) {
    const NelderMeadResult r = nelder_mead([&](const Vector& v) { return -slack_of(v); }, x0, opts);
    evaluations += r.evaluations;
    const double slack = -r.value;
    if (!best || slack > best->slack) {
      auto [pa, pb] = unpack(r.x);
      best = DirectSearchResult{pa, pb, slack, 0};
    }
    if (slack > 0.0) break;
  }
  if (!best || best->slack < -cfg.cert_tol) return std::nullopt;
  best->evaluations = evaluations;
  return best;
}

namespace {

// Rounding in Williamson leaves P slightly off the group; exp of the Lie
// algebra part of log P is symplectic to machine precision.
SymMatrix polish_posdef_symplectic(const SymMatrix& p) {
  const Matrix j = standard_J(static_cast<int>(p.dim() / 2)).matrix();
  const Matrix l = logm_spd(p).matrix();
  return expm_sym(SymMatrix(0.5 * (l + j * l * j)));
}

std::optional<SeparabilityCertificate> certify_from_blocks(const GaussianState& state, const SymMatrix& sigma_a,
                                                           const SymMatrix& sigma_b, const SymMatrix& p_a_raw,
                                                           const SymMatrix& p_b_raw, const SolverConfig& cfg,
                                                           std::string source) {
  const SymMatrix p_a = polish_posdef_symplectic(p_a_raw);
  const SymMatrix p_b = polish_posdef_symplectic(p_b_raw);
  double slack = 0.0;
  try {
    slack = certificate_check(state.sigma(), p_a.matrix(), p_b.matrix(), state.hbar());
  } catch (const Error&) {
    return std::nullopt;
  }
  if (slack < -cfg.cert_tol) return std::nullopt;
  // Symmetric factor S = P^{-1/2}, so (S^T S)^{-1} = P.
  return SeparabilityCertificate{p_a,     p_b,     inv_sqrtm_spd(p_a), inv_sqrtm_spd(p_b),
                                 slack,   sigma_a, sigma_b,            std::move(source)};
}

}  // namespace

CriterionReport run_criterion(const GaussianState& state, const SolverConfig& cfg) {
  CriterionReport out{Undetermined{}, ppt_test(state), 0, 0.0};
  if (!out.ppt.pass) {
    out.verdict = Entangled{*out.ppt.witness};
    return out;
  }

  const Partition& part = state.partition();
  const FeasibilityResult ww = werner_wolf_feasibility(state.sigma(), part, state.hbar(), cfg);
  out.solver_iterations = ww.iterations;
  out.solver_residual = ww.residual;
  if (ww.pair) {
    try {
      const SymMatrix p_a = blob_extract(ww.pair->sigma_a, state.hbar(), part.form_a());
      const SymMatrix p_b = blob_extract(ww.pair->sigma_b, state.hbar(), part.form_b());
      if (auto cert = certify_from_blocks(state, ww.pair->sigma_a, ww.pair->sigma_b, p_a, p_b, cfg, "werner-wolf")) {
        out.verdict = Separable{std::move(*cert)};
        return out;
      }
    } catch (const Error&) {
      // A block slipped outside the quantum condition by more than tolerance;
      // fall through to the direct search.
    }
  }

  if (cfg.direct_search_fallback) {
    if (auto found = direct_symplectic_search(state, cfg)) {
      const SymMatrix sa = 0.5 * state.hbar() * found->p_a;
      const SymMatrix sb = 0.5 * state.hbar() * found->p_b;
      if (auto cert = certify_from_blocks(state, sa, sb, found->p_a, found->p_b, cfg, "direct-search")) {
        out.verdict = Separable{std::move(*cert)};
        return out;
      }
    }
  }

  out.verdict = Undetermined{ww.residual, ww.iterations};
  return out;
}

SeparabilityVerdict degosson_criterion(const GaussianState& state, const SolverConfig& cfg) {
  return run_criterion(state, cfg).verdict;
}

// ---------------------------------------------------------------------------
// Pure product states and domination

EqualityCase equality_case_state(const SymplecticMatrix& s_a, const SymplecticMatrix& s_b, double hbar) {
  const SymMatrix cov_a = 0.5 * hbar * inverse_spd(s_a.gram());
  const SymMatrix cov_b = 0.5 * hbar * inverse_spd(s_b.gram());
  GaussianState state = make_state(direct_sum(cov_a, cov_b), Vector(), hbar, Partition(s_a.modes(), s_b.modes()));
  return EqualityCase{std::move(state), pure_gaussian_from_symplectic(s_a, hbar),
                      pure_gaussian_from_symplectic(s_b, hbar)};
}

DominationResult domination_check(const GaussianState& state, const SymplecticMatrix& s_a,
                                  const SymplecticMatrix& s_b, DominationMode mode, const DominationOptions& opts) {
  const Partition& part = state.partition();
  if (s_a.modes() != part.n_a() || s_b.modes() != part.n_b()) {
    throw Error(ErrorCode::DimensionMismatch, "domination_check: symplectic factors do not match the partition");
  }
  if (state.mean().cwiseAbs().maxCoeff() != 0.0) {
    throw Error(ErrorCode::NonzeroMean, "domination is defined for centered states");
  }
  const double hbar = state.hbar();

  DominationResult out;
  if (mode == DominationMode::Matrix) {
    const Matrix floor = 0.5 * hbar * direct_sum(inverse_spd(s_a.gram()).matrix(), inverse_spd(s_b.gram()).matrix());
    out.worst_margin = min_eigenvalue(SymMatrix(state.sigma().matrix() - floor));
    out.holds = out.worst_margin >= -opts.matrix_tol;
    return out;
  }

  if (opts.samples < 1) throw Error(ErrorCode::InvalidArgument, "domination_check: need at least one sample");
  const Matrix chol = Eigen::LLT<Matrix>(4.0 * state.sigma().matrix()).matrixL();
  const Matrix s_inv = direct_sum(symplectic_inverse(s_a), symplectic_inverse(s_b));
  const double log_mu = std::log(purity(state));
  SplitMix64 rng(opts.seed);
  Vector g(part.dim());
  out.worst_margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < opts.samples; ++k) {
    for (Index i = 0; i < g.size(); ++i) g(i) = rng.normal();
    const Vector z = chol * g;
    const double lhs = log_wigner_density(state, s_inv * z);
    const double rhs = log_mu + log_standard_coherent_wigner(part.z_a(z), part.n_a(), hbar) +
                       log_standard_coherent_wigner(part.z_b(z), part.n_b(), hbar);
    out.worst_margin = std::min(out.worst_margin, lhs - rhs);
  }
  out.holds = out.worst_margin >= -opts.pointwise_tol;
  return out;
}

}  // namespace gaussep
