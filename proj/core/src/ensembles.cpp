#include "gaussep/ensembles.hpp"

#include <cmath>
#include <sstream>

#include "gaussep/errors.hpp"
#include "gaussep/random.hpp"
#include "gaussep/symplectic.hpp"

namespace gaussep {

SymMatrix tmsv_covariance(double r, double hbar, int pairs) {
  if (pairs < 1) throw Error(ErrorCode::InvalidArgument, "tmsv: need at least one mode pair");
  const Index d = 2 * pairs;
  const double c = std::cosh(2.0 * r);
  const double s = std::sinh(2.0 * r);
  Vector z(d);
  z << Vector::Ones(pairs), -Vector::Ones(pairs);
  Matrix m(2 * d, 2 * d);
  m << c * Matrix::Identity(d, d), s * Matrix(z.asDiagonal()), s * Matrix(z.asDiagonal()), c * Matrix::Identity(d, d);
  return SymMatrix(0.5 * hbar * m);
}

SymMatrix tmsv_noisy_covariance(double r, double t, double hbar, int pairs) {
  const SymMatrix base = tmsv_covariance(r, hbar, pairs);
  return base + t * SymMatrix::identity(base.dim());
}

SymMatrix thermal_covariance(const Vector& nu) {
  Vector d(2 * nu.size());
  d << nu, nu;
  return SymMatrix::diagonal(d);
}

SymMatrix random_bonafide_covariance(int modes, std::uint64_t seed, double spread, double hbar) {
  const SymplecticMatrix s = random_symplectic(modes, seed, spread);
  // Separate stream for the spectrum so it does not alias the S draws.
  SplitMix64 rng(seed ^ 0xA5A5A5A5DEADBEEFull);
  Vector nu(modes);
  for (int i = 0; i < modes; ++i) nu(i) = rng.uniform(0.5 * hbar, 0.5 * hbar + spread);
  return SymMatrix(s.matrix() * thermal_covariance(nu).matrix() * s.matrix().transpose());
}

SymMatrix random_bonafide_covariance(const Partition& partition, std::uint64_t seed, double spread, double hbar) {
  return partition.from_global_ordering(random_bonafide_covariance(partition.modes(), seed, spread, hbar));
}

EnsembleKind parse_ensemble_kind(std::string_view name) {
  if (name == "thermal_product") return EnsembleKind::ThermalProduct;
  if (name == "random_bonafide") return EnsembleKind::RandomBonafide;
  if (name == "tmsv") return EnsembleKind::Tmsv;
  if (name == "tmsv_noisy") return EnsembleKind::TmsvNoisy;
  throw Error(ErrorCode::InvalidArgument, "unknown ensemble kind '" + std::string(name) + "'");
}

std::string_view to_string(EnsembleKind kind) noexcept {
  switch (kind) {
    case EnsembleKind::ThermalProduct: return "thermal_product";
    case EnsembleKind::RandomBonafide: return "random_bonafide";
    case EnsembleKind::Tmsv: return "tmsv";
    case EnsembleKind::TmsvNoisy: return "tmsv_noisy";
  }
  return "unknown";
}

void EnsembleSpec::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidArgument, msg); };
  if (n_a < 1 || n_b < 1) fail("modes must be >= 1 on each side");
  if (count < 1) fail("count must be >= 1");
  if (!(hbar > 0.0)) fail("hbar must be positive");
  if (!(spread >= 0.0)) fail("spread must be >= 0");
  if (!(r >= 0.0)) fail("squeezing r must be >= 0");
  if (!(t >= 0.0)) fail("noise t must be >= 0");
  if ((kind == EnsembleKind::Tmsv || kind == EnsembleKind::TmsvNoisy) && n_a != n_b) {
    fail("tmsv ensembles need equal mode counts on both sides");
  }
}

std::vector<GeneratedState> generate_ensemble(const EnsembleSpec& spec) {
  spec.validate();
  const int modes = spec.n_a + spec.n_b;
  std::vector<GeneratedState> out;
  out.reserve(static_cast<std::size_t>(spec.count));
  for (int k = 0; k < spec.count; ++k) {
    const std::uint64_t seed = spec.seed + static_cast<std::uint64_t>(k);
    std::ostringstream label;
    label << to_string(spec.kind);
    switch (spec.kind) {
      case EnsembleKind::ThermalProduct: {
        SplitMix64 rng(seed);
        Vector nu(modes);
        for (int i = 0; i < modes; ++i) nu(i) = rng.uniform(0.5 * spec.hbar, 0.5 * spec.hbar + spec.spread);
        label << " seed=" << seed;
        out.push_back({thermal_covariance(nu), label.str()});
        break;
      }
      case EnsembleKind::RandomBonafide:
        label << " seed=" << seed << " spread=" << spec.spread;
        out.push_back({random_bonafide_covariance(Partition(spec.n_a, spec.n_b), seed, spec.spread, spec.hbar),
                       label.str()});
        break;
      case EnsembleKind::Tmsv:
        label << " r=" << spec.r;
        out.push_back({tmsv_covariance(spec.r, spec.hbar, spec.n_a), label.str()});
        break;
      case EnsembleKind::TmsvNoisy:
        label << " r=" << spec.r << " t=" << spec.t;
        out.push_back({tmsv_noisy_covariance(spec.r, spec.t, spec.hbar, spec.n_a), label.str()});
        break;
    }
  }
  return out;
}

}  // namespace gaussep
