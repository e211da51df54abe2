#pragma once

// The gaussep command-line surface. Every command is callable in-process.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gaussep/separability.hpp"

namespace gaussep::cli {

inline constexpr int kExitSeparable = 0;
inline constexpr int kExitEntangled = 1;
inline constexpr int kExitUndetermined = 2;
inline constexpr int kExitInputError = 64;

int exit_code_for(const SeparabilityVerdict& verdict) noexcept;

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct CheckOptions {
  std::filesystem::path state;
  std::optional<double> hbar;
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::optional<std::filesystem::path> report;
};
int cmd_check(const CheckOptions& opts, std::ostream& out, std::ostream& err);

struct RandomOptions {
  std::string kind = "random_bonafide";
  std::string modes = "1+1";
  std::uint64_t seed = 0;
  int count = 1;
  double spread = 0.5;
  double r = 0.5;
  double t = 0.0;
  double hbar = 1.0;
  std::vector<double> nu;  // thermal_product only; overrides the random draw
  std::filesystem::path out_dir;
};
int cmd_random(const RandomOptions& opts, std::ostream& out, std::ostream& err);

struct SweepOptions {
  std::string kind = "tmsv_noisy";
  double r = 0.5;
  double t_min = 0.0;
  double t_max = 1.0;
  int steps = 50;
  double hbar = 1.0;
  int threads = 0;  // 0 = hardware concurrency
  std::filesystem::path out;
};

struct SweepRow {
  double t = 0.0;
  bool ppt_pass = false;
  double nu_tilde_min = 0.0;
  std::string verdict;
  double slack_or_residual = 0.0;  // slack, nu_tilde_min - hbar/2, or solver residual
  int iterations = 0;
};

/// Rows ordered by t whatever order the workers finish in.
std::vector<SweepRow> sweep_rows(const SweepOptions& opts);
std::string sweep_csv(const std::vector<SweepRow>& rows);
int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err);

struct CertifyOptions {
  std::filesystem::path state;
  std::filesystem::path certificate;
  double cert_tol = 1e-9;
  double symplectic_tol = 1e-9;
};
int cmd_certify(const CertifyOptions& opts, std::ostream& out, std::ostream& err);

struct GridSpec {
  double x0 = 0.0, x1 = 0.0;
  int nx = 1;
  double p0 = 0.0, p1 = 0.0;
  int np = 1;
};
/// "x0:x1:nx,p0:p1:np". Throws InputError.
GridSpec parse_grid(const std::string& text);

struct WignerCompareOptions {
  std::filesystem::path s_path;
  std::string grid = "-1:1:5,-1:1:5";
  double hbar = 1.0;
  double max_error = 1e-5;
};
int cmd_wigner_compare(const WignerCompareOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace gaussep::cli
