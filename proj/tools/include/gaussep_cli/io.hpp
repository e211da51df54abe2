#pragma once

// JSON state files, verdict reports and certificates.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"

#include "gaussep/gaussian_state.hpp"
#include "gaussep/separability.hpp"

namespace gaussep::cli {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kOrdering = "xp-blocks-per-subsystem";
inline constexpr double kLoadSymmetryTol = 1e-12;

/// Anything wrong with user input. Maps to exit code 64.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StateFile {
  double hbar = 1.0;
  int n_a = 1;
  int n_b = 1;
  SymMatrix sigma = SymMatrix::identity(2);
  Vector mean;  // empty means zeros
  std::string label;
};

/// `origin` names the source in diagnostics ("path:line: field 'x': ...").
StateFile parse_state_file(std::string_view text, std::string_view origin = "<input>");
StateFile load_state_file(const std::filesystem::path& path);
Json state_to_json(const StateFile& state);

std::string read_text_file(const std::filesystem::path& path);
/// Throws InputError when the file cannot be written.
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Two-space indented; doubles in shortest round-trip form.
std::string dump(const Json& j);

Json matrix_to_json(const Matrix& m);
Json vector_to_json(const Vector& v);

/// Parsed JSON document with enough of the raw text kept for line numbers.
class Document {
 public:
  Document(std::string text, std::string origin);

  const Json& root() const noexcept { return root_; }
  const std::string& origin() const noexcept { return origin_; }

  [[noreturn]] void fail(std::string_view field, std::string_view what) const;

  const Json& require(const Json& obj, std::string_view field) const;
  double number(const Json& j, std::string_view field) const;
  int integer(const Json& j, std::string_view field) const;
  Matrix matrix(const Json& j, std::string_view field, std::optional<Index> rows = {},
                std::optional<Index> cols = {}) const;
  Vector vector(const Json& j, std::string_view field, std::optional<Index> size = {}) const;

 private:
  int line_of(std::string_view field) const;

  std::string text_;
  std::string origin_;
  Json root_;
};

struct CertificateFile {
  Matrix p_a;  // raw, unsymmetrized, so tampering stays visible
  Matrix p_b;
};

/// Accepts either a full verdict report or a bare {"P_A": ..., "P_B": ...}.
CertificateFile parse_certificate_file(std::string_view text, std::string_view origin = "<input>");
CertificateFile load_certificate_file(const std::filesystem::path& path);

/// Bare 2x2 (or 2n x 2n) matrix file: either {"S": [[...]]} or [[...]].
Matrix load_matrix_file(const std::filesystem::path& path, std::string_view key);

struct ConfigEcho {
  double hbar = 1.0;
  std::string hbar_source = "file";
  SolverConfig solver;
  std::string tol_source = "default";
  std::string max_iter_source = "default";
};

Json certificate_to_json(const SeparabilityCertificate& cert);
Json report_to_json(const GaussianState& state, const CriterionReport& report, double wall_time_ms,
                    const ConfigEcho& config, std::string_view label);

}  // namespace gaussep::cli
